#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "combnoise/calibration.hpp"
#include "combnoise/constants.hpp"
#include "combnoise/cavity.hpp"
#include "combnoise/comb_model.hpp"
#include "combnoise/covariance.hpp"
#include "combnoise/errors.hpp"
#include "combnoise/io.hpp"
#include "combnoise/noise_sim.hpp"
#include "combnoise/version.hpp"

namespace combnoise::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

const json& need(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key))
        throw DomainError(ctx + ": missing required field '" + key + "'");
    return j.at(key);
}

double need_number(const json& j, const char* key, const std::string& ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number()) throw DomainError(ctx + ": field '" + key + "' must be a number");
    return v.get<double>();
}

double opt_number(const json& j, const char* key, double fallback, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw DomainError(ctx + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DomainError("cannot create output directory: " + dir);
}

CavityParams cavity_from_json(const json& j, const std::string& ctx) {
    if (j.contains("finesse")) {
        const double fr = need_number(j, "f_rep_hz", ctx);
        const double fin = need_number(j, "finesse", ctx);
        if (j.contains("t_max"))
            return CavityParams::from_finesse(fin, fr, need_number(j, "t_max", ctx));
        return CavityParams::from_finesse(fin, fr);
    }
    return CavityParams::from_mirrors(need_number(j, "r1", ctx), need_number(j, "r2", ctx),
                                      need_number(j, "t1", ctx), need_number(j, "t2", ctx),
                                      need_number(j, "f_rep_hz", ctx));
}

Psd psd_from_json(const json& j, const std::string& ctx) {
    const std::string type = need(j, "type", ctx).get<std::string>();
    const double level = need_number(j, "level", ctx);
    if (!(level >= 0.0) || !std::isfinite(level))
        throw DomainError(ctx + ": psd level must be finite and non-negative");
    if (type == "flat") return flat_psd(level);
    if (type == "power_law") {
        const double ref = need_number(j, "ref_hz", ctx);
        const double expo = need_number(j, "exponent", ctx);
        if (!(ref > 0.0)) throw DomainError(ctx + ": ref_hz must be positive");
        if (!std::isfinite(expo)) throw DomainError(ctx + ": exponent must be finite");
        return power_law_psd(level, ref, expo);
    }
    if (type == "lorentzian") {
        const double knee = need_number(j, "knee_hz", ctx);
        if (!(knee > 0.0)) throw DomainError(ctx + ": knee_hz must be positive");
        return lorentzian_psd(level, knee);
    }
    throw DomainError(ctx + ": unknown psd type '" + type + "' (want flat|power_law|lorentzian)");
}

struct ParsedSim {
    io::Geometry geometry;
    SimConfig config;
    std::vector<Quadrature> quadratures;
};

ParsedSim load_sim_config(const SimulateOptions& opt) {
    const std::string& path = opt.config_path;
    const json j = io::load_json(path);

    // comb geometry
    const json& env = need(j, "envelope", path);
    const double center_m = need_number(env, "center_nm", path + " envelope") * 1e-9;
    const bool flat = env.contains("flat") && env.at("flat").is_boolean() &&
                      env.at("flat").get<bool>();
    const std::size_t grid_points = static_cast<std::size_t>(
        opt_number(env, "grid_points", 512.0, path + " envelope"));
    double fwhm_m = std::numeric_limits<double>::infinity();
    double span_m = 0.0;
    if (env.contains("span_nm")) {
        span_m = need_number(env, "span_nm", path + " envelope") * 1e-9;
    }
    if (!flat) {
        fwhm_m = need_number(env, "fwhm_nm", path + " envelope") * 1e-9;
        if (span_m == 0.0)
            span_m = opt_number(env, "span_fwhm", 6.0, path + " envelope") * fwhm_m;
    } else if (span_m == 0.0) {
        throw DomainError(path + " envelope: flat spectra need an explicit span_nm");
    }

    const std::size_t zones = opt.zones.value_or(static_cast<std::size_t>(
        opt_number(j, "zones", 10.0, path)));

    ParsedSim out;
    const FrequencyGrid grid = wavelength_uniform_grid(center_m, span_m, grid_points);
    out.geometry.envelope = gaussian_envelope(center_m, fwhm_m, grid);
    out.geometry.bands = partition(out.geometry.envelope, zones);

    // sampling plan
    SimConfig& cfg = out.config;
    cfg.zone_powers = out.geometry.bands.powers;
    cfg.n_samples = opt.samples.value_or(
        static_cast<std::size_t>(opt_number(j, "samples", 0.0, path)));
    if (cfg.n_samples == 0) throw DomainError(path + ": missing required field 'samples'");
    cfg.seed = opt.seed.value_or(
        static_cast<std::uint64_t>(opt_number(j, "seed", 0.0, path)));

    if (!opt.rf_override.empty()) {
        cfg.rf_frequencies_hz = opt.rf_override;
    } else {
        const json& rf = need(j, "rf_hz", path);
        if (!rf.is_array()) throw DomainError(path + ": 'rf_hz' must be an array");
        for (const auto& v : rf) {
            if (!v.is_number()) throw DomainError(path + ": 'rf_hz' entries must be numbers");
            cfg.rf_frequencies_hz.push_back(v.get<double>());
        }
    }
    std::sort(cfg.rf_frequencies_hz.begin(), cfg.rf_frequencies_hz.end());
    if (std::adjacent_find(cfg.rf_frequencies_hz.begin(), cfg.rf_frequencies_hz.end()) !=
        cfg.rf_frequencies_hz.end())
        throw DomainError(path + ": duplicate RF frequency");

    if (j.contains("cavity")) cfg.cavity = cavity_from_json(j.at("cavity"), path + " cavity");
    if (j.contains("amp_phase_coupling"))
        cfg.amp_phase_coupling = need_number(j, "amp_phase_coupling", path);

    // noise modes
    const TimingModes tm = timing_modes(out.geometry.envelope);
    if (j.contains("modes")) {
        const json& modes = j.at("modes");
        if (!modes.is_array()) throw DomainError(path + ": 'modes' must be an array");
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const std::string ctx = path + " modes[" + std::to_string(k) + "]";
            const json& m = modes.at(k);
            NoiseModeSpec spec;
            spec.quadrature =
                io::parse_quadrature(need(m, "quadrature", ctx).get<std::string>(), ctx);
            const std::string shape = need(m, "shape", ctx).get<std::string>();
            if (shape == "ceo") {
                spec.mode = discretize_mode(tm.ceo_raw, out.geometry.envelope,
                                            out.geometry.bands, ModeLabel::Ceo);
            } else if (shape == "rep") {
                spec.mode = discretize_mode(tm.rep_raw, out.geometry.envelope,
                                            out.geometry.bands, ModeLabel::Rep);
            } else if (shape == "custom") {
                const json& comp = need(m, "components", ctx);
                if (!comp.is_array() || comp.size() != zones)
                    throw DomainError(ctx + ": 'components' must list one entry per band");
                double norm2 = 0.0;
                for (const auto& c : comp) {
                    if (!c.is_number())
                        throw DomainError(ctx + ": 'components' entries must be numbers");
                    const double x = c.get<double>();
                    spec.mode.components.push_back(x);
                    norm2 += x * x;
                }
                if (norm2 == 0.0) throw DomainError(ctx + ": zero direction vector");
                for (double& x : spec.mode.components) x /= std::sqrt(norm2);
            } else {
                throw DomainError(ctx + ": unknown shape '" + shape + "' (want ceo|rep|custom)");
            }
            spec.psd = psd_from_json(need(m, "psd", ctx), ctx + " psd");
            cfg.modes.push_back(std::move(spec));
        }
    }

    // quadratures to simulate
    if (j.contains("quadratures")) {
        const json& q = j.at("quadratures");
        if (!q.is_array() || q.empty())
            throw DomainError(path + ": 'quadratures' must be a non-empty array");
        std::set<std::string> seen;
        for (const auto& v : q) {
            const std::string name = v.get<std::string>();
            if (!seen.insert(name).second)
                throw DomainError(path + ": duplicate quadrature '" + name + "'");
            out.quadratures.push_back(io::parse_quadrature(name, path));
        }
    } else {
        out.quadratures = {Quadrature::Amplitude, Quadrature::Phase};
    }

    cfg.validate();
    return out;
}

} // namespace

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("COMBNOISE_OUT_DIR"); env && *env) return env;
    return ".";
}

void cmd_simulate(const SimulateOptions& opt) {
    const auto t0 = Clock::now();
    if (opt.format != "csv" && opt.format != "json")
        throw DomainError("simulate: --format must be csv or json");
    const ParsedSim sim = load_sim_config(opt);

    const std::string dir = resolve_out_dir(opt.out_dir);
    ensure_out_dir(dir);

    std::vector<MeasuredVariance> rows;
    for (Quadrature quad : sim.quadratures)
        for (double f : sim.config.rf_frequencies_hz) {
            const auto batch = run_protocol(sim.config, quad, f, opt.workers);
            rows.insert(rows.end(), batch.begin(), batch.end());
        }

    const std::string meas_name = opt.format == "json" ? "measurements.json" : "measurements.csv";
    const std::string meas_path = out_path(dir, meas_name);
    if (opt.format == "json")
        io::write_measurements_json(meas_path, rows);
    else
        io::write_measurements_csv(meas_path, rows);

    const std::string geo_path = out_path(dir, "geometry.json");
    io::write_geometry(geo_path, sim.geometry);

    json manifest;
    manifest["command"] = "simulate";
    manifest["artifact_version"] = version_string;
    manifest["config"] = opt.config_path;
    manifest["seed"] = sim.config.seed;
    manifest["samples"] = sim.config.n_samples;
    manifest["zones"] = sim.geometry.bands.n_zones();
    manifest["rf_hz"] = sim.config.rf_frequencies_hz;
    manifest["measurement_rows"] = rows.size();
    manifest["outputs"] = {meas_name, "geometry.json"};
    manifest["timings_ms"] = {{"total", ms_since(t0)}};
    io::save_json(out_path(dir, "simulate_manifest.json"), manifest);
}

void cmd_analyze(const AnalyzeOptions& opt) {
    const auto t0 = Clock::now();
    if (opt.format != "csv" && opt.format != "json")
        throw DomainError("analyze: --format must be csv or json");
    const io::Geometry geo = io::read_geometry(opt.geometry_path);
    const std::vector<MeasuredVariance> rows = io::read_measurements(opt.measurements_path);
    if (rows.empty()) throw ProtocolError("analyze: no measurements in " + opt.measurements_path);

    const std::string dir = resolve_out_dir(opt.out_dir);
    ensure_out_dir(dir);

    // group rows by (quadrature, rf); frequency index is global and sorted
    std::map<std::pair<int, double>, std::vector<MeasuredVariance>> groups;
    std::set<double> freq_set;
    for (const auto& mv : rows) {
        groups[{mv.quadrature == Quadrature::Amplitude ? 0 : 1, mv.rf_hz}].push_back(mv);
        freq_set.insert(mv.rf_hz);
    }
    std::map<double, std::size_t> freq_index;
    for (double f : freq_set) freq_index.emplace(f, freq_index.size());

    const TimingModes tm = timing_modes(geo.envelope);
    const ModeVector w_ceo = discretize_mode(tm.ceo_raw, geo.envelope, geo.bands, ModeLabel::Ceo);
    const ModeVector w_rep = discretize_mode(tm.rep_raw, geo.envelope, geo.bands, ModeLabel::Rep);

    std::vector<std::string> outputs;
    PsdTrace ceo_trace, rep_trace;
    ceo_trace.label = TraceLabel::Ceo;
    rep_trace.label = TraceLabel::Rep;
    ceo_trace.units = rep_trace.units = PsdUnits::RelShotLinear;

    char fidx[8];
    for (const auto& [key, group] : groups) {
        const auto& [quad_tag, rf] = key;
        const NoiseMatrix matrix = assemble(group);
        const EigenDecomposition eig = eig_sym(matrix);

        std::snprintf(fidx, sizeof(fidx), "f%03zu", freq_index.at(rf));
        const std::string quad_name = io::quadrature_name(matrix.quadrature);
        const std::string matrix_name = "matrix_" + quad_name + "_" + fidx + ".csv";
        const std::string eigen_name = "eigen_" + quad_name + "_" + fidx + ".csv";
        io::write_matrix_csv(out_path(dir, matrix_name), matrix);
        io::write_eigen_csv(out_path(dir, eigen_name), matrix, eig);
        outputs.push_back(matrix_name);
        outputs.push_back(eigen_name);

        if (matrix.quadrature == Quadrature::Phase) {
            const auto [ceo, rep] = extract_collective(matrix, w_ceo, w_rep);
            // estimator noise can dip below the physical floor; clamp at zero
            ceo_trace.points.push_back({rf, std::max(ceo, 0.0), QualityFlag::Ok});
            rep_trace.points.push_back({rf, std::max(rep, 0.0), QualityFlag::Ok});
        }
    }

    if (!ceo_trace.points.empty()) {
        const std::string ext = opt.format == "json" ? ".json" : ".csv";
        for (const auto* tr : {&ceo_trace, &rep_trace}) {
            const std::string name = "trace_" + io::trace_label_name(tr->label) + ext;
            if (opt.format == "json")
                io::write_trace_json(out_path(dir, name), *tr);
            else
                io::write_trace_csv(out_path(dir, name), *tr);
            outputs.push_back(name);
        }
    }

    json manifest;
    manifest["command"] = "analyze";
    manifest["artifact_version"] = version_string;
    manifest["geometry"] = opt.geometry_path;
    manifest["measurements"] = opt.measurements_path;
    manifest["groups"] = groups.size();
    manifest["outputs"] = outputs;
    manifest["timings_ms"] = {{"total", ms_since(t0)}};
    io::save_json(out_path(dir, "analyze_manifest.json"), manifest);
}

namespace {

CavityParams cavity_from_flags(const std::optional<double>& finesse,
                               const std::optional<double>& t_max,
                               const std::optional<double>& r1, const std::optional<double>& r2,
                               const std::optional<double>& t1, const std::optional<double>& t2,
                               double f_rep_hz, const std::string& cmd) {
    const bool mirrors = r1 || r2 || t1 || t2;
    if (finesse && mirrors)
        throw DomainError(cmd + ": give either --finesse or mirror parameters, not both");
    if (!(f_rep_hz > 0.0)) throw DomainError(cmd + ": --f-rep-hz must be positive");
    if (finesse) {
        if (t_max) return CavityParams::from_finesse(*finesse, f_rep_hz, *t_max);
        return CavityParams::from_finesse(*finesse, f_rep_hz);
    }
    if (!(r1 && r2 && t1 && t2))
        throw DomainError(cmd + ": mirror cavities need --r1 --r2 --t1 --t2");
    if (t_max) throw DomainError(cmd + ": --t-max only applies to --finesse cavities");
    return CavityParams::from_mirrors(*r1, *r2, *t1, *t2, f_rep_hz);
}

} // namespace

void cmd_cavity(const CavityOptions& opt) {
    const auto t0 = Clock::now();
    const CavityParams p = cavity_from_flags(opt.finesse, opt.t_max, opt.r1, opt.r2, opt.t1,
                                             opt.t2, opt.f_rep_hz, "cavity");
    if (opt.points < 2) throw DomainError("cavity: --points must be at least 2");
    const double f_max = opt.f_max_hz > 0.0 ? opt.f_max_hz : 10.0 * p.f_c_hz;
    if (!(f_max > opt.f_min_hz) || opt.f_min_hz < 0.0)
        throw DomainError("cavity: need 0 <= --f-min-hz < --f-max-hz");

    const std::string dir = resolve_out_dir(opt.out_dir);
    ensure_out_dir(dir);
    const std::string path = out_path(dir, opt.out_name);

    std::ofstream f(path);
    if (!f) throw DomainError("cannot write file: " + path);
    f << "# finesse = " << io::fmt_g(p.finesse) << '\n';
    f << "# t_max = " << io::fmt_g(p.t_max) << '\n';
    f << "# f_c_hz = " << io::fmt_g(p.f_c_hz) << '\n';
    f << "# f_3db_hz = " << io::fmt_g(f_3db_hz(p)) << '\n';
    f << "# f_3db_over_f_c = " << io::fmt_g(f_3db_hz(p) / p.f_c_hz) << '\n';
    f << "f_hz,t_abs,t_arg,t_abs_lowfreq,t_abs_highfinesse,h,decoupling_db\n";
    for (std::size_t i = 0; i < opt.points; ++i) {
        const double fr = opt.f_min_hz + (f_max - opt.f_min_hz) * static_cast<double>(i) /
                                             static_cast<double>(opt.points - 1);
        const auto ex = transmission_exact(p, fr);
        f << io::fmt_g(fr) << ',' << io::fmt_g(std::abs(ex)) << ',' << io::fmt_g(std::arg(ex))
          << ',' << io::fmt_g(std::abs(transmission_lowfreq(p, fr).value)) << ','
          << io::fmt_g(std::abs(transmission_highfinesse(p, fr).value)) << ','
          << io::fmt_g(phase_transfer(p, fr)) << ','
          << io::fmt_g(db_from_linear(decoupling_factor(p, fr))) << '\n';
    }
    f.close();

    json manifest;
    manifest["command"] = "cavity";
    manifest["artifact_version"] = version_string;
    manifest["finesse"] = p.finesse;
    manifest["f_rep_hz"] = p.f_rep_hz;
    manifest["f_c_hz"] = p.f_c_hz;
    manifest["outputs"] = {opt.out_name};
    manifest["timings_ms"] = {{"total", ms_since(t0)}};
    io::save_json(out_path(dir, "cavity_manifest.json"), manifest);
}

void cmd_calibrate(const CalibrateOptions& opt) {
    const auto t0 = Clock::now();
    if (opt.format != "csv" && opt.format != "json")
        throw DomainError("calibrate: --format must be csv or json");
    const PsdUnits out_units = io::parse_units(opt.units, "calibrate --units");
    if (out_units == PsdUnits::RelShotLinear)
        throw DomainError("calibrate: --units must be rel_shot_db or dbc_hz");

    PsdTrace trace = io::read_trace(opt.trace_path);
    if (trace.units == PsdUnits::DbcPerHz)
        throw DomainError("calibrate: trace is already in dBc/Hz");
    if (trace.units == PsdUnits::RelShotLinear) {
        const double rbw = opt.rbw_hz.value_or(1.0);
        for (auto& pt : trace.points) pt.value = variance_to_rel_psd(pt.value, rbw);
        if (opt.rbw_hz) trace.rbw_hz = rbw;
        trace = trace_to_db(trace);
    }

    const CavityParams cav = cavity_from_flags(opt.finesse, opt.t_max, opt.r1, opt.r2, opt.t1,
                                               opt.t2, opt.f_rep_hz, "calibrate");

    PsdTrace out;
    double sql = 0.0;
    if (out_units == PsdUnits::DbcPerHz) {
        const bool beam = opt.power_w || opt.wavelength_nm;
        if (opt.sql_db_value && beam)
            throw DomainError("calibrate: give --sql-db or beam parameters, not both");
        if (opt.sql_db_value) {
            sql = *opt.sql_db_value;
        } else if (opt.power_w && opt.wavelength_nm) {
            if (!(*opt.wavelength_nm > 0.0))
                throw DomainError("calibrate: --wavelength-nm must be positive");
            sql = sql_db(*opt.power_w,
                         constants::speed_of_light_m_s / (*opt.wavelength_nm * 1e-9));
        } else {
            throw DomainError(
                "calibrate: dBc/Hz output needs --sql-db, or --power-w with --wavelength-nm");
        }
        out = correct_and_calibrate(trace, cav, sql);
    } else {
        if (opt.sql_db_value || opt.power_w || opt.wavelength_nm)
            throw DomainError("calibrate: shot floor parameters only apply to dBc/Hz output");
        out = correct_rel_shot(trace, cav);
    }

    const std::string dir = resolve_out_dir(opt.out_dir);
    ensure_out_dir(dir);
    const std::string name = "calibrated_" + io::trace_label_name(out.label) +
                             (opt.format == "json" ? ".json" : ".csv");
    if (opt.format == "json")
        io::write_trace_json(out_path(dir, name), out);
    else
        io::write_trace_csv(out_path(dir, name), out);

    json manifest;
    manifest["command"] = "calibrate";
    manifest["artifact_version"] = version_string;
    manifest["trace"] = opt.trace_path;
    manifest["units"] = io::units_name(out.units);
    manifest["finesse"] = cav.finesse;
    manifest["f_c_hz"] = cav.f_c_hz;
    if (out_units == PsdUnits::DbcPerHz) manifest["sql_db"] = sql;
    manifest["outputs"] = {name};
    manifest["timings_ms"] = {{"total", ms_since(t0)}};
    io::save_json(out_path(dir, "calibrate_manifest.json"), manifest);
}

} // namespace combnoise::cli
