#include "combnoise/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "combnoise/errors.hpp"

namespace combnoise::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw DomainError("cannot write file: " + path);
    return f;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Lines of a CSV body: comment headers ("# key = value") collected
// separately, blank lines skipped.
struct CsvContent {
    std::vector<std::pair<std::string, std::string>> headers;
    std::vector<std::string> rows;
};

CsvContent read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read file: " + path);
    CsvContent out;
    std::string line;
    while (std::getline(f, line)) {
        line = strip(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos)
                out.headers.emplace_back(strip(line.substr(1, eq - 1)), strip(line.substr(eq + 1)));
            continue;
        }
        out.rows.push_back(line);
    }
    return out;
}

std::string header_value(const CsvContent& csv, const std::string& key, const std::string& path) {
    for (const auto& [k, v] : csv.headers)
        if (k == key) return v;
    throw DomainError(path + ": missing '# " + key + " = ...' header line");
}

std::vector<std::size_t> parse_zone_set(const std::string& text, const std::string& where) {
    std::vector<std::size_t> zones;
    for (const std::string& part : split(text, '+')) {
        const std::string p = strip(part);
        if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError(where + ": bad band set '" + text + "'");
        zones.push_back(static_cast<std::size_t>(std::strtoull(p.c_str(), nullptr, 10)));
    }
    return zones;
}

std::string zone_set_text(const std::vector<std::size_t>& zones) {
    std::string s;
    for (std::size_t k = 0; k < zones.size(); ++k) {
        if (k) s += '+';
        s += std::to_string(zones[k]);
    }
    return s;
}

} // namespace

std::string fmt_g(double x) {
    if (std::isinf(x)) return x > 0 ? "INF" : "-INF";
    if (std::isnan(x)) throw DomainError("refusing to format NaN");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

double parse_number(const std::string& text, const std::string& where) {
    const std::string t = strip(text);
    if (t == "INF") return std::numeric_limits<double>::infinity();
    if (t == "-INF") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw DomainError(where + ": bad number '" + text + "'");
    return v;
}

std::string quadrature_name(Quadrature q) {
    return q == Quadrature::Amplitude ? "amplitude" : "phase";
}

Quadrature parse_quadrature(const std::string& s, const std::string& where) {
    if (s == "amplitude") return Quadrature::Amplitude;
    if (s == "phase") return Quadrature::Phase;
    throw DomainError(where + ": unknown quadrature '" + s + "' (want amplitude|phase)");
}

std::string units_name(PsdUnits u) {
    switch (u) {
        case PsdUnits::RelShotLinear: return "rel_shot_linear";
        case PsdUnits::RelShotDb: return "rel_shot_db";
        default: return "dbc_hz";
    }
}

PsdUnits parse_units(const std::string& s, const std::string& where) {
    if (s == "rel_shot_linear") return PsdUnits::RelShotLinear;
    if (s == "rel_shot_db") return PsdUnits::RelShotDb;
    if (s == "dbc_hz") return PsdUnits::DbcPerHz;
    throw DomainError(where + ": unknown units '" + s +
                      "' (want rel_shot_linear|rel_shot_db|dbc_hz)");
}

std::string trace_label_name(TraceLabel l) {
    switch (l) {
        case TraceLabel::Ceo: return "ceo";
        case TraceLabel::Rep: return "rep";
        default: return "custom";
    }
}

TraceLabel parse_trace_label(const std::string& s, const std::string& where) {
    if (s == "ceo") return TraceLabel::Ceo;
    if (s == "rep") return TraceLabel::Rep;
    if (s == "custom") return TraceLabel::Custom;
    throw DomainError(where + ": unknown trace label '" + s + "'");
}

std::string flag_name(QualityFlag f) {
    return f == QualityFlag::Ok ? "ok" : "high_correction";
}

QualityFlag parse_flag(const std::string& s, const std::string& where) {
    if (s == "ok") return QualityFlag::Ok;
    if (s == "high_correction") return QualityFlag::HighCorrection;
    throw DomainError(where + ": unknown quality flag '" + s + "'");
}

nlohmann::json load_json(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports line and column in what(); anchor it to the file
        throw DomainError(path + ": " + e.what());
    }
}

void save_json(const std::string& path, const nlohmann::json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

void write_geometry(const std::string& path, const Geometry& g) {
    nlohmann::json j;
    j["grid"]["omega0_rad_s"] = g.envelope.grid.omega0_rad_s;
    j["grid"]["offsets_rad_s"] = g.envelope.grid.offsets_rad_s;
    j["amplitude"] = g.envelope.amplitude;
    auto& bands = j["bands"];
    bands["bounds"] = nlohmann::json::array();
    for (const auto& [b, e] : g.bands.zone_bounds) bands["bounds"].push_back({b, e});
    bands["powers"] = g.bands.powers;
    save_json(path, j);
}

Geometry read_geometry(const std::string& path) {
    const nlohmann::json j = load_json(path);
    Geometry g;
    try {
        g.envelope.grid.omega0_rad_s = j.at("grid").at("omega0_rad_s").get<double>();
        g.envelope.grid.offsets_rad_s = j.at("grid").at("offsets_rad_s").get<std::vector<double>>();
        g.envelope.amplitude = j.at("amplitude").get<std::vector<double>>();
        for (const auto& b : j.at("bands").at("bounds"))
            g.bands.zone_bounds.emplace_back(b.at(0).get<std::size_t>(),
                                             b.at(1).get<std::size_t>());
        g.bands.powers = j.at("bands").at("powers").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
    g.envelope.validate();
    g.bands.validate();
    if (g.bands.zone_bounds.back().second != g.envelope.size())
        throw DomainError(path + ": bands do not cover the grid");
    return g;
}

void write_measurements_csv(const std::string& path, const std::vector<MeasuredVariance>& rows) {
    auto f = open_out(path);
    f << "quadrature,rf_hz,zones,power,variance\n";
    for (const auto& mv : rows)
        f << quadrature_name(mv.quadrature) << ',' << fmt_g(mv.rf_hz) << ','
          << zone_set_text(mv.zones) << ',' << fmt_g(mv.power) << ',' << fmt_g(mv.value) << '\n';
}

std::vector<MeasuredVariance> read_measurements_csv(const std::string& path) {
    const CsvContent csv = read_csv(path);
    if (csv.rows.empty() || strip(csv.rows.front()) != "quadrature,rf_hz,zones,power,variance")
        throw DomainError(path + ": expected header 'quadrature,rf_hz,zones,power,variance'");
    std::vector<MeasuredVariance> out;
    for (std::size_t r = 1; r < csv.rows.size(); ++r) {
        const std::string where = path + " row " + std::to_string(r);
        const auto fields = split(csv.rows[r], ',');
        if (fields.size() != 5) throw DomainError(where + ": expected 5 columns");
        MeasuredVariance mv;
        mv.quadrature = parse_quadrature(strip(fields[0]), where);
        mv.rf_hz = parse_number(fields[1], where);
        mv.zones = parse_zone_set(strip(fields[2]), where);
        mv.power = parse_number(fields[3], where);
        mv.value = parse_number(fields[4], where);
        out.push_back(std::move(mv));
    }
    return out;
}

void write_measurements_json(const std::string& path, const std::vector<MeasuredVariance>& rows) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& mv : rows) {
        nlohmann::json row;
        row["quadrature"] = quadrature_name(mv.quadrature);
        row["rf_hz"] = mv.rf_hz;
        row["zones"] = mv.zones;
        row["power"] = mv.power;
        row["variance"] = mv.value;
        j.push_back(std::move(row));
    }
    save_json(path, j);
}

std::vector<MeasuredVariance> read_measurements_json(const std::string& path) {
    const nlohmann::json j = load_json(path);
    std::vector<MeasuredVariance> out;
    try {
        for (const auto& row : j) {
            MeasuredVariance mv;
            mv.quadrature = parse_quadrature(row.at("quadrature").get<std::string>(), path);
            mv.rf_hz = row.at("rf_hz").get<double>();
            mv.zones = row.at("zones").get<std::vector<std::size_t>>();
            mv.power = row.at("power").get<double>();
            mv.value = row.at("variance").get<double>();
            out.push_back(std::move(mv));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
    return out;
}

std::vector<MeasuredVariance> read_measurements(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return read_measurements_json(path);
    return read_measurements_csv(path);
}

void write_matrix_csv(const std::string& path, const NoiseMatrix& m) {
    auto f = open_out(path);
    f << "# quadrature = " << quadrature_name(m.quadrature) << '\n';
    f << "# rf_hz = " << fmt_g(m.rf_hz) << '\n';
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            if (j) f << ',';
            f << fmt_g(m.at(i, j));
        }
        f << '\n';
    }
}

NoiseMatrix read_matrix_csv(const std::string& path) {
    const CsvContent csv = read_csv(path);
    const Quadrature quad = parse_quadrature(header_value(csv, "quadrature", path), path);
    const double rf = parse_number(header_value(csv, "rf_hz", path), path);
    const std::size_t n = csv.rows.size();
    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto fields = split(csv.rows[i], ',');
        if (fields.size() != n)
            throw DomainError(path + ": matrix row " + std::to_string(i) + " is not length " +
                              std::to_string(n));
        for (const auto& fld : fields) entries.push_back(parse_number(fld, path));
    }
    return NoiseMatrix::make(quad, rf, n, std::move(entries));
}

void write_eigen_csv(const std::string& path, const NoiseMatrix& m,
                     const EigenDecomposition& eig) {
    auto f = open_out(path);
    f << "# quadrature = " << quadrature_name(m.quadrature) << '\n';
    f << "# rf_hz = " << fmt_g(m.rf_hz) << '\n';
    f << "eigenvalue";
    for (std::size_t i = 0; i < eig.n; ++i) f << ",c" << i;
    f << '\n';
    for (std::size_t k = 0; k < eig.n; ++k) {
        f << fmt_g(eig.eigenvalues[k]);
        for (double c : eig.eigenvectors[k].components) f << ',' << fmt_g(c);
        f << '\n';
    }
}

void write_trace_csv(const std::string& path, const PsdTrace& trace) {
    auto f = open_out(path);
    f << "# label = " << trace_label_name(trace.label) << '\n';
    f << "# units = " << units_name(trace.units) << '\n';
    if (trace.rbw_hz) f << "# rbw_hz = " << fmt_g(*trace.rbw_hz) << '\n';
    f << "f_hz,value,quality_flag\n";
    for (const auto& pt : trace.points)
        f << fmt_g(pt.f_hz) << ',' << fmt_g(pt.value) << ',' << flag_name(pt.flag) << '\n';
}

void write_trace_json(const std::string& path, const PsdTrace& trace) {
    nlohmann::json j;
    j["label"] = trace_label_name(trace.label);
    j["units"] = units_name(trace.units);
    if (trace.rbw_hz) j["rbw_hz"] = *trace.rbw_hz;
    j["points"] = nlohmann::json::array();
    for (const auto& pt : trace.points) {
        nlohmann::json row;
        row["f_hz"] = pt.f_hz;
        row["value"] = pt.value;
        row["quality_flag"] = flag_name(pt.flag);
        j["points"].push_back(std::move(row));
    }
    save_json(path, j);
}

PsdTrace read_trace_json(const std::string& path) {
    const nlohmann::json j = load_json(path);
    PsdTrace trace;
    try {
        trace.label = parse_trace_label(j.at("label").get<std::string>(), path);
        trace.units = parse_units(j.at("units").get<std::string>(), path);
        if (j.contains("rbw_hz")) trace.rbw_hz = j.at("rbw_hz").get<double>();
        for (const auto& row : j.at("points")) {
            PsdPoint pt;
            pt.f_hz = row.at("f_hz").get<double>();
            pt.value = row.at("value").get<double>();
            pt.flag = parse_flag(row.at("quality_flag").get<std::string>(), path);
            trace.points.push_back(pt);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
    trace.validate();
    return trace;
}

PsdTrace read_trace(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return read_trace_json(path);
    return read_trace_csv(path);
}

PsdTrace read_trace_csv(const std::string& path) {
    const CsvContent csv = read_csv(path);
    PsdTrace trace;
    trace.label = parse_trace_label(header_value(csv, "label", path), path);
    trace.units = parse_units(header_value(csv, "units", path), path);
    for (const auto& [k, v] : csv.headers)
        if (k == "rbw_hz") trace.rbw_hz = parse_number(v, path);
    if (csv.rows.empty() || strip(csv.rows.front()) != "f_hz,value,quality_flag")
        throw DomainError(path + ": expected header 'f_hz,value,quality_flag'");
    for (std::size_t r = 1; r < csv.rows.size(); ++r) {
        const std::string where = path + " row " + std::to_string(r);
        const auto fields = split(csv.rows[r], ',');
        if (fields.size() != 3) throw DomainError(where + ": expected 3 columns");
        PsdPoint pt;
        pt.f_hz = parse_number(fields[0], where);
        pt.value = parse_number(fields[1], where);
        pt.flag = parse_flag(strip(fields[2]), where);
        trace.points.push_back(pt);
    }
    trace.validate();
    return trace;
}

} // namespace combnoise::io
