#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "combnoise/errors.hpp"
#include "combnoise/version.hpp"
#include "commands.hpp"

namespace {

// exit codes: 0 ok, 2 bad configuration or input, 3 incomplete measurement
// protocol, 4 numerical failure
constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_protocol = 3;
constexpr int exit_numerical = 4;

} // namespace

int main(int argc, char** argv) {
    using namespace combnoise;

    CLI::App app{"frequency comb noise correlation toolkit"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    cli::SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "run the banded homodyne measurement protocol on a synthetic comb");
    simulate->add_option("--config", sim.config_path, "simulation config (JSON)")
        ->required();
    simulate->add_option("--seed", sim.seed, "override the master seed");
    simulate->add_option("--samples", sim.samples, "override the sample count");
    simulate->add_option("--zones", sim.zones, "override the band count");
    simulate->add_option("--rf-hz", sim.rf_override, "override the RF frequency list")
        ->delimiter(',');
    simulate->add_option("--out-dir", sim.out_dir, "output directory");
    simulate->add_option("--format", sim.format, "measurements format: csv|json");
    simulate->add_option("--workers", sim.workers,
                         "parallel measurement workers (0 = hardware)");

    cli::AnalyzeOptions ana;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "assemble covariance matrices and extract collective noise");
    analyze->add_option("--geometry", ana.geometry_path, "geometry file from simulate")
        ->required();
    analyze->add_option("--measurements", ana.measurements_path, "measurement table")
        ->required();
    analyze->add_option("--out-dir", ana.out_dir, "output directory");
    analyze->add_option("--format", ana.format, "trace format: csv|json");

    cli::CavityOptions cav;
    CLI::App* cavity = app.add_subcommand(
        "cavity", "tabulate the reference cavity transfer functions");
    cavity->add_option("--finesse", cav.finesse, "cavity finesse");
    cavity->add_option("--t-max", cav.t_max, "peak power transmission (with --finesse)");
    cavity->add_option("--r1", cav.r1, "mirror 1 amplitude reflectivity");
    cavity->add_option("--r2", cav.r2, "mirror 2 amplitude reflectivity");
    cavity->add_option("--t1", cav.t1, "mirror 1 amplitude transmission");
    cavity->add_option("--t2", cav.t2, "mirror 2 amplitude transmission");
    cavity->add_option("--f-rep-hz", cav.f_rep_hz, "repetition rate")->required();
    cavity->add_option("--f-min-hz", cav.f_min_hz, "sweep start (default 0)");
    cavity->add_option("--f-max-hz", cav.f_max_hz, "sweep end (default 10 f_c)");
    cavity->add_option("--points", cav.points, "sweep points (default 201)");
    cavity->add_option("--out-dir", cav.out_dir, "output directory");
    cavity->add_option("--out", cav.out_name, "sweep file name");

    cli::CalibrateOptions cal;
    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "undo the cavity decoupling and reference to the shot floor");
    calibrate->add_option("--trace", cal.trace_path, "trace file from analyze")->required();
    calibrate->add_option("--finesse", cal.finesse, "cavity finesse");
    calibrate->add_option("--t-max", cal.t_max, "peak power transmission (with --finesse)");
    calibrate->add_option("--r1", cal.r1, "mirror 1 amplitude reflectivity");
    calibrate->add_option("--r2", cal.r2, "mirror 2 amplitude reflectivity");
    calibrate->add_option("--t1", cal.t1, "mirror 1 amplitude transmission");
    calibrate->add_option("--t2", cal.t2, "mirror 2 amplitude transmission");
    calibrate->add_option("--f-rep-hz", cal.f_rep_hz, "repetition rate")->required();
    calibrate->add_option("--sql-db", cal.sql_db_value, "shot floor in dBc/Hz");
    calibrate->add_option("--power-w", cal.power_w, "optical power for the shot floor");
    calibrate->add_option("--wavelength-nm", cal.wavelength_nm,
                          "carrier wavelength for the shot floor");
    calibrate->add_option("--rbw-hz", cal.rbw_hz, "resolution bandwidth of linear traces");
    calibrate->add_option("--units", cal.units, "output units: rel_shot_db|dbc_hz");
    calibrate->add_option("--out-dir", cal.out_dir, "output directory");
    calibrate->add_option("--format", cal.format, "trace format: csv|json");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) cli::cmd_simulate(sim);
        if (analyze->parsed()) cli::cmd_analyze(ana);
        if (cavity->parsed()) cli::cmd_cavity(cav);
        if (calibrate->parsed()) cli::cmd_calibrate(cal);
        return exit_ok;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_input;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_input;
    } catch (const ProtocolError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_protocol;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
