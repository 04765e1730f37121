#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace combnoise::cli {

struct SimulateOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> zones;
    std::vector<double> rf_override;
    std::string out_dir;
    std::string format = "csv";
    unsigned workers = 1;
};

struct AnalyzeOptions {
    std::string geometry_path;
    std::string measurements_path;
    std::string out_dir;
    std::string format = "csv";
};

struct CavityOptions {
    std::optional<double> finesse;
    std::optional<double> t_max;
    std::optional<double> r1, r2, t1, t2;
    double f_rep_hz = 0.0;
    double f_min_hz = 0.0;
    double f_max_hz = -1.0; // default 10 f_c
    std::size_t points = 201;
    std::string out_dir;
    std::string out_name = "cavity_sweep.csv";
};

struct CalibrateOptions {
    std::string trace_path;
    std::optional<double> finesse;
    std::optional<double> t_max;
    std::optional<double> r1, r2, t1, t2;
    double f_rep_hz = 0.0;
    std::optional<double> sql_db_value;
    std::optional<double> power_w;
    std::optional<double> wavelength_nm;
    std::optional<double> rbw_hz;
    std::string units = "dbc_hz";
    std::string out_dir;
    std::string format = "csv";
};

void cmd_simulate(const SimulateOptions& opt);
void cmd_analyze(const AnalyzeOptions& opt);
void cmd_cavity(const CavityOptions& opt);
void cmd_calibrate(const CalibrateOptions& opt);

// out-dir resolution: explicit flag, else $COMBNOISE_OUT_DIR, else cwd
std::string resolve_out_dir(const std::string& flag_value);

} // namespace combnoise::cli
