#pragma once

#include <string>
#include <vector>

#include "combnoise/calibration.hpp"
#include "combnoise/comb_model.hpp"
#include "combnoise/covariance.hpp"
#include "combnoise/noise_sim.hpp"

#include <json.hpp>

namespace combnoise::io {

// All numeric file output goes through fmt_g: shortest %.12g form, with
// INF / -INF sentinels so round-trips are lossless at 12 significant digits.
std::string fmt_g(double x);
double parse_number(const std::string& text, const std::string& where);

std::string quadrature_name(Quadrature q);
Quadrature parse_quadrature(const std::string& s, const std::string& where);
std::string units_name(PsdUnits u);
PsdUnits parse_units(const std::string& s, const std::string& where);
std::string trace_label_name(TraceLabel l);
TraceLabel parse_trace_label(const std::string& s, const std::string& where);
std::string flag_name(QualityFlag f);
QualityFlag parse_flag(const std::string& s, const std::string& where);

// Parses a JSON file; syntax errors are reported as file:line:column.
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

// Comb geometry produced by simulate and consumed by analyze.
struct Geometry {
    SpectralEnvelope envelope;
    SpectralPartition bands;
};

void write_geometry(const std::string& path, const Geometry& g);
Geometry read_geometry(const std::string& path);

// Measurement tables. CSV columns: quadrature,rf_hz,zones,power,variance
// with zones as '+'-joined 0-based indices ("3", "0+5").
void write_measurements_csv(const std::string& path, const std::vector<MeasuredVariance>& rows);
std::vector<MeasuredVariance> read_measurements_csv(const std::string& path);
void write_measurements_json(const std::string& path, const std::vector<MeasuredVariance>& rows);
std::vector<MeasuredVariance> read_measurements_json(const std::string& path);
// Dispatches on extension (.csv/.json).
std::vector<MeasuredVariance> read_measurements(const std::string& path);

// Matrix CSV: "# quadrature = ..." and "# rf_hz = ..." comment lines, then
// n rows of n comma-separated entries.
void write_matrix_csv(const std::string& path, const NoiseMatrix& m);
NoiseMatrix read_matrix_csv(const std::string& path);

// Eigen table: same comment lines, then header "eigenvalue,c0,...",
// one row per mode in descending-eigenvalue order.
void write_eigen_csv(const std::string& path, const NoiseMatrix& m,
                     const EigenDecomposition& eig);

// Trace CSV: "# label", "# units", optional "# rbw_hz" comment lines, then
// header "f_hz,value,quality_flag".
void write_trace_csv(const std::string& path, const PsdTrace& trace);
PsdTrace read_trace_csv(const std::string& path);
void write_trace_json(const std::string& path, const PsdTrace& trace);
PsdTrace read_trace_json(const std::string& path);
// Dispatches on extension (.csv/.json).
PsdTrace read_trace(const std::string& path);

} // namespace combnoise::io
