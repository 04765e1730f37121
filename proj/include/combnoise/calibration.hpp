#pragma once

#include <optional>
#include <string>
#include <vector>

#include "combnoise/cavity.hpp"

namespace combnoise {

enum class PsdUnits { RelShotLinear, RelShotDb, DbcPerHz };
enum class TraceLabel { Ceo, Rep, Custom };

// HighCorrection marks points below the decoupling 3 dB frequency, where
// the 1/F(f) correction exceeds a factor of 2 and small cavity-model errors
// are strongly amplified.
enum class QualityFlag { Ok, HighCorrection };

struct PsdPoint {
    double f_hz = 0.0;
    double value = 0.0;
    QualityFlag flag = QualityFlag::Ok;
};

// Spectral trace of one collective noise projection versus RF frequency.
// Frequencies strictly increasing and positive; linear rel-shot values ≥ 0.
struct PsdTrace {
    TraceLabel label = TraceLabel::Custom;
    PsdUnits units = PsdUnits::RelShotLinear;
    std::vector<PsdPoint> points;
    std::optional<double> rbw_hz;

    void validate() const;
};

// Shot-noise floor of a single-sideband relative-intensity measurement:
// S_SQL = 2 h ν₀ / P, in 1/Hz. power_w > 0, nu0_hz > 0.
double sql_psd(double power_w, double nu0_hz);

// 10 log10 of the above, i.e. the floor in dBc/Hz.
double sql_db(double power_w, double nu0_hz);

double db_from_linear(double x); // x ≥ 0; x = 0 maps to -inf
double linear_from_db(double db);

// A shot-normalized variance at resolution bandwidth rbw IS the rel-shot
// PSD (the bandwidth cancels against the shot reference). rbw must be > 0
// and the variance ≥ 0; the value passes through unchanged.
double variance_to_rel_psd(double variance_rel_shot, double rbw_hz);

PsdTrace trace_to_db(const PsdTrace& trace);

// Undoes the reference-cavity decoupling: value - 10 log10 F(f), in
// rel-shot dB. Every point must have f > 0 (F(0) = 0 is singular).
PsdTrace correct_rel_shot(const PsdTrace& trace_db, const CavityParams& cavity);

// Cavity correction plus absolute calibration against the shot floor:
// S[dBc/Hz] = S_meas[rel-shot dB] - 10 log10 F(f) + S_SQL[dB].
PsdTrace correct_and_calibrate(const PsdTrace& trace_db, const CavityParams& cavity,
                               double sql_db_value);

} // namespace combnoise
