#include "combnoise/calibration.hpp"

#include <cmath>
#include <limits>

#include "combnoise/constants.hpp"
#include "combnoise/errors.hpp"

namespace combnoise {

void PsdTrace::validate() const {
    double prev = 0.0;
    bool first = true;
    for (const auto& pt : points) {
        if (!std::isfinite(pt.f_hz) || pt.f_hz <= 0.0)
            throw DomainError("trace: frequencies must be positive and finite");
        if (!first && !(pt.f_hz > prev))
            throw DomainError("trace: frequencies must be strictly increasing");
        prev = pt.f_hz;
        first = false;
        if (std::isnan(pt.value)) throw DomainError("trace: NaN value");
        if (units == PsdUnits::RelShotLinear && pt.value < 0.0)
            throw DomainError("trace: linear rel-shot values must be non-negative");
    }
    if (rbw_hz && !(*rbw_hz > 0.0))
        throw DomainError("trace: resolution bandwidth must be positive");
}

double sql_psd(double power_w, double nu0_hz) {
    if (!(power_w > 0.0) || !std::isfinite(power_w))
        throw DomainError("calibration: optical power must be positive");
    if (!(nu0_hz > 0.0) || !std::isfinite(nu0_hz))
        throw DomainError("calibration: carrier frequency must be positive");
    return 2.0 * constants::planck_j_s * nu0_hz / power_w;
}

double sql_db(double power_w, double nu0_hz) { return db_from_linear(sql_psd(power_w, nu0_hz)); }

double db_from_linear(double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("calibration: dB of a negative value");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(x);
}

double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

double variance_to_rel_psd(double variance_rel_shot, double rbw_hz) {
    if (!(rbw_hz > 0.0) || !std::isfinite(rbw_hz))
        throw DomainError("calibration: resolution bandwidth must be positive");
    if (std::isnan(variance_rel_shot) || variance_rel_shot < 0.0)
        throw DomainError("calibration: shot-normalized variance must be non-negative");
    // shot reference scales with the same bandwidth, so the ratio is the PSD
    return variance_rel_shot;
}

PsdTrace trace_to_db(const PsdTrace& trace) {
    trace.validate();
    if (trace.units != PsdUnits::RelShotLinear)
        throw DomainError("calibration: trace is not in linear rel-shot units");
    PsdTrace out = trace;
    out.units = PsdUnits::RelShotDb;
    for (auto& pt : out.points) pt.value = db_from_linear(pt.value);
    return out;
}

namespace {

PsdTrace apply_cavity(const PsdTrace& trace_db, const CavityParams& cavity, double offset_db,
                      PsdUnits out_units) {
    trace_db.validate();
    cavity.validate();
    if (trace_db.units != PsdUnits::RelShotDb)
        throw DomainError("calibration: cavity correction expects rel-shot dB input");
    const double f3 = f_3db_hz(cavity);
    PsdTrace out = trace_db;
    out.units = out_units;
    for (auto& pt : out.points) {
        const double dec = decoupling_factor(cavity, pt.f_hz);
        if (dec == 0.0)
            throw DomainError("calibration: singular cavity correction at zero decoupling");
        pt.value = pt.value - db_from_linear(dec) + offset_db;
        pt.flag = pt.f_hz < f3 ? QualityFlag::HighCorrection : QualityFlag::Ok;
    }
    return out;
}

} // namespace

PsdTrace correct_rel_shot(const PsdTrace& trace_db, const CavityParams& cavity) {
    return apply_cavity(trace_db, cavity, 0.0, PsdUnits::RelShotDb);
}

PsdTrace correct_and_calibrate(const PsdTrace& trace_db, const CavityParams& cavity,
                               double sql_db_value) {
    if (!std::isfinite(sql_db_value))
        throw DomainError("calibration: shot floor must be finite in dB");
    return apply_cavity(trace_db, cavity, sql_db_value, PsdUnits::DbcPerHz);
}

} // namespace combnoise
