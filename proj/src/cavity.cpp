#include "combnoise/cavity.hpp"

#include <cmath>
#include <numbers>

#include "combnoise/errors.hpp"

namespace combnoise {

namespace {

void fill_derived(CavityParams& p) {
    const double rr = p.r1 * p.r2;
    const double tt = p.t1 * p.t2;
    p.t_max = (tt / (1.0 - rr)) * (tt / (1.0 - rr));
    p.f_coeff = 4.0 * rr / ((1.0 - rr) * (1.0 - rr));
    if (p.f_coeff < 1.0)
        throw DomainError("cavity: reflectivities too low for a resonance (coefficient of finesse < 1)");
    p.finesse = std::numbers::pi / (2.0 * std::asin(1.0 / std::sqrt(p.f_coeff)));
    p.f_c_hz = p.f_rep_hz / (2.0 * p.finesse);
}

} // namespace

CavityParams CavityParams::from_mirrors(double r1, double r2, double t1, double t2,
                                        double f_rep_hz) {
    CavityParams p;
    p.r1 = r1;
    p.r2 = r2;
    p.t1 = t1;
    p.t2 = t2;
    p.f_rep_hz = f_rep_hz;
    if (!(r1 >= 0.0 && r1 < 1.0) || !(r2 >= 0.0 && r2 < 1.0))
        throw DomainError("cavity: reflectivities must lie in [0, 1)");
    if (!(t1 > 0.0 && t1 <= 1.0) || !(t2 > 0.0 && t2 <= 1.0))
        throw DomainError("cavity: transmissions must lie in (0, 1]");
    if (!(f_rep_hz > 0.0) || !std::isfinite(f_rep_hz))
        throw DomainError("cavity: repetition rate must be positive");
    fill_derived(p);
    return p;
}

CavityParams CavityParams::from_finesse(double finesse, double f_rep_hz) {
    return from_finesse(finesse, f_rep_hz, 1.0);
}

CavityParams CavityParams::from_finesse(double finesse, double f_rep_hz, double t_max) {
    if (!(finesse >= 1.0) || !std::isfinite(finesse))
        throw DomainError("cavity: finesse must be at least 1");
    if (!(t_max > 0.0 && t_max <= 1.0))
        throw DomainError("cavity: peak transmission must lie in (0, 1]");
    // invert F = 1/sin²(π/2𝓕), then r from 4r²/(1-r²)² = F
    const double s = std::sin(std::numbers::pi / (2.0 * finesse));
    const double coeff = 1.0 / (s * s);
    const double r = (std::sqrt(coeff + 1.0) - 1.0) / std::sqrt(coeff);
    const double t = std::sqrt(std::sqrt(t_max) * (1.0 - r * r));
    return from_mirrors(r, r, t, t, f_rep_hz);
}

void CavityParams::validate() const {
    if (!(r1 >= 0.0 && r1 < 1.0) || !(r2 >= 0.0 && r2 < 1.0))
        throw DomainError("cavity: reflectivities must lie in [0, 1)");
    if (!(t1 > 0.0 && t1 <= 1.0) || !(t2 > 0.0 && t2 <= 1.0))
        throw DomainError("cavity: transmissions must lie in (0, 1]");
    if (!(f_rep_hz > 0.0) || !std::isfinite(f_rep_hz))
        throw DomainError("cavity: repetition rate must be positive");
    if (!(f_c_hz > 0.0)) throw DomainError("cavity: derived half-width must be positive");
}

double f_3db_hz(const CavityParams& p) {
    // [1-H]² = 1/2 at (f/f_c)² = 1/(√2-1)
    return p.f_c_hz * std::sqrt(1.0 / (std::numbers::sqrt2 - 1.0));
}

std::complex<double> transmission_exact(const CavityParams& p, double f_hz) {
    const double phi = std::numbers::pi * f_hz / p.f_rep_hz;
    const std::complex<double> num =
        p.t1 * p.t2 * std::complex<double>(std::cos(phi), std::sin(phi));
    const std::complex<double> den =
        1.0 - p.r1 * p.r2 * std::complex<double>(std::cos(2.0 * phi), std::sin(2.0 * phi));
    return num / den;
}

FlaggedComplex transmission_lowfreq(const CavityParams& p, double f_hz) {
    FlaggedComplex out;
    out.outside_validity = !(std::abs(f_hz) < p.f_rep_hz / 10.0);
    const double rr = p.r1 * p.r2;
    const double x = f_hz / p.f_rep_hz;
    const std::complex<double> num(1.0, std::numbers::pi * (1.0 + rr) / (1.0 - rr) * x);
    const double den = 1.0 + std::numbers::pi * std::numbers::pi * p.f_coeff * x * x;
    out.value = std::sqrt(p.t_max) * num / den;
    return out;
}

FlaggedComplex transmission_highfinesse(const CavityParams& p, double f_hz) {
    FlaggedComplex out;
    out.outside_validity = !(p.finesse > 50.0);
    const double x = f_hz / p.f_c_hz;
    out.value = std::sqrt(p.t_max) * std::complex<double>(1.0, x) / (1.0 + x * x);
    return out;
}

double phase_transfer(const CavityParams& p, double f_hz) {
    const double x = f_hz / p.f_c_hz;
    return 1.0 / (1.0 + x * x);
}

double decoupling_factor(const CavityParams& p, double f_hz) {
    // 1 - H = x²/(1+x²), computed directly to keep the small-f tail accurate
    const double x2 = (f_hz / p.f_c_hz) * (f_hz / p.f_c_hz);
    const double one_minus_h = x2 / (1.0 + x2);
    return one_minus_h * one_minus_h;
}

QuadraturePair interconvert_quadratures(const QuadraturePair& in, std::complex<double> t) {
    QuadraturePair out;
    out.x = t.real() * in.x - t.imag() * in.p;
    out.p = t.imag() * in.x + t.real() * in.p;
    return out;
}

} // namespace combnoise
