#pragma once

#include <complex>

namespace combnoise {

// Two-mirror Fabry-Perot resonator used as the phase reference.
// Amplitude reflectivities r1,r2 in [0,1), transmissions t1,t2 in (0,1],
// repetition rate f_rep_hz > 0. Derived quantities are cached on build.
struct CavityParams {
    double r1 = 0.0, r2 = 0.0;
    double t1 = 1.0, t2 = 1.0;
    double f_rep_hz = 0.0;

    double t_max = 1.0;      // peak power transmission [t1 t2/(1-r1 r2)]²
    double f_coeff = 0.0;    // coefficient of finesse 4 r1 r2/(1-r1 r2)²
    double finesse = 0.0;    // π / (2 asin(1/√f_coeff))
    double f_c_hz = 0.0;     // half-width f_rep/(2 finesse)

    static CavityParams from_mirrors(double r1, double r2, double t1, double t2,
                                     double f_rep_hz);
    // Lossless symmetric cavity of the given finesse (t_max = 1).
    static CavityParams from_finesse(double finesse, double f_rep_hz);
    // Symmetric cavity with the given finesse and peak transmission.
    static CavityParams from_finesse(double finesse, double f_rep_hz, double t_max);

    void validate() const;
};

// 3 dB point of the decoupling factor, ≈ 1.5538 f_c.
double f_3db_hz(const CavityParams& p);

// Result of an approximate transfer-function evaluation together with an
// out-of-validity warning (the value is still returned).
struct FlaggedComplex {
    std::complex<double> value;
    bool outside_validity = false;
};

// Exact amplitude transmission t1 t2 e^{iπf/f_rep} / (1 - r1 r2 e^{i2πf/f_rep})
// for sideband frequency f from a resonant carrier.
std::complex<double> transmission_exact(const CavityParams& p, double f_hz);

// Low-frequency expansion, flagged outside f < f_rep/10.
FlaggedComplex transmission_lowfreq(const CavityParams& p, double f_hz);

// High-finesse single-pole form √t_max (1 + i f/f_c)/(1 + (f/f_c)²),
// flagged when finesse ≤ 50.
FlaggedComplex transmission_highfinesse(const CavityParams& p, double f_hz);

// Lorentzian phase-noise transfer H(f) = 1/(1 + (f/f_c)²); H(0) = 1, H(f_c) = 1/2.
double phase_transfer(const CavityParams& p, double f_hz);

// Reference-arm decoupling [1 - H(f)]², monotone from 0 to 1; equals 1/2 at f_3db.
double decoupling_factor(const CavityParams& p, double f_hz);

// Homodyne quadratures after reflection-path interference with the filtered
// reference: x' = Re(t)x - Im(t)p, p' = Im(t)x + Re(t)p.
struct QuadraturePair {
    double x = 0.0;
    double p = 0.0;
};

QuadraturePair interconvert_quadratures(const QuadraturePair& in, std::complex<double> t);

} // namespace combnoise
