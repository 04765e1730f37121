#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace combnoise {

// Comb line frequencies ω_n = omega0 + offsets[n], offsets strictly
// increasing and symmetric about the carrier (they sum to zero).
//
// Grids built by wavelength_uniform_grid use the small-bandwidth map
// Ω = -(2πc/λ₀²)(λ - λ₀), so equal wavelength steps are equal Ω steps
// and the symmetry holds exactly.
struct FrequencyGrid {
    double omega0_rad_s = 0.0;
    std::vector<double> offsets_rad_s;

    std::size_t size() const { return offsets_rad_s.size(); }
    double omega_at(std::size_t i) const { return omega0_rad_s + offsets_rad_s[i]; }
    double wavelength_at(std::size_t i) const;
    double center_wavelength_m() const;

    void validate() const;
};

FrequencyGrid wavelength_uniform_grid(double center_m, double span_m, std::size_t n_points);

// Field amplitude per comb line, non-negative.
struct SpectralEnvelope {
    FrequencyGrid grid;
    std::vector<double> amplitude;

    std::size_t size() const { return amplitude.size(); }
    double total_power() const;

    void validate() const;
};

// Gaussian field amplitude exp(-2 ln2 (Ω/Ω_fwhm)²), i.e. intensity FWHM
// equal to fwhm_m in wavelength. fwhm_m = +inf gives the flat limit.
// Requires the grid span to cover at least 2 fwhm (finite case) and the
// grid carrier to match center_m.
SpectralEnvelope gaussian_envelope(double center_m, double fwhm_m, const FrequencyGrid& grid);

// Contiguous non-overlapping bands covering every line. zone_bounds[z] is a
// half-open index range [first, last); powers[z] = Σ amplitude² over it.
struct SpectralPartition {
    std::vector<std::pair<std::size_t, std::size_t>> zone_bounds;
    std::vector<double> powers;

    std::size_t n_zones() const { return zone_bounds.size(); }
    double total_power() const;

    void validate() const;
};

// Splits lines into n_zones equal-count bands (remainder lines go to the
// last band). With a wavelength-uniform grid the bands have equal
// wavelength width.
SpectralPartition partition(const SpectralEnvelope& envelope, std::size_t n_zones);

enum class ModeLabel { Ceo, Rep, Eigen, Custom };

// Unit-norm direction in band space.
struct ModeVector {
    std::vector<double> components;
    ModeLabel label = ModeLabel::Custom;
    int eigen_index = -1;

    std::size_t size() const { return components.size(); }
    void validate() const;
};

double dot(const ModeVector& a, const ModeVector& b);

// Per-line phase-quadrature patterns of the two timing-mode families:
// a pulse-arrival shift enters the field as -iδτ(ω₀E + ΩE), so the
// carrier term follows ω₀·A(Ω) and the repetition term Ω·A(Ω).
struct TimingModes {
    std::vector<double> ceo_raw;
    std::vector<double> rep_raw;
};

TimingModes timing_modes(const SpectralEnvelope& envelope);

// Projects a per-line pattern onto band space: coarse_z = Σ_z raw·A / √P_z,
// then unit-normalizes. Bands with zero power get component 0. A vanishing
// projection is a domain error.
ModeVector discretize_mode(const std::vector<double>& raw, const SpectralEnvelope& envelope,
                           const SpectralPartition& bands, ModeLabel label = ModeLabel::Custom);

} // namespace combnoise
