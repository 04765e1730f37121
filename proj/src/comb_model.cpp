#include "combnoise/comb_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "combnoise/constants.hpp"
#include "combnoise/errors.hpp"

namespace combnoise {

namespace {

constexpr double two_pi_c = 2.0 * std::numbers::pi * constants::speed_of_light_m_s;

// dΩ/dλ magnitude of the linearized map at the carrier.
double omega_per_meter(double omega0_rad_s) {
    const double lambda0 = two_pi_c / omega0_rad_s;
    return two_pi_c / (lambda0 * lambda0);
}

} // namespace

double FrequencyGrid::center_wavelength_m() const { return two_pi_c / omega0_rad_s; }

double FrequencyGrid::wavelength_at(std::size_t i) const {
    return center_wavelength_m() - offsets_rad_s[i] / omega_per_meter(omega0_rad_s);
}

void FrequencyGrid::validate() const {
    if (!(omega0_rad_s > 0.0) || !std::isfinite(omega0_rad_s))
        throw DomainError("frequency grid: carrier must be positive and finite");
    if (offsets_rad_s.size() < 2)
        throw DomainError("frequency grid: need at least 2 lines");
    double sum = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < offsets_rad_s.size(); ++i) {
        const double o = offsets_rad_s[i];
        if (!std::isfinite(o)) throw DomainError("frequency grid: non-finite offset");
        if (i > 0 && !(o > offsets_rad_s[i - 1]))
            throw DomainError("frequency grid: offsets must be strictly increasing");
        sum += o;
        scale = std::max(scale, std::abs(o));
    }
    if (std::abs(sum) > 1e-12 * std::max(scale, 1.0) * static_cast<double>(offsets_rad_s.size()))
        throw DomainError("frequency grid: offsets must be symmetric about the carrier");
    if (std::abs(offsets_rad_s.front()) >= omega0_rad_s)
        throw DomainError("frequency grid: span reaches non-positive absolute frequency");
}

FrequencyGrid wavelength_uniform_grid(double center_m, double span_m, std::size_t n_points) {
    if (!(center_m > 0.0) || !std::isfinite(center_m))
        throw DomainError("grid: center wavelength must be positive");
    if (!(span_m > 0.0) || !std::isfinite(span_m))
        throw DomainError("grid: span must be positive");
    if (n_points < 2) throw DomainError("grid: need at least 2 points");
    if (!(span_m < center_m))
        throw DomainError("grid: span must be smaller than the center wavelength");

    FrequencyGrid g;
    g.omega0_rad_s = two_pi_c / center_m;
    const double step = omega_per_meter(g.omega0_rad_s) * span_m / static_cast<double>(n_points - 1);
    const double half = static_cast<double>(n_points - 1) / 2.0;
    g.offsets_rad_s.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        g.offsets_rad_s[i] = step * (static_cast<double>(i) - half);
    g.validate();
    return g;
}

double SpectralEnvelope::total_power() const {
    double p = 0.0;
    for (double a : amplitude) p += a * a;
    return p;
}

void SpectralEnvelope::validate() const {
    grid.validate();
    if (amplitude.size() != grid.size())
        throw DomainError("envelope: amplitude count must match grid size");
    for (double a : amplitude)
        if (!std::isfinite(a) || a < 0.0)
            throw DomainError("envelope: amplitudes must be finite and non-negative");
}

SpectralEnvelope gaussian_envelope(double center_m, double fwhm_m, const FrequencyGrid& grid) {
    grid.validate();
    if (std::isnan(fwhm_m) || fwhm_m <= 0.0)
        throw DomainError("envelope: fwhm must be positive (or +inf for flat)");
    if (!(center_m > 0.0) || !std::isfinite(center_m))
        throw DomainError("envelope: center wavelength must be positive");
    const double omega_center = two_pi_c / center_m;
    if (std::abs(omega_center - grid.omega0_rad_s) > 1e-9 * grid.omega0_rad_s)
        throw DomainError("envelope: center wavelength does not match the grid carrier");

    SpectralEnvelope env;
    env.grid = grid;
    env.amplitude.resize(grid.size());
    if (std::isinf(fwhm_m)) {
        for (double& a : env.amplitude) a = 1.0;
        return env;
    }
    const double fwhm_omega = omega_per_meter(grid.omega0_rad_s) * fwhm_m;
    const double span_omega = grid.offsets_rad_s.back() - grid.offsets_rad_s.front();
    if (span_omega < 2.0 * fwhm_omega)
        throw DomainError("envelope: grid span must cover at least 2 fwhm");
    const double k = 2.0 * std::numbers::ln2 / (fwhm_omega * fwhm_omega);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double o = grid.offsets_rad_s[i];
        env.amplitude[i] = std::exp(-k * o * o);
    }
    return env;
}

double SpectralPartition::total_power() const {
    double p = 0.0;
    for (double x : powers) p += x;
    return p;
}

void SpectralPartition::validate() const {
    if (zone_bounds.size() < 2) throw DomainError("partition: need at least 2 bands");
    if (powers.size() != zone_bounds.size())
        throw DomainError("partition: powers and bounds must have equal length");
    std::size_t prev_end = 0;
    for (std::size_t z = 0; z < zone_bounds.size(); ++z) {
        const auto [b, e] = zone_bounds[z];
        if (b != prev_end || e <= b)
            throw DomainError("partition: bands must be contiguous and non-empty");
        prev_end = e;
        if (!std::isfinite(powers[z]) || powers[z] < 0.0)
            throw DomainError("partition: band powers must be finite and non-negative");
    }
}

SpectralPartition partition(const SpectralEnvelope& envelope, std::size_t n_zones) {
    envelope.validate();
    if (n_zones < 2) throw DomainError("partition: need at least 2 bands");
    const std::size_t n = envelope.size();
    if (n_zones > n) throw DomainError("partition: more bands than comb lines");

    SpectralPartition part;
    const std::size_t base = n / n_zones;
    part.zone_bounds.resize(n_zones);
    part.powers.assign(n_zones, 0.0);
    for (std::size_t z = 0; z < n_zones; ++z) {
        const std::size_t b = z * base;
        const std::size_t e = (z + 1 == n_zones) ? n : (z + 1) * base;
        part.zone_bounds[z] = {b, e};
        for (std::size_t i = b; i < e; ++i)
            part.powers[z] += envelope.amplitude[i] * envelope.amplitude[i];
    }
    part.validate();
    return part;
}

void ModeVector::validate() const {
    if (components.empty()) throw DomainError("mode: empty component vector");
    double norm2 = 0.0;
    for (double c : components) {
        if (!std::isfinite(c)) throw DomainError("mode: non-finite component");
        norm2 += c * c;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
        throw DomainError("mode: components must be unit norm");
}

double dot(const ModeVector& a, const ModeVector& b) {
    if (a.size() != b.size()) throw DomainError("mode dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.components[i] * b.components[i];
    return s;
}

TimingModes timing_modes(const SpectralEnvelope& envelope) {
    envelope.validate();
    TimingModes tm;
    const std::size_t n = envelope.size();
    tm.ceo_raw.resize(n);
    tm.rep_raw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tm.ceo_raw[i] = envelope.grid.omega0_rad_s * envelope.amplitude[i];
        tm.rep_raw[i] = envelope.grid.offsets_rad_s[i] * envelope.amplitude[i];
    }
    return tm;
}

ModeVector discretize_mode(const std::vector<double>& raw, const SpectralEnvelope& envelope,
                           const SpectralPartition& bands, ModeLabel label) {
    envelope.validate();
    bands.validate();
    if (raw.size() != envelope.size())
        throw DomainError("discretize: raw pattern length must match grid size");
    if (bands.zone_bounds.back().second != envelope.size())
        throw DomainError("discretize: partition does not cover this grid");

    ModeVector mode;
    mode.label = label;
    mode.components.assign(bands.n_zones(), 0.0);
    for (std::size_t z = 0; z < bands.n_zones(); ++z) {
        if (bands.powers[z] == 0.0) continue;
        const auto [b, e] = bands.zone_bounds[z];
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) acc += raw[i] * envelope.amplitude[i];
        mode.components[z] = acc / std::sqrt(bands.powers[z]);
    }
    double norm2 = 0.0;
    for (double c : mode.components) norm2 += c * c;
    if (norm2 == 0.0) throw DomainError("discretize: mode projects to zero on every band");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : mode.components) c *= inv;
    return mode;
}

} // namespace combnoise
