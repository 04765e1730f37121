#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "combnoise/cavity.hpp"
#include "combnoise/comb_model.hpp"

namespace combnoise {

enum class Quadrature { Amplitude, Phase };

// One-sided PSD in shot units as a function of RF frequency; must be ≥ 0
// wherever it is evaluated.
using Psd = std::function<double(double)>;

Psd flat_psd(double level);
// level at ref_hz, scaling as (f/ref)^exponent.
Psd power_law_psd(double level, double ref_hz, double exponent);
// level/(1 + (f/knee)²).
Psd lorentzian_psd(double level, double knee_hz);

// A classical noise process: band-space direction, which quadrature it
// lives in, and its strength vs RF frequency.
struct NoiseModeSpec {
    Quadrature quadrature = Quadrature::Phase;
    ModeVector mode;
    Psd psd;

    void validate(std::size_t n_zones) const;
};

struct SimConfig {
    std::vector<double> zone_powers;         // optical power per band, Σ > 0
    std::vector<NoiseModeSpec> modes;
    std::vector<double> rf_frequencies_hz;   // all > 0
    std::size_t n_samples = 0;               // ≥ 2
    std::uint64_t seed = 0;
    std::optional<CavityParams> cavity;      // phase reference filter, if any
    // Hook for amplitude-phase cross-coupling; setting it is rejected
    // until the sampler supports it.
    std::optional<double> amp_phase_coupling;

    std::size_t n_zones() const { return zone_powers.size(); }
    void validate() const;
};

// Attenuation of classical phase noise relative to the cavity-filtered
// reference: 1 - H(f) when a cavity is configured and quad is Phase, else 1.
// Monotone non-decreasing in f.
double classical_phase_scale(const SimConfig& config, Quadrature quad, double f_hz);

// n_samples × n_zones, row-major.
struct SampleMatrix {
    std::size_t n_samples = 0;
    std::size_t n_zones = 0;
    std::vector<double> data;

    double at(std::size_t s, std::size_t z) const { return data[s * n_zones + z]; }
    double& at(std::size_t s, std::size_t z) { return data[s * n_zones + z]; }
};

// Draws per-band quadrature fluctuations at one RF frequency: per sample,
// one normal per matching classical mode (config order), then one
// unit-variance shot normal per band (ascending). Identical config and
// stream_tag reproduce the matrix bit for bit.
SampleMatrix sample_quadratures(const SimConfig& config, Quadrature quad, double f_hz,
                                std::uint64_t stream_tag = 0);

// One homodyne variance measurement of a band union.
struct MeasuredVariance {
    std::vector<std::size_t> zones; // ascending, unique
    Quadrature quadrature = Quadrature::Amplitude;
    double rf_hz = 0.0;
    double power = 0.0;   // optical power of the union
    double value = 0.0;   // shot-normalized variance
};

// Simulates measuring the union of `zones`: each sample projects onto
// √(P_z/P_t) per band, combined shot contributes unit variance. Draw order
// per sample: matching modes (config order), then shot for the measured
// zones ascending. Value is the unbiased sample variance.
MeasuredVariance measure_variance(const SimConfig& config, const std::vector<std::size_t>& zones,
                                  Quadrature quad, double f_hz, std::uint64_t stream_tag);

// Same projection applied to an existing sample matrix (shared samples).
MeasuredVariance measure_variance_from_samples(const SampleMatrix& samples,
                                               const std::vector<double>& zone_powers,
                                               const std::vector<std::size_t>& zones,
                                               Quadrature quad, double f_hz);

// The full band-resolved protocol at one quadrature and RF frequency:
// n singles then all n(n+1)/2 - n pairs (i,j), i < j, lexicographic; one
// independent substream per measurement (tag = position in that order).
// workers > 1 runs measurements concurrently with identical results.
std::vector<MeasuredVariance> run_protocol(const SimConfig& config, Quadrature quad, double f_hz,
                                           unsigned workers = 1);

// Protocol variant where all measurements project one shared sample matrix;
// singles and pairs are then algebraically consistent realization by
// realization, not just in expectation.
std::vector<MeasuredVariance> run_protocol_shared(const SimConfig& config, Quadrature quad,
                                                  double f_hz);

} // namespace combnoise
