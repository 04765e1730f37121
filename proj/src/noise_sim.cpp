#include "combnoise/noise_sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "combnoise/errors.hpp"
#include "combnoise/rng.hpp"

namespace combnoise {

namespace {

std::uint64_t quadrature_tag(Quadrature q) { return q == Quadrature::Amplitude ? 0 : 1; }

double checked_psd(const Psd& psd, double f_hz) {
    const double v = psd(f_hz);
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError("noise mode: psd must be finite and non-negative");
    return v;
}

// Unbiased variance, single pass (Welford).
class VarianceAccumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    double value() const { return m2_ / static_cast<double>(n_ - 1); }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct ActiveMode {
    double coeff = 0.0; // √psd · scale · (w · weights), per-draw multiplier
};

std::vector<std::size_t> checked_zones(const SimConfig& config,
                                       const std::vector<std::size_t>& zones) {
    if (zones.empty()) throw DomainError("measurement: empty band set");
    std::vector<std::size_t> sorted = zones;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= config.n_zones())
            throw DomainError("measurement: band index out of range");
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw DomainError("measurement: duplicate band index");
    }
    return sorted;
}

} // namespace

Psd flat_psd(double level) {
    return [level](double) { return level; };
}

Psd power_law_psd(double level, double ref_hz, double exponent) {
    return [=](double f) { return level * std::pow(f / ref_hz, exponent); };
}

Psd lorentzian_psd(double level, double knee_hz) {
    return [=](double f) {
        const double x = f / knee_hz;
        return level / (1.0 + x * x);
    };
}

void NoiseModeSpec::validate(std::size_t n_zones) const {
    mode.validate();
    if (mode.size() != n_zones)
        throw DomainError("noise mode: direction dimension must match band count");
    if (!psd) throw DomainError("noise mode: missing psd");
}

void SimConfig::validate() const {
    if (zone_powers.size() < 2) throw DomainError("config: need at least 2 bands");
    double total = 0.0;
    for (double p : zone_powers) {
        if (!std::isfinite(p) || p < 0.0)
            throw DomainError("config: band powers must be finite and non-negative");
        total += p;
    }
    if (!(total > 0.0)) throw DomainError("config: total band power must be positive");
    for (const auto& m : modes) m.validate(zone_powers.size());
    if (rf_frequencies_hz.empty()) throw DomainError("config: need at least one RF frequency");
    for (double f : rf_frequencies_hz)
        if (!std::isfinite(f) || f <= 0.0)
            throw DomainError("config: RF frequencies must be positive");
    if (n_samples < 2) throw DomainError("config: need at least 2 samples");
    if (cavity) cavity->validate();
    if (amp_phase_coupling)
        throw DomainError("config: amplitude-phase coupling is not supported");
}

double classical_phase_scale(const SimConfig& config, Quadrature quad, double f_hz) {
    if (!config.cavity || quad != Quadrature::Phase) return 1.0;
    return 1.0 - phase_transfer(*config.cavity, f_hz);
}

SampleMatrix sample_quadratures(const SimConfig& config, Quadrature quad, double f_hz,
                                std::uint64_t stream_tag) {
    config.validate();
    if (!std::isfinite(f_hz) || f_hz <= 0.0)
        throw DomainError("sampling: RF frequency must be positive");

    const std::size_t nz = config.n_zones();
    const double scale = classical_phase_scale(config, quad, f_hz);

    struct Active {
        const ModeVector* mode;
        double amp;
    };
    std::vector<Active> active;
    for (const auto& m : config.modes) {
        if (m.quadrature != quad) continue;
        active.push_back({&m.mode, std::sqrt(checked_psd(m.psd, f_hz)) * scale});
    }

    SampleMatrix out;
    out.n_samples = config.n_samples;
    out.n_zones = nz;
    out.data.assign(config.n_samples * nz, 0.0);

    rng::NormalStream g(rng::derive_stream(config.seed, quadrature_tag(quad),
                                           rng::frequency_bits(f_hz), stream_tag));
    for (std::size_t s = 0; s < config.n_samples; ++s) {
        double* row = out.data.data() + s * nz;
        for (const auto& a : active) {
            const double x = a.amp * g.next();
            for (std::size_t z = 0; z < nz; ++z) row[z] += x * a.mode->components[z];
        }
        for (std::size_t z = 0; z < nz; ++z) row[z] += g.next();
    }
    return out;
}

MeasuredVariance measure_variance(const SimConfig& config, const std::vector<std::size_t>& zones,
                                  Quadrature quad, double f_hz, std::uint64_t stream_tag) {
    config.validate();
    if (!std::isfinite(f_hz) || f_hz <= 0.0)
        throw DomainError("sampling: RF frequency must be positive");
    const std::vector<std::size_t> sorted = checked_zones(config, zones);

    double p_total = 0.0;
    for (std::size_t z : sorted) p_total += config.zone_powers[z];
    if (!(p_total > 0.0)) throw DomainError("measurement: band union carries no power");

    std::vector<double> weight(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k)
        weight[k] = std::sqrt(config.zone_powers[sorted[k]] / p_total);

    // classical modes collapse to scalar projections onto the weighted union
    const double scale = classical_phase_scale(config, quad, f_hz);
    std::vector<double> mode_coeff;
    for (const auto& m : config.modes) {
        if (m.quadrature != quad) continue;
        double proj = 0.0;
        for (std::size_t k = 0; k < sorted.size(); ++k)
            proj += m.mode.components[sorted[k]] * weight[k];
        mode_coeff.push_back(std::sqrt(checked_psd(m.psd, f_hz)) * scale * proj);
    }

    rng::NormalStream g(rng::derive_stream(config.seed, quadrature_tag(quad),
                                           rng::frequency_bits(f_hz), stream_tag));
    VarianceAccumulator acc;
    for (std::size_t s = 0; s < config.n_samples; ++s) {
        double x = 0.0;
        for (double c : mode_coeff) x += c * g.next();
        for (double w : weight) x += w * g.next();
        acc.add(x);
    }

    MeasuredVariance mv;
    mv.zones = sorted;
    mv.quadrature = quad;
    mv.rf_hz = f_hz;
    mv.power = p_total;
    mv.value = acc.value();
    return mv;
}

MeasuredVariance measure_variance_from_samples(const SampleMatrix& samples,
                                               const std::vector<double>& zone_powers,
                                               const std::vector<std::size_t>& zones,
                                               Quadrature quad, double f_hz) {
    if (samples.n_zones != zone_powers.size())
        throw DomainError("measurement: sample matrix and band powers disagree");
    if (samples.n_samples < 2) throw DomainError("measurement: need at least 2 samples");
    if (zones.empty()) throw DomainError("measurement: empty band set");
    std::vector<std::size_t> sorted = zones;
    std::sort(sorted.begin(), sorted.end());
    double p_total = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] >= samples.n_zones) throw DomainError("measurement: band index out of range");
        if (k > 0 && sorted[k] == sorted[k - 1])
            throw DomainError("measurement: duplicate band index");
        p_total += zone_powers[sorted[k]];
    }
    if (!(p_total > 0.0)) throw DomainError("measurement: band union carries no power");

    std::vector<double> weight(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k)
        weight[k] = std::sqrt(zone_powers[sorted[k]] / p_total);

    VarianceAccumulator acc;
    for (std::size_t s = 0; s < samples.n_samples; ++s) {
        double x = 0.0;
        for (std::size_t k = 0; k < sorted.size(); ++k)
            x += weight[k] * samples.at(s, sorted[k]);
        acc.add(x);
    }

    MeasuredVariance mv;
    mv.zones = std::move(sorted);
    mv.quadrature = quad;
    mv.rf_hz = f_hz;
    mv.power = p_total;
    mv.value = acc.value();
    return mv;
}

namespace {

std::vector<std::vector<std::size_t>> protocol_zone_sets(std::size_t nz) {
    std::vector<std::vector<std::size_t>> sets;
    sets.reserve(nz * (nz + 1) / 2);
    for (std::size_t i = 0; i < nz; ++i) sets.push_back({i});
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t j = i + 1; j < nz; ++j) sets.push_back({i, j});
    return sets;
}

} // namespace

std::vector<MeasuredVariance> run_protocol(const SimConfig& config, Quadrature quad, double f_hz,
                                           unsigned workers) {
    config.validate();
    const auto sets = protocol_zone_sets(config.n_zones());
    std::vector<MeasuredVariance> out(sets.size());

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(sets.size()));
    if (workers <= 1) {
        for (std::size_t m = 0; m < sets.size(); ++m)
            out[m] = measure_variance(config, sets[m], quad, f_hz, m);
        return out;
    }

    // each measurement owns its substream, so any split gives identical output
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t m = w; m < sets.size(); m += workers)
                out[m] = measure_variance(config, sets[m], quad, f_hz, m);
        }));
    }
    for (auto& f : futs) f.get();
    return out;
}

std::vector<MeasuredVariance> run_protocol_shared(const SimConfig& config, Quadrature quad,
                                                  double f_hz) {
    const SampleMatrix samples = sample_quadratures(config, quad, f_hz, 0);
    const auto sets = protocol_zone_sets(config.n_zones());
    std::vector<MeasuredVariance> out;
    out.reserve(sets.size());
    for (const auto& zs : sets)
        out.push_back(measure_variance_from_samples(samples, config.zone_powers, zs, quad, f_hz));
    return out;
}

} // namespace combnoise
