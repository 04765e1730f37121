#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "combnoise/comb_model.hpp"
#include "combnoise/errors.hpp"

using namespace combnoise;

namespace {
constexpr double center = 795e-9;
constexpr double fwhm = 6e-9;
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("wavelength uniform grid geometry") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 512);
    CHECK(g.size() == 512);
    CHECK(g.center_wavelength_m() == doctest::Approx(center).epsilon(1e-12));

    // exact antisymmetry of the offsets
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g.offsets_rad_s[i] == -g.offsets_rad_s[g.size() - 1 - i]);

    double sum = 0.0;
    for (double o : g.offsets_rad_s) sum += o;
    CHECK(std::abs(sum) <= 1e-12 * std::abs(g.offsets_rad_s.back()) * 512);

    // increasing frequency is decreasing wavelength, covering the span
    CHECK(g.wavelength_at(0) > g.wavelength_at(511));
    CHECK(g.wavelength_at(0) - g.wavelength_at(511) == doctest::Approx(6.0 * fwhm).epsilon(1e-12));
    CHECK((g.wavelength_at(0) + g.wavelength_at(511)) / 2.0 ==
          doctest::Approx(center).epsilon(1e-12));

    g.validate();
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(wavelength_uniform_grid(center, 6.0 * fwhm, 1), DomainError);
    CHECK_THROWS_AS(wavelength_uniform_grid(center, 0.0, 16), DomainError);
    CHECK_THROWS_AS(wavelength_uniform_grid(center, center, 16), DomainError);
    CHECK_THROWS_AS(wavelength_uniform_grid(0.0, 6e-9, 16), DomainError);

    FrequencyGrid bad = wavelength_uniform_grid(center, 6.0 * fwhm, 16);
    bad.offsets_rad_s[3] = bad.offsets_rad_s[4]; // not strictly increasing
    CHECK_THROWS_AS(bad.validate(), DomainError);

    FrequencyGrid shifted = wavelength_uniform_grid(center, 6.0 * fwhm, 16);
    for (double& o : shifted.offsets_rad_s) o += 1e9; // asymmetric
    CHECK_THROWS_AS(shifted.validate(), DomainError);
}

TEST_CASE("gaussian envelope values") {
    // 601 points over 6 fwhm puts lines exactly at the center and half maximum
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 601);
    const SpectralEnvelope env = gaussian_envelope(center, fwhm, g);
    CHECK(env.amplitude[300] == 1.0);
    CHECK(env.amplitude[300 + 50] * env.amplitude[300 + 50] ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(env.amplitude[300 - 50] * env.amplitude[300 - 50] ==
          doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t i = 1; i <= 300; ++i) {
        CHECK(env.amplitude[300 - i] == env.amplitude[300 + i]);
        CHECK(env.amplitude[300 - i] < env.amplitude[300 - i + 1]);
    }
}

TEST_CASE("gaussian envelope integrates to the analytic power") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 512);
    const SpectralEnvelope env = gaussian_envelope(center, fwhm, g);
    const double step = g.offsets_rad_s[1] - g.offsets_rad_s[0];
    // span = 6 fwhm, so fwhm_omega = span_omega/6
    const double fwhm_omega = (g.offsets_rad_s.back() - g.offsets_rad_s.front()) / 6.0;
    const double analytic =
        (fwhm_omega / 2.0) * std::sqrt(std::numbers::pi / std::numbers::ln2);
    CHECK(env.total_power() * step == doctest::Approx(analytic).epsilon(1e-9));
}

TEST_CASE("flat limit") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 64);
    const SpectralEnvelope env = gaussian_envelope(center, inf, g);
    for (double a : env.amplitude) CHECK(a == 1.0);
}

TEST_CASE("envelope validation") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 64);
    CHECK_THROWS_AS(gaussian_envelope(center, 0.0, g), DomainError);
    CHECK_THROWS_AS(gaussian_envelope(center, -1e-9, g), DomainError);
    CHECK_THROWS_AS(gaussian_envelope(center, std::nan(""), g), DomainError);
    // span must cover 2 fwhm
    CHECK_THROWS_AS(gaussian_envelope(center, 20e-9, g), DomainError);
    // center must match the grid carrier
    CHECK_THROWS_AS(gaussian_envelope(800e-9, fwhm, g), DomainError);
}

TEST_CASE("partition into equal count bands") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 512);
    const SpectralEnvelope env = gaussian_envelope(center, fwhm, g);
    const SpectralPartition part = partition(env, 10);

    CHECK(part.n_zones() == 10);
    CHECK(part.zone_bounds.front().first == 0);
    CHECK(part.zone_bounds.back().second == 512);
    for (std::size_t z = 0; z + 1 < 10; ++z) {
        CHECK(part.zone_bounds[z].second == part.zone_bounds[z + 1].first);
        CHECK(part.zone_bounds[z].second - part.zone_bounds[z].first == 51);
    }
    CHECK(part.zone_bounds.back().second - part.zone_bounds.back().first == 53);

    CHECK(part.total_power() == doctest::Approx(env.total_power()).epsilon(1e-12));
    for (double p : part.powers) CHECK(p > 0.0);

    // equal line count means equal wavelength width
    const double w0 = g.wavelength_at(part.zone_bounds[0].first) -
                      g.wavelength_at(part.zone_bounds[0].second - 1);
    for (std::size_t z = 1; z + 1 < 10; ++z) {
        const double wz = g.wavelength_at(part.zone_bounds[z].first) -
                          g.wavelength_at(part.zone_bounds[z].second - 1);
        CHECK(wz == doctest::Approx(w0).epsilon(1e-9));
    }
}

TEST_CASE("partition validation") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 64);
    const SpectralEnvelope env = gaussian_envelope(center, fwhm, g);
    CHECK_THROWS_AS(partition(env, 1), DomainError);
    CHECK_THROWS_AS(partition(env, 65), DomainError);
    partition(env, 64); // one line per band is allowed
}

TEST_CASE("timing mode line patterns") {
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 101);
    const SpectralEnvelope env = gaussian_envelope(center, fwhm, g);
    const TimingModes tm = timing_modes(env);

    for (std::size_t i : {std::size_t(0), std::size_t(17), std::size_t(50), std::size_t(100)}) {
        CHECK(tm.ceo_raw[i] == g.omega0_rad_s * env.amplitude[i]);
        CHECK(tm.rep_raw[i] == g.offsets_rad_s[i] * env.amplitude[i]);
    }
    CHECK(tm.rep_raw[50] == 0.0); // center line carries no repetition lever arm
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(tm.rep_raw[i] == -tm.rep_raw[100 - i]);
}

TEST_CASE("band space timing modes") {
    // 520 lines so every band holds 52 and the partition mirrors exactly
    const FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 520);
    const SpectralEnvelope env = gaussian_envelope(center, fwhm, g);
    const SpectralPartition part = partition(env, 10);
    const TimingModes tm = timing_modes(env);

    const ModeVector w_ceo = discretize_mode(tm.ceo_raw, env, part, ModeLabel::Ceo);
    const ModeVector w_rep = discretize_mode(tm.rep_raw, env, part, ModeLabel::Rep);
    w_ceo.validate();
    w_rep.validate();

    // carrier mode is the power-weighted direction
    const double pt = part.total_power();
    for (std::size_t z = 0; z < 10; ++z)
        CHECK(w_ceo.components[z] == doctest::Approx(std::sqrt(part.powers[z] / pt)).epsilon(1e-12));

    // repetition mode is odd across the spectrum, positive on the high side
    for (std::size_t z = 0; z < 5; ++z)
        CHECK(w_rep.components[z] == doctest::Approx(-w_rep.components[9 - z]).epsilon(1e-9));
    CHECK(w_rep.components[9] > 0.0);
    CHECK(w_rep.components[0] < 0.0);

    CHECK(std::abs(dot(w_ceo, w_rep)) < 1e-12);
}

TEST_CASE("discretize handles empty bands and degenerate input") {
    FrequencyGrid g = wavelength_uniform_grid(center, 6.0 * fwhm, 20);
    SpectralEnvelope env;
    env.grid = g;
    env.amplitude.assign(20, 1.0);
    env.amplitude[0] = env.amplitude[1] = 0.0;
    const SpectralPartition part = partition(env, 10);
    CHECK(part.powers[0] == 0.0);

    const std::vector<double> ones(20, 1.0);
    const ModeVector w = discretize_mode(ones, env, part);
    CHECK(w.components[0] == 0.0);
    w.validate();
    CHECK(w.label == ModeLabel::Custom);
    CHECK(w.eigen_index == -1);

    std::vector<double> alternating(20);
    for (std::size_t i = 0; i < 20; ++i) alternating[i] = (i % 2 == 0) ? 1.0 : -1.0;
    SpectralEnvelope flat;
    flat.grid = g;
    flat.amplitude.assign(20, 1.0);
    // cancels within every band, so the projection vanishes
    CHECK_THROWS_AS(discretize_mode(alternating, flat, partition(flat, 10), ModeLabel::Custom),
                    DomainError);

    std::vector<double> short_raw(19, 1.0);
    CHECK_THROWS_AS(discretize_mode(short_raw, env, part), DomainError);
}

TEST_CASE("mode vector validation") {
    ModeVector m;
    m.components = {0.6, 0.8};
    m.validate();
    m.components = {0.6, 0.9};
    CHECK_THROWS_AS(m.validate(), DomainError);
    m.components = {};
    CHECK_THROWS_AS(m.validate(), DomainError);

    ModeVector a, b;
    a.components = {1.0, 0.0};
    b.components = {0.0, 1.0, 0.0};
    CHECK_THROWS_AS(dot(a, b), DomainError);
}
