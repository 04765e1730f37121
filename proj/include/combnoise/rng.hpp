#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace combnoise::rng {

// splitmix64 finalizer; full-period bijective mixer over uint64.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent substream id from (master seed, context words). Measurements
// seeded this way are order- and worker-count-independent.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

inline std::uint64_t frequency_bits(double f_hz) { return std::bit_cast<std::uint64_t>(f_hz); }

// Standard normal draws via Marsaglia's polar method over mt19937_64.
// Hand-rolled (not std::normal_distribution) so streams are identical
// across standard libraries; draws come out in a fixed documented order.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t stream_id) : eng_(stream_id) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = unit_pm1();
            v = unit_pm1();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    // uniform on (-1, 1), 53-bit resolution
    double unit_pm1() {
        const std::uint64_t r = eng_();
        return static_cast<double>(r >> 11) * (2.0 / 9007199254740992.0) - 1.0;
    }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace combnoise::rng
