#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace cdmaseq {

/// SplitMix64. Small state, so every trial or restart can own an
/// independent stream derived from (master seed, index).
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of stream `index` under `master`.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 a(master);
    const std::uint64_t base = a();
    SplitMix64 b(base ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
    return b();
}

/// Uniform on [0, 1) with 53 random bits. Hand-rolled so the value is the
/// same on every standard library.
template <typename Engine>
double uniform01(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Box-Muller standard normal (one value per call; the partner is dropped).
template <typename Engine>
double standard_normal(Engine& engine) {
    double u1 = uniform01(engine);
    while (u1 <= 0.0) u1 = uniform01(engine);
    const double u2 = uniform01(engine);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace cdmaseq
