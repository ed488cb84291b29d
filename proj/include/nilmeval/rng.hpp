#pragma once

#include <cmath>
#include <cstdint>

#include "nilmeval/errors.hpp"

namespace nilmeval {

/**
 * @brief Deterministic counter-based random stream.
 *
 * Every draw is a pure function of (seed, stream, counter), so streams are
 * mutually independent: adding draws to one stream never shifts the values
 * produced by another. That keeps generated data stable when a house gains
 * an appliance or a parameter toggles some draws on or off.
 */
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal (Box-Muller; consumes two draws).
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps the log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Poisson count. Uses the product method; beyond lambda 500 the normal
    /// approximation (rounded, clamped at zero) avoids the long product loop.
    std::uint64_t poisson(double lambda) {
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
            throw DomainError("poisson: lambda must be finite and non-negative");
        }
        if (lambda == 0.0) return 0;
        if (lambda > 500.0) {
            const double approx = lambda + std::sqrt(lambda) * normal();
            return approx <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(approx));
        }
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double product = 1.0;
        do {
            k += 1;
            product *= uniform01();
        } while (product > limit);
        return k - 1;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t next_bits() {
        std::uint64_t h = splitmix64(seed_);
        h = splitmix64(h ^ stream_);
        h = splitmix64(h ^ counter_++);
        return h;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

/// Conventional stream id layout: a purpose tag in the high half, an entity
/// index in the low half.
constexpr std::uint64_t rng_stream(std::uint64_t purpose, std::uint64_t index) {
    return (purpose << 32) | (index & 0xffffffffULL);
}

} // namespace nilmeval
