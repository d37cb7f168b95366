#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace varnet {

/// Deterministic 64-bit random stream (SplitMix64 core).
///
/// The project does not use <random> distributions: their output is
/// implementation-defined, and sweep results must be reproducible from the
/// recorded seeds alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe under log().
    double uniform01_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller; second value cached.
    double gaussian() {
        if (has_cache_) {
            has_cache_ = false;
            return cache_;
        }
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cache_ = r * std::sin(a);
        has_cache_ = true;
        return r * std::cos(a);
    }

    /// Laplace with the given scale parameter b (variance 2 b^2).
    double laplace(double scale) {
        const double u = uniform01_open();
        return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
    }

    /// Random sign, +1 or -1.
    double sign() { return (next_u64() & 1ULL) ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

namespace detail {
inline std::uint64_t splitmix64_once(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}
}  // namespace detail

/// Order-independent seed derivation: the result depends only on the base
/// seed, a textual tag, and up to three integer cell coordinates. Used so
/// that every (n, replication) cell of a sweep can be regenerated in
/// isolation.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = detail::splitmix64_once(base ^ detail::fnv1a64(tag));
    h = detail::splitmix64_once(h ^ a);
    h = detail::splitmix64_once(h ^ b);
    h = detail::splitmix64_once(h ^ c);
    return h;
}

}  // namespace varnet
