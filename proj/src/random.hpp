#pragma once

// Distribution helpers with a fixed algorithm. The standard distributions
// are implementation-defined, which would make seeded output differ between
// standard libraries.

#include <cstdint>
#include <random>

namespace frontier::detail {

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = gen();
    } while (v >= limit);
    return v % bound;
}

/// Uniform integer in [lo, hi]; lo <= hi.
inline long long uniform_between(std::mt19937_64& gen, long long lo, long long hi) {
    return lo + static_cast<long long>(
                    uniform_below(gen, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

}  // namespace frontier::detail
