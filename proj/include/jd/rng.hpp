#pragma once

#include "jd/types.hpp"

#include <cstdint>
#include <utility>

namespace jd {

/// PCG32 with an explicit stream selector. A fresh generator built from
/// (seed, stream) is an independent substream, so Monte Carlo loops can
/// key each trial or shard by its index and stay invariant to scheduling.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(0), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        std::uint64_t hi = next_u32();
        std::uint64_t lo = next_u32();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Uniform integer in [0, bound) by rejection (unbiased).
    std::uint32_t below(std::uint32_t bound) {
        std::uint32_t threshold = (-bound) % bound;
        for (;;) {
            std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    double sign() { return (next_u32() & 1u) ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

inline Vector gaussian_vector(Pcg32& rng, Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

inline Matrix gaussian_matrix(Pcg32& rng, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

/// Fisher-Yates shuffle of an index vector.
inline void shuffle(Pcg32& rng, IndexSet& idx) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = rng.below(static_cast<std::uint32_t>(i));
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace jd
