#pragma once

#include "jd/linalg.hpp"
#include "jd/types.hpp"

#include <cstdint>
#include <optional>

namespace jd {

/// A finite system (x_j) in R^n whose rank-one sum reproduces the
/// identity: sum_j x_j x_j^T = id. Vectors are the columns of `vectors`.
/// `parent_map` is present after splitting and sends each child index to
/// the index it was split from.
struct Decomposition {
    Index dim = 0;
    Matrix vectors;  // n x m, columns are the x_j
    std::optional<IndexSet> parent_map;
    double residual = 0.0;  // |sum x_j x_j^T - id|_F measured at validation

    Index size() const { return vectors.cols(); }
    Matrix frame_operator() const { return vectors * vectors.transpose(); }
};

/// Per-vector multiplicities for a split.
struct SplitPlan {
    std::vector<Index> counts;
};

struct TightenResult {
    Decomposition decomposition;
    Matrix map;          // S^{-1/2}, applied to every input vector
    double frame_lower;  // A: smallest eigenvalue of the frame operator
    double frame_upper;  // B: largest eigenvalue
};

double default_validation_tol(Index dim);

/// Accepts the system iff |sum x_j x_j^T - id|_F <= tol; the thrown
/// rejection carries the measured residual.
Decomposition validate(const Matrix& vectors, double tol);
inline Decomposition validate(const Matrix& vectors) {
    return validate(vectors, default_validation_tol(vectors.rows()));
}

/// Replace each x_j by counts[j] copies of x_j / sqrt(counts[j]).
/// The frame operator is preserved exactly; parent_map records origins.
Decomposition split(const Decomposition& decomp, const SplitPlan& plan);

/// Multiplicities proportional to the given squared weights such that
/// every child weight lands in band * sqrt(sum w / m'), m' the total
/// count. Grows the total beyond target_m when needed; weights equal to
/// zero keep multiplicity one (no split can move them into the band).
SplitPlan equal_norm_plan(const Vector& weights_sq, Index target_m,
                          double band_lo = 0.9, double band_hi = 1.1);

/// equal_norm_plan on the vector norms, applied via split().
Decomposition equal_norm_split(const Decomposition& decomp, Index target_m);

/// Seeded Gaussian system pushed to tightness; validates at 1e-9.
Decomposition random_tight_frame(Index n, Index m, std::uint64_t seed);

/// Apply S^{-1/2} (inverse square root of the frame operator) to every
/// vector. The result is a valid decomposition; the witness map has
/// condition number sqrt(B/A) for the input frame bounds A, B.
TightenResult tighten(const Matrix& vectors);

}  // namespace jd
