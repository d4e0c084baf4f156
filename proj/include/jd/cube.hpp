#pragma once

#include "jd/dvoretzky_rogers.hpp"
#include "jd/john.hpp"
#include "jd/types.hpp"

#include <cstdint>

namespace jd {

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    bool exact = false;
    long trials = 0;
};

struct TalagrandResult {
    IndexSet sigma;
    double domination_margin = 0.0;  // max_i sum_{j != i} |x_i^*(x_j)|, <= 1/2
    Index size_target = 0;           // c_tal * m / omega, monitored only
    double omega_value = 0.0;
};

struct CubeEmbeddingResult {
    IndexSet sigma;      // contact indices spanning the cube copy
    Index m_dim = 0;     // |sigma|
    double iso_constant = 1.0;       // measured sup |x|_X / max_j |<x, x_j>|
    MonteCarloEstimate m_estimate;   // Rademacher average of the z system
    double omega = 0.0;
    MonteCarloEstimate ell_p;        // ell-norm of the projection
    double domination_margin = 0.0;
    double benchmark = 0.0;          // sqrt(n/k) * ell(P)
    double lower_violations = 0.0;   // worst slack of 1/2 max|a| <= |sum a z|_X
    double upper_margin = 0.0;       // max |sum a z|_X / (M max|a|) over samples
    Matrix z_vectors;
};

struct ComplementationReport {
    double pz_norm_estimate = 0.0;  // sup |P_Z x|_X / |x|_X over probes
    double benchmark = 0.0;         // sqrt(n/k) * ell(P)
    double iso_constant = 0.0;      // carried from the embedding
};

/// E | sum eps_j x_j |_X over uniform signs; exact enumeration when the
/// system has at most `exact_limit` vectors, Monte Carlo otherwise.
MonteCarloEstimate rademacher_average(const Matrix& vectors, const PolytopeSpace& space,
                                      long trials, std::uint64_t seed,
                                      Index exact_limit = 20);

/// Monte Carlo only, regardless of size (estimator soundness checks).
MonteCarloEstimate rademacher_monte_carlo(const Matrix& vectors,
                                          const PolytopeSpace& space, long trials,
                                          std::uint64_t seed);

/// sup over extreme points +-u_i of B(X*) of sum_j |<u_i, x_j>|.
double omega(const Matrix& vectors, const PolytopeSpace& space);

/// ell(u)^2 = E |u g|_X^2 for standard Gaussian g; stderr by the delta
/// method. Trials are keyed by index, so sharding cannot change results.
MonteCarloEstimate ell_norm(const Matrix& u, const PolytopeSpace& space, long trials,
                            std::uint64_t seed);

/// Greedy subset keeping sum_{j in sigma, j != i} |x_i^*(x_j)| <= 1/2 for
/// all i in sigma, where x_j^* is the argmax direction of x_j (ties to
/// the lowest index). Restarts keep the largest subset.
TalagrandResult talagrand_select(const Matrix& vectors, const PolytopeSpace& space,
                                 std::uint64_t seed, Index attempts = 8,
                                 double c_tal = 0.1);

/// Full pipeline: dr_select at kappa = k/2, rescale so <x_j, z_j> >= 1,
/// talagrand_select, then certificate measurements on span(z_j).
CubeEmbeddingResult gt_embedding(const JohnResult& john, const Matrix& p,
                                 const ExtractionParams& params, long trials = 1000,
                                 std::uint64_t seed = 1);

/// Norm of the orthogonal projection onto span(z_j) as an operator on X,
/// estimated over direction and Gaussian probes.
ComplementationReport complementation_check(const CubeEmbeddingResult& result,
                                            const PolytopeSpace& space, long trials,
                                            std::uint64_t seed = 1);

}  // namespace jd
