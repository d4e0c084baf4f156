#pragma once

#include "jd/decomposition.hpp"
#include "jd/linalg.hpp"
#include "jd/types.hpp"

#include <cstdint>
#include <optional>

namespace jd {

struct ExtractionParams {
    double epsilon = 0.5;
    double delta = 0.0;  // 0 means epsilon / 3
    double band_lo = 0.9;
    double band_hi = 1.1;
    double kt_lambda_scale = 4.0;  // lambda = scale * h / M
    Index kt_attempts = 64;        // random subsets tried per kt search
    Index bt_attempts = 3;         // greedy restarts
    double bt_c1 = 2.0;            // Besselian target c1 / alpha
    double c_bt = 0.05;            // size target factor c_bt (alpha/H)^2 m
    std::uint64_t rng_seed = 1;
    Index max_rounds = 32;
    Index polish_passes = 3;  // swap hill-climbing after the loop, 0 disables
    long exhaustive_limit = 200000;

    double resolved_delta() const { return delta > 0.0 ? delta : epsilon / 3.0; }
};

struct RoundLog {
    Index round = 0;
    Index sigma_size = 0;
    double remainder = 0.0;  // h - |sigma|
    Index split_size = 0;    // M, children fed to the kt stage
    Index kt_size = 0;
    double kt_constant = 0.0;  // Hilbertian constant of the scaled kt pick
    Index bt_size = 0;
    double bt_besselian = 0.0;
    double projector_defect = 0.0;  // max |P y_j - y_j| over j in sigma
    bool fallback = false;
};

struct SelectionCertificate {
    IndexSet sigma;          // indices into the input (pre-split) system
    double size_bound = 0.0; // (1 - epsilon) h
    Index target_size = 0;
    double h = 0.0;          // |T|_HS^2
    double achieved_equivalence_K = 0.0;
    double per_vector_norm_ratio = 0.0;  // min |Tx_j| / (sqrt(eps) |T|_HS |x_j| / sqrt n)
    std::vector<RoundLog> rounds;
    bool fallback_used = false;
    // extract_trace extras
    std::optional<double> scalar_ratio;   // min |<x_j,Tx_j>| / ((|tr T|/n) |x_j|^2)
    bool trace_fallback = false;
};

struct TauResult {
    IndexSet indices;
    Index effective_m = 0;  // vectors with a nonzero image
    double threshold = 0.0;
    bool size_bound_holds = false;  // |tau| >= (1 - delta) m_eff
};

struct KtResult {
    IndexSet nu;
    double scale_K = 0.0;     // (sqrt(lambda) + sqrt(h/m))^{-1}
    double sigma_max = 0.0;   // of the selected raw columns
    double achieved = 0.0;    // scale_K * sigma_max
    Index size_target = 0;
};

struct BtResult {
    IndexSet rho;
    double sigma_min = 0.0;
    double besselian = 0.0;      // 1 / sigma_min
    double c1_achieved = 0.0;    // besselian * alpha
    Index size_target = 0;
    bool below_target = false;
};

enum class OracleMode { MaximizeSigmaMin, MinimizeCond };

struct OracleResult {
    IndexSet indices;
    SystemCertificate certificate;
    bool exhaustive = false;
};

/// Indices passing |T x_j| >= 0.9 sqrt(delta) sqrt(h/n) |x_j|. Membership
/// is scale invariant, so it can be evaluated on any split level. The
/// (1 - delta) m counting bound is certified over the vectors with a
/// nonzero image and requires their norms in the split band; set
/// require_band = false to skip that precondition check.
TauResult tau_filter(const Decomposition& decomp, const Matrix& t, double delta,
                     bool require_band = true);

/// Kashin-Tzafriri style restriction: a subset nu, |nu| >= lambda m / 4,
/// minimizing the Hilbertian constant of (K x_j)_{j in nu}. Greedy column
/// removal plus seeded random subsets; ties within 1e-9 prefer the larger
/// subset.
KtResult kt_select(const Matrix& system, double lambda, Index attempts,
                   std::uint64_t seed);

/// Bourgain-Tzafriri style selection: greedily grow rho by the vector
/// maximizing sigma_min of the chosen columns while it stays >= alpha/c1.
BtResult bt_select(const Matrix& system, double alpha, double c1, Index attempts,
                   std::uint64_t seed, double c_bt = 0.05);

/// The main extraction loop: tau filter, per-round split / kt / bt behind
/// an orthocomplement projector, children mapped back to parents.
SelectionCertificate extract_main(const Decomposition& decomp, const Matrix& t,
                                  const ExtractionParams& params);

/// extract_main at epsilon = 1 - kappa/h, trimmed to exactly kappa
/// best-conditioned members.
SelectionCertificate extract_count(const Decomposition& decomp, const Matrix& t,
                                   Index kappa, const ExtractionParams& params);

/// Variant filtering on |<x_j, T x_j>| >= (eps/5)(|tr T|/n)|x_j|^2.
/// Falls back to extract_main (flagged) when trace T = 0.
SelectionCertificate extract_trace(const Decomposition& decomp, const Matrix& t,
                                   const ExtractionParams& params);

/// extract_main over the coordinate decomposition id = sum e_j x e_j.
SelectionCertificate restricted_invertibility(const Matrix& t, double epsilon,
                                              const ExtractionParams& params);

/// Greedy subset of unit vectors whose Gram matrix G satisfies
/// |G - id|_op < epsilon; restarts keep the largest subset.
IndexSet near_orthogonal_select(const Matrix& system, double epsilon,
                                std::uint64_t seed, Index attempts = 8);

/// Exhaustive search when C(m, k) fits in exhaustive_limit, else greedy
/// forward selection. Cross-validation oracle for the extractors.
OracleResult greedy_oracle(const Matrix& system, Index k, OracleMode mode,
                           long exhaustive_limit = 200000);

/// Forward greedy growth of `base` by the best of `candidates` until
/// size k (shared by greedy_oracle and the extraction fallback).
IndexSet greedy_extend(const Matrix& system, IndexSet base, IndexSet candidates,
                       Index k, OracleMode mode);

}  // namespace jd
