#pragma once

#include "jd/extraction.hpp"
#include "jd/john.hpp"
#include "jd/types.hpp"

namespace jd {

/// Contact-point selection under an operator, with the measured
/// Dvoretzky-Rogers quantities.
struct DRResult {
    IndexSet contact_indices;       // into the JohnResult contacts
    Matrix z_vectors;               // z_j, unit columns
    Vector z_norms_x;               // |z_j|_X per selected contact
    Vector image_norms_2;           // |P x_j|_2 per selected contact
    double equivalence_K = 0.0;     // of (z_j) against an orthonormal basis
    double x_norm_floor = 0.0;      // min_j |z_j|_X
    double fitted_c = 0.0;          // x_norm_floor / sqrt((k - kappa)/n)
    double duality_margin = 0.0;    // min_j (|Px_j|_X - |Px_j|_2^2), >= 0 expected
    SelectionCertificate certificate;
};

struct WalshReport {
    Index n = 0;
    Vector z_norms_x;             // all equal n^{-1/2}
    double expected = 0.0;        // n^{-1/2}
    double max_deviation = 0.0;   // max |z_norm - expected|
    double orthogonality_residual = 0.0;  // |W^T W - n id|_F
};

struct SharpnessReport {
    Index n = 0;
    Index k = 0;
    Matrix projection;
    Vector col_norms_2;           // all sqrt(k/n)
    double max_inf_norm = 0.0;    // max_j |P e_j|_inf, at most k/n
    double bound = 0.0;           // k/n
    double projector_residual = 0.0;  // max(|P^2 - P|, |P - P^T|)
};

/// Theorem-DR style selection: extract_count with T = P on the John
/// decomposition, z_j = P x_j / |P x_j|_2 for the selected contacts.
DRResult dr_select(const JohnResult& john, const Matrix& p, Index kappa,
                   const ExtractionParams& params);

/// Classical inductive construction: repeatedly pick the contact whose
/// projection onto the current subspace is longest (the trace argument
/// over the dual decomposition), normalize, deflate. Returns the exactly
/// orthonormal z_j as columns.
Matrix dr_classical(const JohnResult& john, const Matrix& subspace_basis, Index kappa);

/// Corollary-contact selection: extract_main with T = id; the selected
/// contacts have unit euclidean and unit X norm.
SelectionCertificate contact_select(const JohnResult& john, double epsilon,
                                    const ExtractionParams& params);

/// Polar-decomposition variant: extract_count on |T| = (T^T T)^{1/2},
/// z_j = |T| x_j / |T x_j|_2.
DRResult selfadjoint_variant(const JohnResult& john, const Matrix& t, Index kappa,
                             const ExtractionParams& params);

/// T = n^{-1/2} W on l_inf^n: every |z_j|_X equals n^{-1/2}, so no
/// operator-independent X-norm floor like Theorem DR's can hold.
WalshReport walsh_counterexample(int m);

/// Rank-k projection built from Walsh rows with |P e_j|_2 = sqrt(k/n)
/// for every j and |P e_j|_inf at most k/n.
SharpnessReport sharpness_projection(Index n, Index k);

}  // namespace jd
