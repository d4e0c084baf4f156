#pragma once

#include "jd/types.hpp"

#include <utility>
#include <vector>

namespace jd {

struct EigResult {
    Vector eigenvalues;   // descending
    Matrix eigenvectors;  // orthonormal columns, same order
};

/// Spectrum-level summary of a dense matrix.
struct SpectralSummary {
    Vector singular_values;  // descending, nonnegative
    double op_norm = 0.0;    // largest singular value
    double hs_norm = 0.0;    // Frobenius norm, computed independently of the spectrum
    double rank_tol = 0.0;   // threshold used for rank decisions
    Index rank = 0;
};

/// Hilbertian / Besselian / equivalence constants of a vector system.
/// Infinite values flag linearly dependent (or zero-containing) systems.
struct SystemCertificate {
    double hilbertian_K = 0.0;   // sigma_max of the synthesis matrix
    double besselian_K = 0.0;    // 1 / sigma_min, +inf when singular
    double equivalence_K = 0.0;  // condition number after column normalization
    Vector scaling;              // reciprocal column norms (the equivalence witness)
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// `tol` bounds the accepted asymmetry |m - m^T|; the input is
/// symmetrized internally before sweeping.
EigResult sym_eig(const Matrix& m, double tol = 1e-9);

/// Singular values via the eigendecomposition of the smaller Gram matrix.
SpectralSummary svd(const Matrix& m, double rank_tol_factor = 1e-9);

SystemCertificate system_certificate(const Matrix& vectors);
SystemCertificate system_certificate(const std::vector<Vector>& vectors);

/// Both sides of the Hilbert-Schmidt identity over a decomposition's
/// vectors: returns (|T|_HS^2, sum_j |T x_j|^2). Caller asserts equality.
std::pair<double, double> hs_identity_check(const Matrix& vectors, const Matrix& t);

/// Largest singular value by power iteration on the Gram operator.
/// Accurate enough for subset-search scoring; certificates use svd().
double sigma_max_estimate(const Matrix& m, int iters = 60);

/// Smallest eigenvalue of the Gram matrix of the given columns (>= 0).
double gram_min_eigenvalue(const Matrix& vectors);

/// Orthogonal projector onto the complement of span(basis columns).
Matrix complement_projector(const Matrix& basis, Index dim);

/// Orthogonal projector onto span(basis columns).
Matrix span_projector(const Matrix& basis);

/// Symmetric PSD square root with eigenvalue clamping at zero.
Matrix psd_sqrt(const Matrix& m, double clamp_tol = 1e-12);

/// Inverse square root of a positive definite symmetric matrix.
/// Throws when the smallest eigenvalue is at or below rank_tol * largest.
Matrix pd_inverse_sqrt(const Matrix& m, double rank_tol = 1e-12);

/// Sylvester-type +-1 Walsh matrix of order 2^p.
Matrix walsh_matrix(int p);

/// Columns of `m` selected by `idx`, in order.
Matrix select_columns(const Matrix& m, const IndexSet& idx);

}  // namespace jd
