#include "jd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jd {

namespace {

// One cyclic Jacobi sweep; returns the off-diagonal Frobenius norm after it.
double jacobi_sweep(Matrix& a, Matrix& v) {
    const Index n = a.rows();
    for (Index p = 0; p < n - 1; ++p) {
        for (Index q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            if (apq == 0.0) continue;
            const double app = a(p, p);
            const double aqq = a(q, q);
            const double theta = (aqq - app) / (2.0 * apq);
            // smaller root of t^2 + 2 theta t - 1 = 0, stable form
            const double t = (theta >= 0.0)
                                 ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                 : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            for (Index k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akq = a(k, q);
                a(k, p) = c * akp - s * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (Index k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = s * apk + c * aqk;
            }
            for (Index k = 0; k < n; ++k) {
                const double vkp = v(k, p);
                const double vkq = v(k, q);
                v(k, p) = c * vkp - s * vkq;
                v(k, q) = s * vkp + c * vkq;
            }
        }
    }
    double off = 0.0;
    for (Index p = 0; p < n - 1; ++p)
        for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    return std::sqrt(2.0 * off);
}

}  // namespace

EigResult sym_eig(const Matrix& m, double tol) {
    require(m.rows() == m.cols(), "sym_eig: matrix must be square");
    require_finite(m, "sym_eig");
    const Index n = m.rows();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    require(asym <= tol * scale, "sym_eig: matrix not symmetric within tolerance", asym);

    Matrix a = 0.5 * (m + m.transpose());
    Matrix v = Matrix::Identity(n, n);
    const double frob = std::max(a.norm(), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        if (jacobi_sweep(a, v) <= 1e-15 * frob) break;
    }

    EigResult r;
    r.eigenvalues = a.diagonal();
    r.eigenvectors = std::move(v);

    IndexSet order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        return r.eigenvalues[i] > r.eigenvalues[j];
    });
    Vector evals(n);
    Matrix evecs(n, n);
    for (Index k = 0; k < n; ++k) {
        evals[k] = r.eigenvalues[order[static_cast<std::size_t>(k)]];
        evecs.col(k) = r.eigenvectors.col(order[static_cast<std::size_t>(k)]);
    }
    r.eigenvalues = std::move(evals);
    r.eigenvectors = std::move(evecs);
    return r;
}

SpectralSummary svd(const Matrix& m, double rank_tol_factor) {
    require_finite(m, "svd");
    SpectralSummary s;
    const Index k = std::min(m.rows(), m.cols());
    if (k == 0) {
        s.singular_values = Vector(0);
        return s;
    }
    // Gram matrix of the smaller side keeps the eigenproblem minimal.
    Matrix gram = (m.rows() <= m.cols()) ? Matrix(m * m.transpose())
                                         : Matrix(m.transpose() * m);
    EigResult eig = sym_eig(gram, 1e-7);
    // Gram eigenvalues below machine noise carry no information; flush
    // them so zero singular values come out exact.
    const double noise = 1e-14 * std::max(eig.eigenvalues[0], 0.0);
    s.singular_values = (eig.eigenvalues.array() > noise)
                            .select(eig.eigenvalues.cwiseMax(0.0), 0.0)
                            .cwiseSqrt();
    s.op_norm = s.singular_values[0];
    s.hs_norm = m.norm();
    s.rank_tol = rank_tol_factor * s.op_norm;
    s.rank = (s.singular_values.array() > s.rank_tol).count();
    return s;
}

SystemCertificate system_certificate(const Matrix& vectors) {
    require(vectors.cols() >= 1, "system_certificate: empty system");
    require_finite(vectors, "system_certificate");
    SystemCertificate cert;
    const Index m = vectors.cols();

    SpectralSummary spec = svd(vectors);
    const Index k = spec.singular_values.size();
    cert.hilbertian_K = spec.op_norm;
    // sigma_min over all m columns: zero whenever m exceeds the Gram size.
    const double sigma_min = (m > k) ? 0.0 : spec.singular_values[k - 1];
    cert.besselian_K = (sigma_min > spec.rank_tol) ? 1.0 / sigma_min : kInf;

    cert.scaling = Vector(m);
    bool has_zero = false;
    Matrix normalized(vectors.rows(), m);
    for (Index j = 0; j < m; ++j) {
        const double norm = vectors.col(j).norm();
        if (norm <= 0.0) {
            has_zero = true;
            cert.scaling[j] = kInf;
            normalized.col(j).setZero();
        } else {
            cert.scaling[j] = 1.0 / norm;
            normalized.col(j) = vectors.col(j) / norm;
        }
    }
    if (has_zero || !std::isfinite(cert.besselian_K)) {
        cert.equivalence_K = kInf;
        if (has_zero) cert.besselian_K = kInf;
        return cert;
    }
    SpectralSummary nspec = svd(normalized);
    const double nmin = (m > nspec.singular_values.size())
                            ? 0.0
                            : nspec.singular_values[nspec.singular_values.size() - 1];
    cert.equivalence_K =
        (nmin > nspec.rank_tol) ? nspec.op_norm / nmin : kInf;
    return cert;
}

SystemCertificate system_certificate(const std::vector<Vector>& vectors) {
    require(!vectors.empty(), "system_certificate: empty system");
    const Index n = vectors.front().size();
    Matrix s(n, static_cast<Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        require(vectors[j].size() == n, "system_certificate: dimension mismatch");
        s.col(static_cast<Index>(j)) = vectors[j];
    }
    return system_certificate(s);
}

std::pair<double, double> hs_identity_check(const Matrix& vectors, const Matrix& t) {
    require(t.rows() == t.cols(), "hs_identity_check: operator must be square");
    require(t.cols() == vectors.rows(), "hs_identity_check: dimension mismatch");
    const double lhs = t.squaredNorm();
    const double rhs = (t * vectors).squaredNorm();
    return {lhs, rhs};
}

double sigma_max_estimate(const Matrix& m, int iters) {
    if (m.size() == 0) return 0.0;
    Vector v = Vector::Ones(m.cols());
    v.normalize();
    double est = 0.0;
    for (int i = 0; i < iters; ++i) {
        Vector w = m.transpose() * (m * v);
        const double norm = w.norm();
        if (norm <= 0.0) return 0.0;
        w /= norm;
        const double next = std::sqrt(norm);
        if (i > 4 && std::abs(next - est) <= 1e-12 * std::max(1.0, next)) {
            return next;
        }
        est = next;
        v = std::move(w);
    }
    return est;
}

double gram_min_eigenvalue(const Matrix& vectors) {
    Matrix gram = vectors.transpose() * vectors;
    EigResult eig = sym_eig(gram, 1e-7);
    return std::max(0.0, eig.eigenvalues[eig.eigenvalues.size() - 1]);
}

Matrix span_projector(const Matrix& basis) {
    if (basis.cols() == 0) return Matrix::Zero(basis.rows(), basis.rows());
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix q = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
    // rank-deficient input: keep only columns matching nonzero R diagonal
    Matrix r = qr.matrixQR().topRows(basis.cols()).triangularView<Eigen::Upper>();
    const double tol = 1e-12 * std::max(1.0, r.cwiseAbs().maxCoeff());
    IndexSet keep;
    for (Index j = 0; j < basis.cols(); ++j)
        if (std::abs(r(j, j)) > tol) keep.push_back(j);
    if (keep.size() < static_cast<std::size_t>(basis.cols())) {
        q = select_columns(q, keep);
    }
    return q * q.transpose();
}

Matrix complement_projector(const Matrix& basis, Index dim) {
    if (basis.cols() == 0) return Matrix::Identity(dim, dim);
    return Matrix::Identity(dim, dim) - span_projector(basis);
}

Matrix psd_sqrt(const Matrix& m, double clamp_tol) {
    EigResult eig = sym_eig(m, 1e-8);
    const double scale = std::max(std::abs(eig.eigenvalues[0]), 1e-300);
    Vector roots = eig.eigenvalues;
    for (Index i = 0; i < roots.size(); ++i) {
        roots[i] = (roots[i] > clamp_tol * scale) ? std::sqrt(roots[i]) : 0.0;
    }
    return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.transpose();
}

Matrix pd_inverse_sqrt(const Matrix& m, double rank_tol) {
    EigResult eig = sym_eig(m, 1e-8);
    const Index n = eig.eigenvalues.size();
    const double lead = eig.eigenvalues[0];
    require(lead > 0.0 && eig.eigenvalues[n - 1] > rank_tol * lead,
            "pd_inverse_sqrt: matrix not positive definite",
            eig.eigenvalues[n - 1]);
    Vector inv_roots = eig.eigenvalues.cwiseSqrt().cwiseInverse();
    return eig.eigenvectors * inv_roots.asDiagonal() * eig.eigenvectors.transpose();
}

Matrix walsh_matrix(int p) {
    require(p >= 0 && p <= 10, "walsh_matrix: order 2^p with 0 <= p <= 10");
    Index n = Index{1} << p;
    Matrix w = Matrix::Ones(1, 1);
    for (Index size = 1; size < n; size *= 2) {
        Matrix next(2 * size, 2 * size);
        next.topLeftCorner(size, size) = w;
        next.topRightCorner(size, size) = w;
        next.bottomLeftCorner(size, size) = w;
        next.bottomRightCorner(size, size) = -w;
        w = std::move(next);
    }
    return w;
}

Matrix select_columns(const Matrix& m, const IndexSet& idx) {
    Matrix out(m.rows(), static_cast<Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        out.col(static_cast<Index>(j)) = m.col(idx[j]);
    }
    return out;
}

}  // namespace jd
