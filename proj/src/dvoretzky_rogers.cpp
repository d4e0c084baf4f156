#include "jd/dvoretzky_rogers.hpp"

#include <cmath>

namespace jd {

namespace {

void require_projection(const Matrix& p, double tol = 1e-9) {
    require(p.rows() == p.cols(), "projection must be square");
    const double idem = (p * p - p).cwiseAbs().maxCoeff();
    const double sym = (p - p.transpose()).cwiseAbs().maxCoeff();
    require(idem <= tol && sym <= tol, "matrix is not an orthogonal projection",
            std::max(idem, sym));
}

Index projection_rank(const Matrix& p) {
    return static_cast<Index>(std::llround(p.trace()));
}

DRResult finish_dr(const JohnResult& john, const Matrix& op,
                   const SelectionCertificate& cert, double kappa_vs, double n) {
    PolytopeSpace space = polytope_space(john);
    DRResult out;
    out.certificate = cert;
    out.contact_indices = cert.sigma;

    const Index k = static_cast<Index>(cert.sigma.size());
    out.z_vectors = Matrix(john.decomposition.dim, k);
    out.z_norms_x = Vector(k);
    out.image_norms_2 = Vector(k);
    out.x_norm_floor = kInf;
    out.duality_margin = kInf;
    for (Index i = 0; i < k; ++i) {
        const Vector contact = john.contact_points.col(cert.sigma[static_cast<std::size_t>(i)]);
        Vector image = op * contact;
        const double image_norm = image.norm();
        require(image_norm > 0.0, "dr selection produced a zero image");
        out.z_vectors.col(i) = image / image_norm;
        out.z_norms_x[i] = polytope_norm(space, out.z_vectors.col(i));
        out.image_norms_2[i] = image_norm;
        out.x_norm_floor = std::min(out.x_norm_floor, out.z_norms_x[i]);
        out.duality_margin = std::min(
            out.duality_margin, polytope_norm(space, image) - image_norm * image_norm);
    }
    out.equivalence_K = system_certificate(out.z_vectors).equivalence_K;
    out.fitted_c = out.x_norm_floor / std::sqrt(kappa_vs / n);
    return out;
}

}  // namespace

DRResult dr_select(const JohnResult& john, const Matrix& p, Index kappa,
                   const ExtractionParams& params) {
    require_projection(p);
    const Index k = projection_rank(p);
    require(kappa >= 1 && kappa < k, "dr_select: need 1 <= kappa < rank P");
    // |P|_HS = sqrt(k), so the count variant applies directly.
    SelectionCertificate cert = extract_count(john.decomposition, p, kappa, params);
    const double n = static_cast<double>(john.decomposition.dim);
    return finish_dr(john, p, cert, static_cast<double>(k - kappa), n);
}

Matrix dr_classical(const JohnResult& john, const Matrix& subspace_basis, Index kappa) {
    const Index n = john.decomposition.dim;
    const Index k = subspace_basis.cols();
    require(subspace_basis.rows() == n, "dr_classical: basis dimension mismatch");
    require(kappa >= 1 && kappa <= k, "dr_classical: need 1 <= kappa <= dim Z");
    require((subspace_basis.transpose() * subspace_basis - Matrix::Identity(k, k))
                    .cwiseAbs()
                    .maxCoeff() <= 1e-9,
            "dr_classical: basis must be orthonormal");

    // For a polytope space built from contacts, B(X*) = conv(+-u_j) and
    // the same (c_j, u_j) serve as the John decomposition of the dual.
    const Matrix& duals = john.contact_points;

    Matrix basis = subspace_basis;
    Matrix z(n, kappa);
    for (Index step = 0; step < kappa; ++step) {
        Matrix proj = span_projector(basis);
        // trace argument: k_cur = sum c_j |P u_j|^2 with sum c_j = n,
        // so the best contact projection has |P u_j|^2 >= k_cur / n
        Index best = 0;
        double best_norm = -1.0;
        for (Index j = 0; j < duals.cols(); ++j) {
            const double norm = (proj * duals.col(j)).norm();
            if (norm > best_norm) {
                best_norm = norm;
                best = j;
            }
        }
        Vector picked = proj * duals.col(best);
        require(picked.norm() > 0.0, "dr_classical: degenerate projection");
        z.col(step) = picked / picked.norm();

        // deflate: Z <- Z minus span(z)
        Matrix reduced(n, basis.cols() - 1);
        Vector coeffs = basis.transpose() * z.col(step);
        Index drop;
        coeffs.cwiseAbs().maxCoeff(&drop);
        Index c = 0;
        for (Index j = 0; j < basis.cols(); ++j) {
            if (j == drop) continue;
            Vector v = basis.col(j) - z.col(step).dot(basis.col(j)) * z.col(step);
            // re-orthonormalize against the kept columns
            for (Index r = 0; r < c; ++r) {
                v -= reduced.col(r).dot(v) * reduced.col(r);
            }
            for (Index r = 0; r < c; ++r) {
                v -= reduced.col(r).dot(v) * reduced.col(r);
            }
            require(v.norm() > 1e-12, "dr_classical: deflation lost rank");
            reduced.col(c++) = v / v.norm();
        }
        basis = std::move(reduced);
    }
    return z;
}

SelectionCertificate contact_select(const JohnResult& john, double epsilon,
                                    const ExtractionParams& params) {
    ExtractionParams p = params;
    p.epsilon = epsilon;
    const Index n = john.decomposition.dim;
    return extract_main(john.decomposition, Matrix::Identity(n, n), p);
}

DRResult selfadjoint_variant(const JohnResult& john, const Matrix& t, Index kappa,
                             const ExtractionParams& params) {
    const Index n = john.decomposition.dim;
    require(t.rows() == n && t.cols() == n, "selfadjoint_variant: dimension mismatch");
    SpectralSummary spec = svd(t);
    require(spec.op_norm <= 1.0 + 1e-9, "selfadjoint_variant: need |T| <= 1",
            spec.op_norm);
    const double h = spec.hs_norm * spec.hs_norm;
    require(static_cast<double>(kappa) < h, "selfadjoint_variant: kappa must be below |T|_HS^2");

    Matrix t_abs = psd_sqrt(t.transpose() * t);
    SelectionCertificate cert = extract_count(john.decomposition, t_abs, kappa, params);

    // z_j = |T| x_j / |T x_j|_2; the two norms agree, so columns are unit.
    DRResult out = finish_dr(john, t_abs, cert, h - static_cast<double>(kappa),
                             static_cast<double>(n));
    return out;
}

WalshReport walsh_counterexample(int m) {
    require(m >= 0 && m <= 10, "walsh_counterexample: need 0 <= m <= 10");
    Matrix w = walsh_matrix(m);
    const Index n = w.rows();
    const double root_n = std::sqrt(static_cast<double>(n));
    Matrix t = w / root_n;

    PolytopeSpace linf = linf_space(n);
    WalshReport report;
    report.n = n;
    report.expected = 1.0 / root_n;
    report.z_norms_x = Vector(n);
    for (Index j = 0; j < n; ++j) {
        Vector z = t.col(j) / t.col(j).norm();
        report.z_norms_x[j] = polytope_norm(linf, z);
    }
    report.max_deviation =
        (report.z_norms_x.array() - report.expected).abs().maxCoeff();
    report.orthogonality_residual =
        (w.transpose() * w - static_cast<double>(n) * Matrix::Identity(n, n)).norm();
    return report;
}

SharpnessReport sharpness_projection(Index n, Index k) {
    require(n >= 1 && (n & (n - 1)) == 0, "sharpness_projection: n must be a power of two");
    require(k >= 1 && k <= n, "sharpness_projection: need 1 <= k <= n");
    int p = 0;
    while ((Index{1} << p) < n) ++p;
    Matrix w = walsh_matrix(p) / std::sqrt(static_cast<double>(n));

    // k orthonormal Walsh rows; every column of the resulting projection
    // has squared norm k/n and entries within k/n in magnitude.
    Matrix rows = w.topRows(k);
    SharpnessReport report;
    report.n = n;
    report.k = k;
    report.projection = rows.transpose() * rows;
    report.col_norms_2 = report.projection.colwise().norm().transpose();
    report.max_inf_norm = report.projection.cwiseAbs().maxCoeff();
    report.bound = static_cast<double>(k) / static_cast<double>(n);
    report.projector_residual = std::max(
        (report.projection * report.projection - report.projection).cwiseAbs().maxCoeff(),
        (report.projection - report.projection.transpose()).cwiseAbs().maxCoeff());
    return report;
}

}  // namespace jd
