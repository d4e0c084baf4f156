#include "jd/john.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace jd {

namespace {

// g_j = p_j^T Lambda^{-1} p_j for Lambda = P diag(u) P^T.
Vector support_values(const Matrix& points, const Matrix& lambda_inv) {
    return (points.array() * (lambda_inv * points).array()).colwise().sum().transpose();
}

Matrix weighted_scatter(const Matrix& points, const Vector& u) {
    return points * u.asDiagonal() * points.transpose();
}

}  // namespace

MveeResult mvee(const Matrix& points, double tol, long max_iter) {
    const Index n = points.rows();
    const Index m = points.cols();
    require(n >= 1 && m >= 1, "mvee: empty point set");
    require_finite(points, "mvee");
    require(tol > 0.0, "mvee: tolerance must be positive");

    Vector u = Vector::Constant(m, 1.0 / static_cast<double>(m));
    Matrix lambda = weighted_scatter(points, u);
    Eigen::LDLT<Matrix> ldlt(lambda);
    require(ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                ldlt.vectorD().minCoeff() > 1e-13 * ldlt.vectorD().maxCoeff(),
            "mvee: points do not span the space");

    const double nd = static_cast<double>(n);
    MveeResult out;
    Matrix lambda_inv = ldlt.solve(Matrix::Identity(n, n));
    long it = 0;
    for (; it < max_iter; ++it) {
        Vector g = support_values(points, lambda_inv);
        Index j_max, j_min = 0;
        const double g_max = g.maxCoeff(&j_max);
        // smallest support value among coordinates with weight
        double g_min = kInf;
        for (Index j = 0; j < m; ++j) {
            if (u[j] > 0.0 && g[j] < g_min) {
                g_min = g[j];
                j_min = j;
            }
        }
        if (g_max - nd <= tol * nd) break;

        const double add_gain = g_max - nd;
        const double away_gain = nd - g_min;
        Index j;
        double beta;
        if (add_gain >= away_gain) {
            j = j_max;
            beta = (g_max - nd) / (nd * (g_max - 1.0));
        } else {
            j = j_min;
            beta = (g_min - nd) / (nd * (g_min - 1.0));  // negative
            beta = std::max(beta, -u[j] / (1.0 - u[j]));
        }
        if (!std::isfinite(beta) || beta == 0.0) break;

        u *= (1.0 - beta);
        u[j] += beta;
        u = u.cwiseMax(0.0);
        u /= u.sum();

        lambda = weighted_scatter(points, u);
        ldlt.compute(lambda);
        if (ldlt.info() != Eigen::Success) {
            throw ValidationError("mvee: scatter matrix lost rank during ascent");
        }
        lambda_inv = ldlt.solve(Matrix::Identity(n, n));
    }

    Vector g = support_values(points, lambda_inv);
    out.ellipsoid.shape = lambda_inv / nd;
    out.point_weights = u;
    out.gap = g.maxCoeff() / nd - 1.0;
    out.iterations = it;
    out.converged = out.gap <= tol;
    return out;
}

JohnResult john_decomposition(const Matrix& points, double tol, long max_iter) {
    const Index n = points.rows();
    // The identity residual is the contract; run the ellipsoid solver tighter.
    const double solver_tol = std::max(std::min(tol / 50.0, 1e-8), 1e-12);
    MveeResult ellips = mvee(points, solver_tol, max_iter);

    JohnResult out;
    out.ellipsoid = ellips.ellipsoid;
    out.mvee_converged = ellips.converged;
    out.mvee_gap = ellips.gap;

    // Contacts touch the boundary: x^T M x ~ 1. The solver's support set
    // is included too; it carries the mass of the optimal weights.
    const double contact_cut = 1.0 - std::max(10.0 * solver_tol, 1e-9);
    const Matrix& m_shape = ellips.ellipsoid.shape;
    Vector boundary = (points.array() * (m_shape * points).array()).colwise().sum().transpose();
    for (Index j = 0; j < points.cols(); ++j) {
        if (boundary[j] >= contact_cut || ellips.point_weights[j] > 1e-10) {
            out.contact_indices.push_back(j);
        }
    }
    require(!out.contact_indices.empty(), "john_decomposition: no contact points found");

    // Map to coordinates where the ellipsoid is the unit ball and
    // normalize the contacts exactly.
    Matrix half = psd_sqrt(m_shape);
    Matrix contacts(n, static_cast<Index>(out.contact_indices.size()));
    for (std::size_t k = 0; k < out.contact_indices.size(); ++k) {
        Vector v = half * points.col(out.contact_indices[k]);
        contacts.col(static_cast<Index>(k)) = v / v.norm();
    }
    out.contact_points = contacts;

    // Weights: least squares on sum c_j u_j u_j^T = id over the symmetric
    // entries, scaled so the Frobenius inner product is preserved.
    const Index k = contacts.cols();
    const Index rows = n * (n + 1) / 2;
    Matrix a(rows, k);
    Vector b(rows);
    const double sqrt2 = std::sqrt(2.0);
    {
        Index r = 0;
        for (Index i = 0; i < n; ++i) {
            for (Index j2 = i; j2 < n; ++j2, ++r) {
                const double scale = (i == j2) ? 1.0 : sqrt2;
                b[r] = (i == j2) ? 1.0 : 0.0;
                for (Index c = 0; c < k; ++c) {
                    a(r, c) = scale * contacts(i, c) * contacts(j2, c);
                }
            }
        }
    }
    Vector weights = Eigen::CompleteOrthogonalDecomposition<Matrix>(a).solve(b);
    const double neg_tol = std::max(tol, 1e-9);
    if (weights.minCoeff() < -neg_tol) {
        weights = nnls(a, b);
    }
    if (weights.minCoeff() < -neg_tol) {
        throw ValidationError("john_decomposition: negative contact weights",
                              weights.minCoeff());
    }
    weights = weights.cwiseMax(0.0);

    // boundary touchers that carry no mass are not contacts of the
    // decomposition; keep the strictly weighted ones
    const double weight_floor = 1e-12 * static_cast<double>(n);
    IndexSet kept_local;
    for (Index c = 0; c < k; ++c) {
        if (weights[c] > weight_floor) kept_local.push_back(c);
    }
    require(!kept_local.empty(), "john_decomposition: all contact weights vanish");
    const Index kk = static_cast<Index>(kept_local.size());
    IndexSet kept_indices(static_cast<std::size_t>(kk));
    Vector kept_weights(kk);
    Matrix kept_contacts(n, kk);
    for (Index c = 0; c < kk; ++c) {
        kept_indices[static_cast<std::size_t>(c)] =
            out.contact_indices[static_cast<std::size_t>(kept_local[static_cast<std::size_t>(c)])];
        kept_weights[c] = weights[kept_local[static_cast<std::size_t>(c)]];
        kept_contacts.col(c) = contacts.col(kept_local[static_cast<std::size_t>(c)]);
    }

    Matrix frame = Matrix::Zero(n, n);
    Matrix decomposition_vectors(n, kk);
    for (Index c = 0; c < kk; ++c) {
        decomposition_vectors.col(c) = std::sqrt(kept_weights[c]) * kept_contacts.col(c);
        frame.noalias() += kept_weights[c] * kept_contacts.col(c) * kept_contacts.col(c).transpose();
    }
    out.residual = (frame - Matrix::Identity(n, n)).norm();
    if (out.residual > tol) {
        throw ValidationError("john_decomposition: contact set cannot support the identity",
                              out.residual);
    }
    out.contact_indices = std::move(kept_indices);
    out.contact_points = std::move(kept_contacts);
    out.weights = std::move(kept_weights);
    out.decomposition = validate(decomposition_vectors, std::max(tol, 1e-9));
    return out;
}

double polytope_norm(const PolytopeSpace& space, const Vector& x) {
    require(x.size() == space.dim, "polytope_norm: dimension mismatch");
    return (space.directions.transpose() * x).cwiseAbs().maxCoeff();
}

PolytopeSpace polytope_space(const JohnResult& john) {
    PolytopeSpace s;
    s.dim = john.decomposition.dim;
    s.directions = john.contact_points;
    return s;
}

PolytopeSpace linf_space(Index n) {
    PolytopeSpace s;
    s.dim = n;
    s.directions = Matrix::Identity(n, n);
    return s;
}

Vector nnls(const Matrix& a, const Vector& b, double tol) {
    const Index k = a.cols();
    Vector x = Vector::Zero(k);
    std::vector<bool> passive(static_cast<std::size_t>(k), false);
    Vector w = a.transpose() * (b - a * x);
    const double scale = std::max(1.0, b.norm());

    for (int outer = 0; outer < 4 * static_cast<int>(k) + 16; ++outer) {
        Index best = -1;
        double best_w = tol * scale;
        for (Index j = 0; j < k; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < 8 * static_cast<int>(k) + 16; ++inner) {
            IndexSet p;
            for (Index j = 0; j < k; ++j)
                if (passive[static_cast<std::size_t>(j)]) p.push_back(j);
            Matrix ap = select_columns(a, p);
            Vector z_p = Eigen::CompleteOrthogonalDecomposition<Matrix>(ap).solve(b);
            Vector z = Vector::Zero(k);
            for (std::size_t i = 0; i < p.size(); ++i) z[p[i]] = z_p[static_cast<Index>(i)];

            if (z_p.minCoeff() > 0.0) {
                x = z;
                break;
            }
            // step toward z until the first passive coordinate hits zero
            double alpha = kInf;
            for (Index j : p) {
                if (z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            }
            x += alpha * (z - x);
            for (Index j : p) {
                if (x[j] <= tol * scale) {
                    x[j] = 0.0;
                    passive[static_cast<std::size_t>(j)] = false;
                }
            }
        }
        w = a.transpose() * (b - a * x);
    }
    return x;
}

}  // namespace jd
