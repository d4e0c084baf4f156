#include "jd/decomposition.hpp"

#include "jd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jd {

double default_validation_tol(Index dim) {
    return 1e-8 * std::sqrt(static_cast<double>(std::max<Index>(dim, 1)));
}

Decomposition validate(const Matrix& vectors, double tol) {
    require(vectors.rows() >= 1 && vectors.cols() >= 1, "validate: empty system");
    require_finite(vectors, "validate");
    const Index n = vectors.rows();
    for (Index j = 0; j < vectors.cols(); ++j) {
        require(vectors.col(j).norm() > 0.0, "validate: zero vector in system");
    }
    const double residual =
        (vectors * vectors.transpose() - Matrix::Identity(n, n)).norm();
    if (residual > tol) {
        throw ValidationError("validate: frame operator is not the identity", residual);
    }
    Decomposition d;
    d.dim = n;
    d.vectors = vectors;
    d.residual = residual;
    return d;
}

Decomposition split(const Decomposition& decomp, const SplitPlan& plan) {
    require(plan.counts.size() == static_cast<std::size_t>(decomp.size()),
            "split: plan must cover every index");
    Index total = 0;
    for (Index c : plan.counts) {
        require(c >= 1, "split: zero count");
        total += c;
    }
    Decomposition out;
    out.dim = decomp.dim;
    out.vectors = Matrix(decomp.dim, total);
    out.parent_map = IndexSet();
    out.parent_map->reserve(static_cast<std::size_t>(total));
    Index k = 0;
    for (Index j = 0; j < decomp.size(); ++j) {
        const Index c = plan.counts[static_cast<std::size_t>(j)];
        const Vector child = decomp.vectors.col(j) / std::sqrt(static_cast<double>(c));
        for (Index r = 0; r < c; ++r, ++k) {
            out.vectors.col(k) = child;
            out.parent_map->push_back(j);
        }
    }
    out.residual = decomp.residual;
    return out;
}

namespace {

bool band_ok(const Vector& weights_sq, const std::vector<Index>& counts,
             double band_lo, double band_hi) {
    const Index m = weights_sq.size();
    const double h = weights_sq.sum();
    const double total =
        static_cast<double>(std::accumulate(counts.begin(), counts.end(), Index{0}));
    const double ref = h / total;
    const double lo2 = band_lo * band_lo * ref;
    const double hi2 = band_hi * band_hi * ref;
    for (Index j = 0; j < m; ++j) {
        if (weights_sq[j] <= 0.0) continue;  // unsplittable, exempt
        const double child = weights_sq[j] / static_cast<double>(counts[static_cast<std::size_t>(j)]);
        if (child < lo2 * (1.0 - 1e-12) || child > hi2 * (1.0 + 1e-12)) return false;
    }
    return true;
}

}  // namespace

SplitPlan equal_norm_plan(const Vector& weights_sq, Index target_m,
                          double band_lo, double band_hi) {
    const Index m = weights_sq.size();
    require(m >= 1, "equal_norm_plan: empty weights");
    require(band_lo > 0.0 && band_lo < band_hi, "equal_norm_plan: bad band");
    const double h = weights_sq.sum();
    require(h > 0.0, "equal_norm_plan: all weights zero");

    Index m_try = std::max(target_m, m);
    SplitPlan plan;
    for (int attempt = 0; attempt < 64; ++attempt) {
        plan.counts.assign(static_cast<std::size_t>(m), 1);
        for (Index j = 0; j < m; ++j) {
            const double ideal = static_cast<double>(m_try) * weights_sq[j] / h;
            plan.counts[static_cast<std::size_t>(j)] =
                std::max<Index>(1, static_cast<Index>(std::llround(ideal)));
        }
        // Repair: push the largest child weight down (raising the total,
        // which also lowers the band floor for small unsplit vectors).
        for (long iter = 0; iter < 200000; ++iter) {
            if (band_ok(weights_sq, plan.counts, band_lo, band_hi)) return plan;
            Index argmax = 0;
            double best = -1.0;
            for (Index j = 0; j < m; ++j) {
                const double child =
                    weights_sq[j] / static_cast<double>(plan.counts[static_cast<std::size_t>(j)]);
                if (child > best) {
                    best = child;
                    argmax = j;
                }
            }
            ++plan.counts[static_cast<std::size_t>(argmax)];
        }
        m_try = m_try * 2 + m;
    }
    throw ValidationError("equal_norm_plan: no feasible plan found");
}

Decomposition equal_norm_split(const Decomposition& decomp, Index target_m) {
    Vector norms_sq = decomp.vectors.colwise().squaredNorm().transpose();
    SplitPlan plan = equal_norm_plan(norms_sq, std::max(target_m, decomp.size()));
    return split(decomp, plan);
}

Decomposition random_tight_frame(Index n, Index m, std::uint64_t seed) {
    require(n >= 1, "random_tight_frame: dimension must be positive");
    require(m >= n, "random_tight_frame: need m >= n");
    Pcg32 rng(seed, 0xf7a3e);
    Matrix g = gaussian_matrix(rng, n, m);
    Decomposition d = tighten(g).decomposition;
    // Gaussian spans a.s.; re-validate at the strict generator tolerance.
    return validate(d.vectors, 1e-9);
}

TightenResult tighten(const Matrix& vectors) {
    require(vectors.rows() >= 1 && vectors.cols() >= vectors.rows(),
            "tighten: need at least dim spanning vectors");
    require_finite(vectors, "tighten");
    Matrix frame_op = vectors * vectors.transpose();
    EigResult eig = sym_eig(frame_op, 1e-8);
    const Index n = frame_op.rows();
    const double upper = eig.eigenvalues[0];
    const double lower = eig.eigenvalues[n - 1];
    require(upper > 0.0 && lower > 1e-12 * upper,
            "tighten: vectors do not span the space", lower);

    TightenResult out;
    out.frame_lower = lower;
    out.frame_upper = upper;
    out.map = eig.eigenvectors * eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
              eig.eigenvectors.transpose();
    Matrix tightened = out.map * vectors;
    const double res =
        (tightened * tightened.transpose() - Matrix::Identity(n, n)).norm();
    Decomposition d;
    d.dim = n;
    d.vectors = std::move(tightened);
    d.residual = res;
    out.decomposition = std::move(d);
    return out;
}

}  // namespace jd
