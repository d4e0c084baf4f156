#include "jd/cube.hpp"

#include "jd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jd {

namespace {

double space_norm(const PolytopeSpace& space, const Vector& x) {
    return (space.directions.transpose() * x).cwiseAbs().maxCoeff();
}

MonteCarloEstimate from_samples(double sum, double sum_sq, long count) {
    MonteCarloEstimate est;
    est.trials = count;
    est.mean = sum / static_cast<double>(count);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(count) - est.mean * est.mean);
    est.stderr_ = std::sqrt(var / static_cast<double>(count));
    return est;
}

// Norming functional of x: the direction with the largest |<u_i, x>|,
// signed so x*(x) = |x|_X; ties go to the lowest index.
std::pair<Index, double> norming_direction(const PolytopeSpace& space, const Vector& x) {
    Vector vals = space.directions.transpose() * x;
    Index best = 0;
    double best_abs = std::abs(vals[0]);
    for (Index i = 1; i < vals.size(); ++i) {
        if (std::abs(vals[i]) > best_abs + 1e-15) {
            best_abs = std::abs(vals[i]);
            best = i;
        }
    }
    return {best, vals[best] >= 0.0 ? 1.0 : -1.0};
}

}  // namespace

MonteCarloEstimate rademacher_average(const Matrix& vectors, const PolytopeSpace& space,
                                      long trials, std::uint64_t seed,
                                      Index exact_limit) {
    const Index m = vectors.cols();
    require(m >= 1, "rademacher_average: empty system");
    require(vectors.rows() == space.dim, "rademacher_average: dimension mismatch");
    if (m <= exact_limit) {
        // enumerate half the cube; the norm is sign-symmetric
        const std::uint64_t half = 1ULL << (m - 1);
        double sum = 0.0;
        Vector x(space.dim);
        for (std::uint64_t bits = 0; bits < half; ++bits) {
            x = vectors.col(0);
            for (Index j = 1; j < m; ++j) {
                const double sign = ((bits >> (j - 1)) & 1ULL) ? -1.0 : 1.0;
                x += sign * vectors.col(j);
            }
            sum += space_norm(space, x);
        }
        MonteCarloEstimate est;
        est.mean = sum / static_cast<double>(half);
        est.exact = true;
        est.trials = static_cast<long>(half);
        return est;
    }
    return rademacher_monte_carlo(vectors, space, trials, seed);
}

MonteCarloEstimate rademacher_monte_carlo(const Matrix& vectors,
                                          const PolytopeSpace& space, long trials,
                                          std::uint64_t seed) {
    require(trials >= 100, "rademacher_monte_carlo: need at least 100 trials");
    const Index m = vectors.cols();
    double sum = 0.0, sum_sq = 0.0;
    Vector x(space.dim);
    for (long t = 0; t < trials; ++t) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(t));
        x.setZero();
        for (Index j = 0; j < m; ++j) x += rng.sign() * vectors.col(j);
        const double v = space_norm(space, x);
        sum += v;
        sum_sq += v * v;
    }
    return from_samples(sum, sum_sq, trials);
}

double omega(const Matrix& vectors, const PolytopeSpace& space) {
    require(vectors.rows() == space.dim, "omega: dimension mismatch");
    if (vectors.cols() == 0) return 0.0;
    return (space.directions.transpose() * vectors).cwiseAbs().rowwise().sum().maxCoeff();
}

MonteCarloEstimate ell_norm(const Matrix& u, const PolytopeSpace& space, long trials,
                            std::uint64_t seed) {
    require(trials >= 1000, "ell_norm: need at least 1000 trials");
    require(u.rows() == space.dim, "ell_norm: dimension mismatch");
    double sum = 0.0, sum_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(t));
        Vector g = gaussian_vector(rng, u.cols());
        const double v = space_norm(space, u * g);
        sum += v * v;
        sum_sq += v * v * v * v;
    }
    MonteCarloEstimate sq = from_samples(sum, sum_sq, trials);
    MonteCarloEstimate est;
    est.trials = trials;
    est.mean = std::sqrt(sq.mean);
    // delta method for sqrt of the mean square
    est.stderr_ = est.mean > 0.0 ? sq.stderr_ / (2.0 * est.mean) : 0.0;
    return est;
}

TalagrandResult talagrand_select(const Matrix& vectors, const PolytopeSpace& space,
                                 std::uint64_t seed, Index attempts, double c_tal) {
    const Index m = vectors.cols();
    require(m >= 1, "talagrand_select: empty system");
    for (Index j = 0; j < m; ++j) {
        require(space_norm(space, vectors.col(j)) >= 1.0 - 1e-9,
                "talagrand_select: need |x_j|_X >= 1",
                space_norm(space, vectors.col(j)));
    }

    // x_i^*(x_j) table
    Matrix star(m, m);
    for (Index i = 0; i < m; ++i) {
        auto [dir, sgn] = norming_direction(space, vectors.col(i));
        star.row(i) = sgn * (space.directions.col(dir).transpose() * vectors);
    }

    TalagrandResult out;
    out.omega_value = omega(vectors, space);
    out.size_target = std::max<Index>(
        1, static_cast<Index>(std::floor(c_tal * static_cast<double>(m) /
                                         std::max(out.omega_value, 1e-12))));

    auto admissible = [&](const IndexSet& sigma, Index cand) {
        // the 1/2 domination condition for sigma + cand
        double cand_row = 0.0;
        for (Index i : sigma) {
            double row = std::abs(star(i, cand));
            for (Index j : sigma) {
                if (j != i) row += std::abs(star(i, j));
            }
            if (row > 0.5 + 1e-12) return false;
            cand_row += std::abs(star(cand, i));
        }
        return cand_row <= 0.5 + 1e-12;
    };

    for (Index a = 0; a < std::max<Index>(attempts, 1); ++a) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(a));
        IndexSet order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), Index{0});
        if (a > 0) shuffle(rng, order);

        IndexSet sigma;
        for (Index j : order) {
            if (admissible(sigma, j)) sigma.push_back(j);
        }
        if (sigma.size() > out.sigma.size()) out.sigma = std::move(sigma);
    }
    std::sort(out.sigma.begin(), out.sigma.end());

    double margin = 0.0;
    for (Index i : out.sigma) {
        double row = 0.0;
        for (Index j : out.sigma) {
            if (j != i) row += std::abs(star(i, j));
        }
        margin = std::max(margin, row);
    }
    out.domination_margin = margin;
    return out;
}

CubeEmbeddingResult gt_embedding(const JohnResult& john, const Matrix& p,
                                 const ExtractionParams& params, long trials,
                                 std::uint64_t seed) {
    const Index n = john.decomposition.dim;
    PolytopeSpace space = polytope_space(john);
    const double rank = p.trace();
    const Index k = static_cast<Index>(std::llround(rank));
    require(k >= 2, "gt_embedding: need rank P >= 2");

    const Index kappa = std::max<Index>(1, k / 2);
    DRResult dr = dr_select(john, p, std::min<Index>(kappa, k - 1), params);
    const Index k_prime = static_cast<Index>(dr.contact_indices.size());
    require(k_prime >= 1, "gt_embedding: empty DR selection");

    // scale so <x_j, z_j> = |P x_j|_2 / min |P x_j|_2 >= 1
    double min_proj = kInf;
    for (Index j : dr.contact_indices) {
        min_proj = std::min(min_proj, (p * john.contact_points.col(j)).norm());
    }
    require(min_proj > 0.0, "gt_embedding: projection annihilates a selected contact");

    Matrix z(n, k_prime);
    for (Index i = 0; i < k_prime; ++i) {
        const Vector contact =
            john.contact_points.col(dr.contact_indices[static_cast<std::size_t>(i)]);
        Vector proj = p * contact;
        z.col(i) = proj / (proj.norm() * min_proj);
    }

    TalagrandResult tal = talagrand_select(z, space, seed, 8, 0.1);

    CubeEmbeddingResult out;
    out.domination_margin = tal.domination_margin;
    out.m_dim = static_cast<Index>(tal.sigma.size());
    out.sigma.reserve(tal.sigma.size());
    Matrix z_sel(n, out.m_dim);
    Matrix contacts_sel(n, out.m_dim);
    for (Index i = 0; i < out.m_dim; ++i) {
        const Index local = tal.sigma[static_cast<std::size_t>(i)];
        out.sigma.push_back(dr.contact_indices[static_cast<std::size_t>(local)]);
        z_sel.col(i) = z.col(local);
        contacts_sel.col(i) = john.contact_points.col(out.sigma.back());
    }
    out.z_vectors = z_sel;

    // measured certificate on span(z_j): Gaussian coefficients plus sign
    // vertices; the lower direction must hold with zero violations
    out.iso_constant = 1.0;
    out.lower_violations = 0.0;
    out.upper_margin = 0.0;
    MonteCarloEstimate m_est = rademacher_average(z_sel, space, std::max(trials, 100L), seed + 1);
    out.m_estimate = m_est;
    out.omega = omega(z_sel, space);

    const long samples = std::max(trials, 100L);
    for (long t = 0; t < samples; ++t) {
        Pcg32 rng(seed, 0x5eedULL + static_cast<std::uint64_t>(t));
        Vector a(out.m_dim);
        if (t % 4 == 0) {
            for (Index i = 0; i < out.m_dim; ++i) a[i] = rng.sign();
        } else {
            a = gaussian_vector(rng, out.m_dim);
        }
        const double a_max = a.cwiseAbs().maxCoeff();
        if (a_max <= 0.0) continue;
        Vector x = z_sel * a;
        const double x_norm = space_norm(space, x);
        double inner_max = 0.0;
        for (Index i = 0; i < out.m_dim; ++i) {
            inner_max = std::max(inner_max, std::abs(contacts_sel.col(i).dot(x)));
        }
        // first inequality: max_j <x, x_j> <= |x|_X (contacts are norming)
        require(inner_max <= x_norm + 1e-9, "gt_embedding: norming inequality failed");
        if (inner_max > 0.0) {
            out.iso_constant = std::max(out.iso_constant, x_norm / inner_max);
        }
        out.lower_violations =
            std::max(out.lower_violations, 0.5 * a_max - x_norm);
        if (m_est.mean > 0.0) {
            out.upper_margin = std::max(out.upper_margin, x_norm / (m_est.mean * a_max));
        }
    }

    MonteCarloEstimate ell = ell_norm(p, space, std::max(trials, 1000L), seed + 2);
    out.ell_p = ell;
    out.benchmark = std::sqrt(static_cast<double>(n) / static_cast<double>(k)) * ell.mean;
    return out;
}

ComplementationReport complementation_check(const CubeEmbeddingResult& result,
                                            const PolytopeSpace& space, long trials,
                                            std::uint64_t seed) {
    const Index n = space.dim;
    Matrix pz = span_projector(result.z_vectors);

    double best = 0.0;
    auto probe = [&](const Vector& x) {
        const double denom = space_norm(space, x);
        if (denom <= 0.0) return;
        best = std::max(best, space_norm(space, pz * x) / denom);
    };
    for (Index i = 0; i < space.directions.cols(); ++i) probe(space.directions.col(i));
    for (Index i = 0; i < n; ++i) probe(Vector::Unit(n, i));
    for (long t = 0; t < std::max(trials, 100L); ++t) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(t));
        probe(gaussian_vector(rng, n));
    }

    ComplementationReport report;
    report.pz_norm_estimate = best;
    report.benchmark = result.benchmark;
    report.iso_constant = result.iso_constant;
    return report;
}

}  // namespace jd
