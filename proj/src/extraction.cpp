#include "jd/extraction.hpp"

#include "jd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace jd {

namespace {

constexpr double kOpNormSlack = 1e-9;

double binomial_count(Index m, Index k) {
    double c = 1.0;
    for (Index i = 0; i < k; ++i) {
        c *= static_cast<double>(m - i) / static_cast<double>(i + 1);
        if (c > 1e18) return c;
    }
    return c;
}

double subset_sigma_max(const Matrix& system, const IndexSet& idx) {
    return sigma_max_estimate(select_columns(system, idx));
}

double subset_sigma_min(const Matrix& system, const IndexSet& idx) {
    return std::sqrt(gram_min_eigenvalue(select_columns(system, idx)));
}

double subset_equivalence(const Matrix& system, const IndexSet& idx) {
    return system_certificate(select_columns(system, idx)).equivalence_K;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TauResult tau_filter(const Decomposition& decomp, const Matrix& t, double delta,
                     bool require_band) {
    require(delta > 0.0 && delta < 1.0, "tau_filter: delta must lie in (0,1)");
    require(t.rows() == decomp.dim && t.cols() == decomp.dim,
            "tau_filter: operator dimension mismatch");
    const Index m = decomp.size();
    const double n = static_cast<double>(decomp.dim);
    Matrix images = t * decomp.vectors;
    const double h = images.squaredNorm();
    require(h > 0.0, "tau_filter: T vanishes on the system");

    // Vectors killed by T cannot be split into any norm band; the
    // counting bound is certified over the surviving subsystem.
    const double zero_cut = 1e-14 * std::sqrt(h);
    Index m_eff = 0;
    for (Index j = 0; j < m; ++j) {
        if (images.col(j).norm() > zero_cut) ++m_eff;
    }
    require(m_eff > 0, "tau_filter: no vector has a nonzero image");

    const double band_ref = std::sqrt(h / static_cast<double>(m_eff));
    if (require_band) {
        for (Index j = 0; j < m; ++j) {
            const double norm = images.col(j).norm();
            if (norm <= zero_cut) continue;
            require(norm >= 0.9 * band_ref * (1.0 - 1e-9) &&
                        norm <= 1.1 * band_ref * (1.0 + 1e-9),
                    "tau_filter: system not split to the 0.9/1.1 norm band", norm);
        }
    }

    TauResult out;
    out.effective_m = m_eff;
    out.threshold = 0.9 * std::sqrt(delta) * std::sqrt(h / n);
    for (Index j = 0; j < m; ++j) {
        if (images.col(j).norm() >= out.threshold * decomp.vectors.col(j).norm()) {
            out.indices.push_back(j);
        }
    }
    out.size_bound_holds =
        static_cast<double>(out.indices.size()) + 1e-9 >=
        (1.0 - delta) * static_cast<double>(m_eff);
    if (require_band && !out.size_bound_holds) {
        throw ValidationError("tau_filter: counting bound |tau| >= (1-delta) m failed");
    }
    return out;
}

KtResult kt_select(const Matrix& system, double lambda, Index attempts,
                   std::uint64_t seed) {
    const Index m = system.cols();
    require(m >= 1, "kt_select: empty system");
    require(lambda >= 1.0 / static_cast<double>(m) - 1e-12 && lambda <= 1.0 + 1e-12,
            "kt_select: lambda outside [1/m, 1]");
    SpectralSummary spec = svd(system);
    require(spec.op_norm <= 1.0 + kOpNormSlack,
            "kt_select: system must be 1-Hilbertian", spec.op_norm);

    const double h = spec.hs_norm * spec.hs_norm;
    KtResult out;
    out.scale_K = 1.0 / (std::sqrt(lambda) + std::sqrt(h / static_cast<double>(m)));
    out.size_target = std::max<Index>(
        1, static_cast<Index>(std::ceil(lambda * static_cast<double>(m) / 4.0 - 1e-9)));

    IndexSet best;
    double best_val = kInf;
    auto consider = [&](const IndexSet& idx, double sigma_max) {
        const double val = out.scale_K * sigma_max;
        // sigma_max is monotone under column removal, so ties resolve to
        // the later (smaller) candidate and the optimum sits at the size
        // target; the tolerance absorbs power-iteration noise
        if (val <= best_val + 1e-12 * std::max(1.0, best_val)) {
            best_val = std::min(val, best_val);
            best = idx;
            out.sigma_max = sigma_max;
        }
    };

    // Greedy column removal from the full system down to the size target.
    IndexSet cur(static_cast<std::size_t>(m));
    std::iota(cur.begin(), cur.end(), Index{0});
    consider(cur, spec.op_norm);
    while (static_cast<Index>(cur.size()) > out.size_target) {
        std::size_t drop = 0;
        double drop_val = kInf;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            IndexSet trial;
            trial.reserve(cur.size() - 1);
            for (std::size_t r = 0; r < cur.size(); ++r) {
                if (r != i) trial.push_back(cur[r]);
            }
            const double s = subset_sigma_max(system, trial);
            if (s < drop_val) {
                drop_val = s;
                drop = i;
            }
        }
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(drop));
        consider(cur, drop_val);
    }

    // Seeded random subsets at the size target.
    IndexSet all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), Index{0});
    for (Index a = 0; a < attempts; ++a) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(a));
        IndexSet pool = all;
        shuffle(rng, pool);
        IndexSet idx(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(out.size_target));
        std::sort(idx.begin(), idx.end());
        consider(idx, subset_sigma_max(system, idx));
    }

    std::sort(best.begin(), best.end());
    out.nu = std::move(best);
    out.achieved = best_val;
    // report the certificate-grade value for the final pick
    out.sigma_max = svd(select_columns(system, out.nu)).op_norm;
    out.achieved = out.scale_K * out.sigma_max;
    return out;
}

BtResult bt_select(const Matrix& system, double alpha, double c1, Index attempts,
                   std::uint64_t seed, double c_bt) {
    const Index m = system.cols();
    require(m >= 1, "bt_select: empty system");
    require(alpha > 0.0 && c1 >= 1.0, "bt_select: need alpha > 0 and c1 >= 1");
    for (Index j = 0; j < m; ++j) {
        require(system.col(j).norm() >= alpha * (1.0 - 1e-9),
                "bt_select: norm floor violated", system.col(j).norm());
    }
    const double big_h = svd(system).op_norm;
    const double floor = alpha / c1;

    BtResult out;
    out.size_target = std::max<Index>(
        1, static_cast<Index>(
               std::ceil(c_bt * (alpha / big_h) * (alpha / big_h) *
                             static_cast<double>(m) -
                         1e-9)));

    for (Index a = 0; a < std::max<Index>(attempts, 1); ++a) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(a));
        IndexSet order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), Index{0});
        shuffle(rng, order);

        IndexSet rho;
        double cur_sigma_min = 0.0;
        for (;;) {
            Index pick = -1;
            double pick_val = -1.0;
            for (Index j : order) {
                if (std::find(rho.begin(), rho.end(), j) != rho.end()) continue;
                IndexSet trial = rho;
                trial.push_back(j);
                const double s = subset_sigma_min(system, trial);
                if (s > pick_val) {
                    pick_val = s;
                    pick = j;
                }
            }
            if (pick < 0 || pick_val < floor * (1.0 - 1e-12)) break;
            rho.push_back(pick);
            cur_sigma_min = pick_val;
        }
        if (rho.size() > out.rho.size() ||
            (rho.size() == out.rho.size() && cur_sigma_min > out.sigma_min)) {
            out.rho = std::move(rho);
            out.sigma_min = cur_sigma_min;
        }
    }
    std::sort(out.rho.begin(), out.rho.end());
    out.sigma_min = out.rho.empty() ? 0.0 : subset_sigma_min(system, out.rho);
    out.besselian = out.sigma_min > 0.0 ? 1.0 / out.sigma_min : kInf;
    out.c1_achieved = out.besselian * alpha;
    out.below_target = static_cast<Index>(out.rho.size()) < out.size_target;
    return out;
}

namespace {

// Shared loop behind extract_main and extract_trace. `tau` holds the
// admissible parent indices (already filtered); every reported index
// stays inside it.
SelectionCertificate run_extraction(const Decomposition& decomp, const Matrix& t,
                                    const ExtractionParams& params,
                                    const IndexSet& tau) {
    const Index n = decomp.dim;
    const Index m = decomp.size();
    const double eps = params.epsilon;
    require(eps > 0.0 && eps < 1.0, "extract: epsilon must lie in (0,1)");
    require(t.rows() == n && t.cols() == n, "extract: operator dimension mismatch");

    SpectralSummary tspec = svd(t);
    require(tspec.op_norm <= 1.0 + kOpNormSlack,
            "extract: operator must have norm at most one (normalize first)",
            tspec.op_norm);
    const double h = tspec.hs_norm * tspec.hs_norm;
    const double delta = params.resolved_delta();

    SelectionCertificate cert;
    cert.h = h;
    cert.size_bound = (1.0 - eps) * h;
    // ceil keeps a fractional bound meaningful: |sigma| >= (1-eps) h is
    // met by a singleton whenever the bound is positive
    cert.target_size = cert.size_bound <= 0.0
                           ? 0
                           : static_cast<Index>(std::ceil(cert.size_bound - 1e-9));
    if (cert.target_size == 0) return cert;

    Matrix images = t * decomp.vectors;  // y_j = T x_j
    std::set<Index> sigma;
    const double alpha = params.band_lo * std::sqrt(delta);

    auto log_round = [&](RoundLog log) {
        log.sigma_size = static_cast<Index>(sigma.size());
        log.remainder = h - static_cast<double>(sigma.size());
        cert.rounds.push_back(log);
    };

    for (Index round = 1;
         static_cast<Index>(sigma.size()) < cert.target_size &&
         round <= params.max_rounds;
         ++round) {
        RoundLog log;
        log.round = round;

        IndexSet sel(sigma.begin(), sigma.end());
        Matrix selected_images = select_columns(images, sel);
        Matrix proj = complement_projector(selected_images, n);

        // the span projector must fix every previously selected image
        double defect = 0.0;
        for (Index j : sel) {
            defect = std::max(defect, (proj * images.col(j)).norm());
        }
        log.projector_defect = defect;

        Matrix proj_images = proj * images;
        IndexSet remaining;
        Vector weights = Vector::Zero(m);
        for (Index j : tau) {
            if (sigma.count(j)) continue;
            const double w = proj_images.col(j).squaredNorm();
            if (w <= 1e-18 * h || proj_images.col(j).norm() <= 1e-9 * images.col(j).norm()) {
                continue;  // annihilated by the projector; cannot re-enter
            }
            remaining.push_back(j);
            weights[j] = w;
        }
        if (remaining.empty()) break;

        // Split the remainder so the projected child norms are nearly
        // equal, with enough children to keep lambda = 4h/M at most 1.
        Vector w_rem(static_cast<Index>(remaining.size()));
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            w_rem[static_cast<Index>(i)] = weights[remaining[i]];
        }
        const Index m_target = std::max<Index>(
            {static_cast<Index>(std::ceil(params.kt_lambda_scale * h)),
             2 * static_cast<Index>(remaining.size()), 8});
        SplitPlan plan = equal_norm_plan(w_rem, m_target, params.band_lo, params.band_hi);
        const Index total =
            std::accumulate(plan.counts.begin(), plan.counts.end(), Index{0});

        Matrix children(n, total);
        Matrix proj_children(n, total);
        IndexSet parent(static_cast<std::size_t>(total));
        {
            Index k = 0;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                const Index j = remaining[i];
                const double root = std::sqrt(static_cast<double>(plan.counts[i]));
                for (Index r = 0; r < plan.counts[i]; ++r, ++k) {
                    children.col(k) = images.col(j) / root;
                    proj_children.col(k) = proj_images.col(j) / root;
                    parent[static_cast<std::size_t>(k)] = j;
                }
            }
        }
        log.split_size = total;

        double lambda = params.kt_lambda_scale * h / static_cast<double>(total);
        lambda = std::min(1.0, std::max(lambda, 1.0 / static_cast<double>(total)));
        KtResult kt = kt_select(children, lambda, params.kt_attempts,
                                mix_seed(params.rng_seed, 2 * static_cast<std::uint64_t>(round)));
        log.kt_size = static_cast<Index>(kt.nu.size());

        // Hilbertian constant of the sqrt(M/h)-scaled pick
        const double scale = std::sqrt(static_cast<double>(total) / h);
        log.kt_constant = scale * kt.sigma_max;

        IndexSet nu_ok;
        for (Index c : kt.nu) {
            if (scale * proj_children.col(c).norm() >= alpha * (1.0 - 1e-9)) {
                nu_ok.push_back(c);
            }
        }
        if (nu_ok.empty()) {
            log.fallback = true;
            log_round(log);
            break;
        }

        Matrix z(n, static_cast<Index>(nu_ok.size()));
        for (std::size_t i = 0; i < nu_ok.size(); ++i) {
            z.col(static_cast<Index>(i)) = scale * proj_children.col(nu_ok[i]);
        }
        BtResult bt = bt_select(z, alpha, params.bt_c1, params.bt_attempts,
                                mix_seed(params.rng_seed, 2 * static_cast<std::uint64_t>(round) + 1),
                                params.c_bt);
        log.bt_size = static_cast<Index>(bt.rho.size());
        log.bt_besselian = bt.besselian;

        // children -> parents; linear independence makes this one-to-one,
        // duplicates are merged defensively
        std::set<Index> rho;
        for (Index r : bt.rho) {
            rho.insert(parent[static_cast<std::size_t>(nu_ok[static_cast<std::size_t>(r)])]);
        }
        if (rho.empty()) {
            log.fallback = true;
            log_round(log);
            break;
        }
        for (Index j : rho) sigma.insert(j);
        log_round(log);
    }

    // Heuristic stall: top up inside tau with the greedy oracle, flagged.
    if (static_cast<Index>(sigma.size()) < cert.target_size) {
        cert.fallback_used = true;
        IndexSet base(sigma.begin(), sigma.end());
        IndexSet candidates;
        for (Index j : tau) {
            if (!sigma.count(j)) candidates.push_back(j);
        }
        IndexSet topped = greedy_extend(images, base, candidates, cert.target_size,
                                        OracleMode::MaximizeSigmaMin);
        sigma = std::set<Index>(topped.begin(), topped.end());
        RoundLog log;
        log.round = static_cast<Index>(cert.rounds.size()) + 1;
        log.fallback = true;
        log_round(log);
    }

    // Deterministic swap polish inside tau; size and round log untouched.
    if (params.polish_passes > 0 && !sigma.empty()) {
        IndexSet cur(sigma.begin(), sigma.end());
        double cur_k = subset_equivalence(images, cur);
        for (Index pass = 0; pass < params.polish_passes; ++pass) {
            bool improved = false;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                for (Index c : tau) {
                    if (std::find(cur.begin(), cur.end(), c) != cur.end()) continue;
                    IndexSet trial = cur;
                    trial[i] = c;
                    std::sort(trial.begin(), trial.end());
                    const double k = subset_equivalence(images, trial);
                    if (k < cur_k * (1.0 - 1e-9)) {
                        cur = std::move(trial);
                        cur_k = k;
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        }
        sigma = std::set<Index>(cur.begin(), cur.end());
    }

    cert.sigma = IndexSet(sigma.begin(), sigma.end());
    if (!cert.sigma.empty()) {
        cert.achieved_equivalence_K = subset_equivalence(images, cert.sigma);
        double ratio = kInf;
        const double denom_scale = std::sqrt(eps) * tspec.hs_norm /
                                   std::sqrt(static_cast<double>(n));
        for (Index j : cert.sigma) {
            const double d = denom_scale * decomp.vectors.col(j).norm();
            if (d > 0.0) ratio = std::min(ratio, images.col(j).norm() / d);
        }
        cert.per_vector_norm_ratio = ratio;
    }
    return cert;
}

}  // namespace

SelectionCertificate extract_main(const Decomposition& decomp, const Matrix& t,
                                  const ExtractionParams& params) {
    if (t.squaredNorm() <= 1e-24) {
        return run_extraction(decomp, t, params, {});  // empty certificate
    }
    TauResult tau = tau_filter(decomp, t, params.resolved_delta(), false);
    return run_extraction(decomp, t, params, tau.indices);
}

SelectionCertificate extract_count(const Decomposition& decomp, const Matrix& t,
                                   Index kappa, const ExtractionParams& params) {
    require(kappa >= 1, "extract_count: kappa must be positive");
    const double h = t.squaredNorm();
    require(static_cast<double>(kappa) < h, "extract_count: kappa must be below |T|_HS^2");

    ExtractionParams p = params;
    p.epsilon = 1.0 - static_cast<double>(kappa) / h;
    SelectionCertificate cert = extract_main(decomp, t, p);

    Matrix images = t * decomp.vectors;
    while (static_cast<Index>(cert.sigma.size()) > kappa) {
        std::size_t drop = 0;
        double best = kInf;
        for (std::size_t i = 0; i < cert.sigma.size(); ++i) {
            IndexSet trial;
            trial.reserve(cert.sigma.size() - 1);
            for (std::size_t r = 0; r < cert.sigma.size(); ++r) {
                if (r != i) trial.push_back(cert.sigma[r]);
            }
            const double k = subset_equivalence(images, trial);
            if (k < best) {
                best = k;
                drop = i;
            }
        }
        cert.sigma.erase(cert.sigma.begin() + static_cast<std::ptrdiff_t>(drop));
    }

    cert.target_size = kappa;
    cert.size_bound = static_cast<double>(kappa);
    if (!cert.sigma.empty()) {
        cert.achieved_equivalence_K = subset_equivalence(images, cert.sigma);
        double ratio = kInf;
        const double denom_scale =
            std::sqrt((h - static_cast<double>(kappa)) / static_cast<double>(decomp.dim));
        for (Index j : cert.sigma) {
            const double d = denom_scale * decomp.vectors.col(j).norm();
            if (d > 0.0) {
                ratio = std::min(ratio, images.col(j).norm() / d);
            }
        }
        cert.per_vector_norm_ratio = ratio;
    }
    return cert;
}

SelectionCertificate extract_trace(const Decomposition& decomp, const Matrix& t,
                                   const ExtractionParams& params) {
    require(t.rows() == decomp.dim && t.cols() == decomp.dim,
            "extract_trace: operator dimension mismatch");
    const double trace = t.trace();
    if (std::abs(trace) <= 1e-12 * (1.0 + t.norm())) {
        SelectionCertificate cert = extract_main(decomp, t, params);
        cert.trace_fallback = true;
        return cert;
    }

    const double n = static_cast<double>(decomp.dim);
    const double cut = (params.epsilon / 5.0) * std::abs(trace) / n;
    Matrix images = t * decomp.vectors;
    IndexSet tau_prime;
    for (Index j = 0; j < decomp.size(); ++j) {
        const double scalar = std::abs(decomp.vectors.col(j).dot(images.col(j)));
        if (scalar >= cut * decomp.vectors.col(j).squaredNorm()) {
            tau_prime.push_back(j);
        }
    }
    SelectionCertificate cert = run_extraction(decomp, t, params, tau_prime);

    double ratio = kInf;
    for (Index j : cert.sigma) {
        const double scalar = std::abs(decomp.vectors.col(j).dot(images.col(j)));
        const double denom = (std::abs(trace) / n) * decomp.vectors.col(j).squaredNorm();
        ratio = std::min(ratio, scalar / denom);
    }
    if (!cert.sigma.empty()) cert.scalar_ratio = ratio;
    return cert;
}

SelectionCertificate restricted_invertibility(const Matrix& t, double epsilon,
                                              const ExtractionParams& params) {
    require(t.rows() == t.cols(), "restricted_invertibility: operator must be square");
    Decomposition coords = validate(Matrix::Identity(t.rows(), t.rows()), 1e-12);
    ExtractionParams p = params;
    p.epsilon = epsilon;
    return extract_main(coords, t, p);
}

IndexSet near_orthogonal_select(const Matrix& system, double epsilon,
                                std::uint64_t seed, Index attempts) {
    const Index m = system.cols();
    require(m >= 1, "near_orthogonal_select: empty system");
    require(epsilon > 0.0, "near_orthogonal_select: epsilon must be positive");
    for (Index j = 0; j < m; ++j) {
        require(std::abs(system.col(j).norm() - 1.0) <= 1e-9,
                "near_orthogonal_select: vectors must be unit norm",
                system.col(j).norm());
    }
    Matrix gram = system.transpose() * system;

    auto off_norm = [&](const IndexSet& idx) {
        const Index k = static_cast<Index>(idx.size());
        Matrix g(k, k);
        for (Index a = 0; a < k; ++a)
            for (Index b = 0; b < k; ++b)
                g(a, b) = gram(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
        g -= Matrix::Identity(k, k);
        EigResult eig = sym_eig(g, 1e-9);
        return std::max(std::abs(eig.eigenvalues[0]), std::abs(eig.eigenvalues[k - 1]));
    };

    IndexSet best;
    for (Index a = 0; a < std::max<Index>(attempts, 1); ++a) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(a));
        IndexSet order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), Index{0});
        shuffle(rng, order);

        IndexSet sigma;
        for (;;) {
            Index pick = -1;
            double pick_val = kInf;
            for (Index j : order) {
                if (std::find(sigma.begin(), sigma.end(), j) != sigma.end()) continue;
                IndexSet trial = sigma;
                trial.push_back(j);
                const double v = off_norm(trial);
                if (v < pick_val) {
                    pick_val = v;
                    pick = j;
                }
            }
            if (pick < 0 || pick_val >= epsilon) break;
            sigma.push_back(pick);
        }
        if (sigma.size() > best.size()) best = std::move(sigma);
    }
    std::sort(best.begin(), best.end());
    return best;
}

IndexSet greedy_extend(const Matrix& system, IndexSet base, IndexSet candidates,
                       Index k, OracleMode mode) {
    while (static_cast<Index>(base.size()) < k && !candidates.empty()) {
        std::size_t pick = 0;
        double pick_val = (mode == OracleMode::MaximizeSigmaMin) ? -1.0 : kInf;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            IndexSet trial = base;
            trial.push_back(candidates[i]);
            if (mode == OracleMode::MaximizeSigmaMin) {
                const double s = subset_sigma_min(system, trial);
                if (s > pick_val) {
                    pick_val = s;
                    pick = i;
                }
            } else {
                const double c = subset_equivalence(system, trial);
                if (c < pick_val) {
                    pick_val = c;
                    pick = i;
                }
            }
        }
        base.push_back(candidates[pick]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(base.begin(), base.end());
    return base;
}

OracleResult greedy_oracle(const Matrix& system, Index k, OracleMode mode,
                           long exhaustive_limit) {
    const Index m = system.cols();
    require(k >= 1 && k <= m, "greedy_oracle: need 1 <= k <= m");

    OracleResult out;
    if (binomial_count(m, k) <= static_cast<double>(exhaustive_limit)) {
        out.exhaustive = true;
        IndexSet idx(static_cast<std::size_t>(k));
        std::iota(idx.begin(), idx.end(), Index{0});
        IndexSet best;
        double best_val = (mode == OracleMode::MaximizeSigmaMin) ? -1.0 : kInf;
        for (;;) {
            const double val = (mode == OracleMode::MaximizeSigmaMin)
                                   ? subset_sigma_min(system, idx)
                                   : subset_equivalence(system, idx);
            const bool better = (mode == OracleMode::MaximizeSigmaMin) ? val > best_val
                                                                       : val < best_val;
            if (better) {
                best_val = val;
                best = idx;
            }
            // next combination
            Index i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (Index r = i + 1; r < k; ++r) {
                idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r - 1)] + 1;
            }
        }
        out.indices = std::move(best);
    } else {
        IndexSet candidates(static_cast<std::size_t>(m));
        std::iota(candidates.begin(), candidates.end(), Index{0});
        out.indices = greedy_extend(system, {}, candidates, k, mode);
    }
    out.certificate = system_certificate(select_columns(system, out.indices));
    return out;
}

}  // namespace jd
