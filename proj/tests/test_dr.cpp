#include "jd/dvoretzky_rogers.hpp"

#include "jd/linalg.hpp"
#include "jd/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace jd;
using testsupport::max_abs;

namespace {

ExtractionParams seeded(std::uint64_t seed) {
    ExtractionParams p;
    p.rng_seed = seed;
    return p;
}

JohnResult linf_john(Index n) { return john_decomposition(Matrix::Identity(n, n), 1e-8); }

Matrix coordinate_projection(Index n, Index k) {
    Matrix p = Matrix::Zero(n, n);
    for (Index i = 0; i < k; ++i) p(i, i) = 1.0;
    return p;
}

}  // namespace

TEST_CASE("dr_select on l_inf with a coordinate projection") {
    const Index n = 6, k = 4, kappa = 2;
    JohnResult john = linf_john(n);
    DRResult dr = dr_select(john, coordinate_projection(n, k), kappa, seeded(1));
    REQUIRE(dr.contact_indices.size() == kappa);
    for (Index j : dr.contact_indices) CHECK(j < k);
    // z_j are coordinate vectors with X-norm one
    for (Index i = 0; i < dr.z_vectors.cols(); ++i) {
        CHECK(dr.z_vectors.col(i).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    }
    CHECK(dr.x_norm_floor == doctest::Approx(1.0));
    CHECK(dr.x_norm_floor >=
          std::sqrt(static_cast<double>(k - kappa) / static_cast<double>(n)));
    CHECK(dr.equivalence_K == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dr_select duality inequality on random polytopes") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Index n = 6;
        JohnResult john =
            john_decomposition(testsupport::random_point_set(seed, n, 24), 1e-6);
        Matrix p = testsupport::random_projection(seed + 40, n, 3);
        DRResult dr = dr_select(john, p, 2, seeded(seed));
        CHECK(dr.fitted_c > 0.0);
        CHECK(dr.duality_margin >= -1e-10);
        // per-index re-check: |z_j|_X >= |P x_j|_2
        PolytopeSpace space = polytope_space(john);
        for (Index j : dr.contact_indices) {
            Vector pu = p * john.contact_points.col(j);
            CHECK(polytope_norm(space, Vector(pu / pu.norm())) >= pu.norm() - 1e-10);
        }
    }
}

TEST_CASE("dr_select with the identity reduces to contact selection") {
    const Index n = 6;
    JohnResult john = john_decomposition(testsupport::random_point_set(7, n, 24), 1e-6);
    DRResult dr = dr_select(john, Matrix::Identity(n, n), n / 2, seeded(7));
    SelectionCertificate cs = contact_select(john, 0.5, seeded(7));
    // same machinery: both stay inside the contact set with sound constants
    CHECK(dr.contact_indices.size() == n / 2);
    CHECK(static_cast<double>(cs.sigma.size()) >= 0.5 * static_cast<double>(n));
    for (Index i = 0; i < dr.z_vectors.cols(); ++i) {
        CHECK(dr.z_vectors.col(i).norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("dr_select validates the projection input") {
    JohnResult john = linf_john(4);
    Matrix not_proj = 0.5 * Matrix::Identity(4, 4);
    CHECK_THROWS_AS(dr_select(john, not_proj, 1, seeded(1)), ValidationError);
    CHECK_THROWS_AS(dr_select(john, coordinate_projection(4, 2), 2, seeded(1)),
                    ValidationError);  // kappa must stay below rank
}

TEST_CASE("dr_classical on l_inf coordinate subspaces") {
    const Index n = 8, k = 4;
    JohnResult john = linf_john(n);
    Matrix basis = Matrix::Identity(n, n).leftCols(k);
    Matrix z = dr_classical(john, basis, k);
    PolytopeSpace space = polytope_space(john);
    CHECK(max_abs(z.transpose() * z - Matrix::Identity(k, k)) < 1e-10);
    for (Index j = 0; j < k; ++j) {
        CHECK(polytope_norm(space, z.col(j)) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("dr_classical floors on a rotated ONB polytope") {
    const Index n = 5;
    Matrix q = testsupport::random_orthogonal(3, n);
    JohnResult john = john_decomposition(q, 1e-8);
    Matrix z = dr_classical(john, Matrix::Identity(n, n), n);
    PolytopeSpace space = polytope_space(john);
    for (Index j = 0; j < n; ++j) {
        const double floor =
            std::sqrt(static_cast<double>(n - j) / static_cast<double>(n));
        CHECK(polytope_norm(space, z.col(j)) >= floor - 1e-9);
    }
    CHECK(max_abs(z.transpose() * z - Matrix::Identity(n, n)) < 1e-10);
}

TEST_CASE("dr_classical base case kappa = 1") {
    const Index n = 6, k = 3;
    JohnResult john = john_decomposition(testsupport::random_point_set(9, n, 20), 1e-6);
    Matrix basis = testsupport::random_projection(11, n, k).leftCols(n);
    // build an orthonormal basis of a random k-dimensional subspace
    Pcg32 rng(12, 1);
    Matrix g = gaussian_matrix(rng, n, k);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, k);
    Matrix z = dr_classical(john, q, 1);
    CHECK(z.cols() == 1);
    CHECK(z.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(polytope_norm(polytope_space(john), z.col(0)) >=
          std::sqrt(static_cast<double>(k) / static_cast<double>(n)) - 1e-9);
}

TEST_CASE("contact_select on a signed ONB takes everything") {
    JohnResult john = linf_john(5);
    SelectionCertificate cert = contact_select(john, 0.5, seeded(2));
    CHECK(cert.sigma.size() == 5);
    CHECK(cert.achieved_equivalence_K == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("contact_select on the square polytope") {
    Matrix pts(2, 2);
    pts << 1, 1, 1, -1;
    JohnResult john = john_decomposition(pts, 1e-7);
    SelectionCertificate cert = contact_select(john, 0.5, seeded(3));
    CHECK(static_cast<double>(cert.sigma.size()) >= 0.5 * 2.0);
    // exhaustive n = 2 check: every single contact is a valid selection
    PolytopeSpace space = polytope_space(john);
    for (Index j : cert.sigma) {
        CHECK(john.contact_points.col(j).norm() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(polytope_norm(space, Vector(john.contact_points.col(j))) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("contact_select keeps all three norms equal to one on random polytopes") {
    const Index n = 8;
    JohnResult john = john_decomposition(testsupport::random_point_set(13, n, 30), 1e-6);
    SelectionCertificate cert = contact_select(john, 0.5, seeded(13));
    CHECK(static_cast<double>(cert.sigma.size()) >= 4.0);
    PolytopeSpace space = polytope_space(john);
    for (Index j : cert.sigma) {
        CHECK(john.contact_points.col(j).norm() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(polytope_norm(space, Vector(john.contact_points.col(j))) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
    SystemCertificate re = system_certificate(
        select_columns(john.contact_points, cert.sigma));
    CHECK(re.equivalence_K == doctest::Approx(cert.achieved_equivalence_K).epsilon(1e-9));
}

TEST_CASE("selfadjoint_variant is dr-style for PSD operators") {
    const Index n = 5;
    JohnResult john = linf_john(n);
    Matrix p = coordinate_projection(n, 3);
    DRResult via_abs = selfadjoint_variant(john, p, 2, seeded(4));
    DRResult direct = dr_select(john, p, 2, seeded(4));
    CHECK(via_abs.contact_indices == direct.contact_indices);
    CHECK(max_abs(via_abs.z_vectors - direct.z_vectors) < 1e-9);
}

TEST_CASE("selfadjoint_variant of a rotation normalizes the contacts") {
    const Index n = 4;
    JohnResult john = john_decomposition(testsupport::random_point_set(15, n, 16), 1e-6);
    Matrix rot = testsupport::random_orthogonal(16, n);
    DRResult dr = selfadjoint_variant(john, rot, 2, seeded(5));
    // |T| = id, so z_j is the contact itself
    for (std::size_t i = 0; i < dr.contact_indices.size(); ++i) {
        CHECK(max_abs(dr.z_vectors.col(static_cast<Index>(i)) -
                      john.contact_points.col(dr.contact_indices[i])) < 1e-9);
    }
}

TEST_CASE("selfadjoint_variant chain inequalities on random contractions") {
    const Index n = 6;
    JohnResult john = john_decomposition(testsupport::random_point_set(17, n, 24), 1e-6);
    Matrix t = testsupport::random_contraction(18, n);
    Matrix t_abs = psd_sqrt(t.transpose() * t);
    Matrix t_half = psd_sqrt(t_abs);
    const double h = t.squaredNorm();
    const Index kappa = static_cast<Index>(h > 2.0 ? 2 : 1);
    DRResult dr = selfadjoint_variant(john, t, kappa, seeded(6));
    PolytopeSpace space = polytope_space(john);
    for (Index j : dr.contact_indices) {
        const Vector u = john.contact_points.col(j);
        const double lhs = polytope_norm(space, Vector(t_abs * u));
        const double mid = (t_half * u).squaredNorm();
        const double rhs = (t * u).squaredNorm();
        CHECK(lhs >= mid - 1e-10);
        CHECK(mid >= rhs - 1e-10);
    }
}

TEST_CASE("walsh_counterexample reproduces the flat norms") {
    WalshReport one = walsh_counterexample(1);
    CHECK(one.n == 2);
    for (Index j = 0; j < 2; ++j) {
        CHECK(one.z_norms_x[j] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }

    WalshReport three = walsh_counterexample(3);
    CHECK(three.n == 8);
    CHECK(three.max_deviation <= 1e-12);
    CHECK(three.expected == doctest::Approx(1.0 / std::sqrt(8.0)));

    for (int m = 0; m <= 6; ++m) {
        WalshReport r = walsh_counterexample(m);
        CHECK(r.orthogonality_residual <= 1e-12 * static_cast<double>(r.n));
    }
}

TEST_CASE("sharpness_projection at full rank is the identity") {
    SharpnessReport r = sharpness_projection(8, 8);
    CHECK(max_abs(r.projection - Matrix::Identity(8, 8)) < 1e-12);
    CHECK(r.max_inf_norm == doctest::Approx(1.0));
    CHECK(r.bound == doctest::Approx(1.0));
}

TEST_CASE("sharpness_projection n=8 k=4 hits the stated values") {
    SharpnessReport r = sharpness_projection(8, 4);
    for (Index j = 0; j < 8; ++j) {
        CHECK(r.col_norms_2[j] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
    CHECK(r.max_inf_norm <= 0.5 + 1e-12);
    CHECK(r.projector_residual <= 1e-10);
}

TEST_CASE("sharpness_projection projector property across shapes") {
    for (Index k = 1; k <= 8; ++k) {
        SharpnessReport r = sharpness_projection(8, k);
        CHECK(r.projector_residual <= 1e-10);
        CHECK(r.max_inf_norm <= r.bound + 1e-10);
    }
    CHECK_THROWS_AS(sharpness_projection(6, 3), ValidationError);
}
