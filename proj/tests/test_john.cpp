#include "jd/john.hpp"

#include "jd/linalg.hpp"
#include "jd/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace jd;
using testsupport::max_abs;

TEST_CASE("mvee of the coordinate cross is the unit ball") {
    MveeResult r = mvee(Matrix::Identity(4, 4), 1e-9);
    CHECK(r.converged);
    CHECK(max_abs(r.ellipsoid.shape - Matrix::Identity(4, 4)) < 1e-7);
}

TEST_CASE("mvee of the square's vertices is the sqrt2 ball") {
    Matrix pts(2, 2);
    pts << 1, 1, 1, -1;
    MveeResult r = mvee(pts, 1e-9);
    CHECK(r.converged);
    // symmetry argument: M = id/2 covers both vertices with equality
    CHECK(max_abs(r.ellipsoid.shape - 0.5 * Matrix::Identity(2, 2)) < 1e-7);
}

TEST_CASE("mvee contains all points and touches at least dim of them") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Matrix pts = testsupport::random_point_set(seed, 3, 20);
        MveeResult r = mvee(pts, 1e-8);
        CHECK(r.converged);
        Index contacts = 0;
        for (Index j = 0; j < pts.cols(); ++j) {
            const double q = pts.col(j).dot(r.ellipsoid.shape * pts.col(j));
            CHECK(q <= 1.0 + 1e-7);
            if (q >= 1.0 - 1e-6) ++contacts;
        }
        CHECK(contacts >= 3);
    }
}

TEST_CASE("mvee rejects non-spanning input") {
    Matrix pts(3, 2);
    pts << 1, 0, 0, 1, 0, 0;
    CHECK_THROWS_AS(mvee(pts, 1e-8), ValidationError);
}

TEST_CASE("mvee reports non-convergence under a tiny iteration cap") {
    Matrix pts = testsupport::random_point_set(3, 4, 30);
    MveeResult r = mvee(pts, 1e-12, 2);
    CHECK(!r.converged);
    CHECK(r.gap > 0.0);
}

TEST_CASE("john_decomposition of the coordinate cross") {
    JohnResult r = john_decomposition(Matrix::Identity(3, 3), 1e-8);
    CHECK(r.contact_indices.size() == 3);
    for (Index i = 0; i < r.weights.size(); ++i) {
        CHECK(r.weights[i] == doctest::Approx(1.0).epsilon(1e-7));
    }
    CHECK(max_abs(r.decomposition.vectors.cwiseAbs() - Matrix::Identity(3, 3)) < 1e-7);
    CHECK(r.residual <= 1e-8);
}

TEST_CASE("john_decomposition of the square's vertices") {
    Matrix pts(2, 2);
    pts << 1, 1, 1, -1;
    // hand summation: sum over the four signed vertices of (v/2)(v/2)^T
    // equals id, so each representative carries weight one after the
    // ellipsoid-to-ball change of coordinates.
    JohnResult r = john_decomposition(pts, 1e-7);
    CHECK(r.contact_indices.size() == 2);
    CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-6));
    Matrix frame = Matrix::Zero(2, 2);
    for (Index j = 0; j < 2; ++j) {
        frame += r.decomposition.vectors.col(j) * r.decomposition.vectors.col(j).transpose();
    }
    CHECK(max_abs(frame - Matrix::Identity(2, 2)) < 1e-7);
    // in ball coordinates the vertices map to (+-1,+-1)/sqrt2
    for (Index j = 0; j < 2; ++j) {
        CHECK(r.contact_points.col(j).cwiseAbs().maxCoeff() ==
              doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
    }
}

TEST_CASE("john_decomposition validates on random symmetric point sets") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Index n = 3 + static_cast<Index>(seed % 3);
        Matrix pts = testsupport::random_point_set(seed, n, 6 * n);
        JohnResult r = john_decomposition(pts, 1e-6);
        CHECK(r.residual <= 1e-6);
        CHECK(r.weights.sum() == doctest::Approx(static_cast<double>(n)).epsilon(1e-5));
        CHECK_NOTHROW(validate(r.decomposition.vectors, 1e-5));
    }
}

TEST_CASE("polytope_norm on l_inf^2") {
    PolytopeSpace s = linf_space(2);
    Vector x(2);
    x << 3, -1;
    CHECK(polytope_norm(s, x) == doctest::Approx(3.0));
    CHECK_THROWS_AS(polytope_norm(s, Vector::Ones(3)), ValidationError);
}

TEST_CASE("every unit direction has X-norm at least one") {
    JohnResult r = john_decomposition(testsupport::random_point_set(4, 4, 16), 1e-6);
    PolytopeSpace s = polytope_space(r);
    for (Index j = 0; j < s.directions.cols(); ++j) {
        CHECK(polytope_norm(s, s.directions.col(j)) >= 1.0 - 1e-10);
        CHECK(s.directions.col(j).norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("X-norm is dominated by the euclidean norm") {
    JohnResult r = john_decomposition(testsupport::random_point_set(5, 4, 16), 1e-6);
    PolytopeSpace s = polytope_space(r);
    Pcg32 rng(6, 16);
    for (int t = 0; t < 200; ++t) {
        Vector x = gaussian_vector(rng, 4);
        CHECK(polytope_norm(s, x) <= x.norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("norm sandwich |x|_X <= |x|_2 <= sqrt(n) |x|_X for John systems") {
    for (std::uint64_t seed = 11; seed <= 14; ++seed) {
        const Index n = 4;
        JohnResult r = john_decomposition(testsupport::random_point_set(seed, n, 18), 1e-6);
        PolytopeSpace s = polytope_space(r);
        Pcg32 rng(seed, 17);
        for (int t = 0; t < 100; ++t) {
            Vector x = gaussian_vector(rng, n);
            const double nx = polytope_norm(s, x);
            CHECK(nx <= x.norm() * (1.0 + 1e-9));
            CHECK(x.norm() <= std::sqrt(static_cast<double>(n)) * nx * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("contact duality: <Pu,u> is at most |Pu|_X") {
    for (std::uint64_t seed = 21; seed <= 24; ++seed) {
        const Index n = 5;
        JohnResult r = john_decomposition(testsupport::random_point_set(seed, n, 20), 1e-6);
        PolytopeSpace s = polytope_space(r);
        Matrix p = testsupport::random_projection(seed, n, 3);
        for (Index j = 0; j < s.directions.cols(); ++j) {
            const Vector pu = p * s.directions.col(j);
            CHECK(pu.dot(s.directions.col(j)) <= polytope_norm(s, pu) + 1e-10);
        }
    }
}

TEST_CASE("nnls solves a small constrained system") {
    Matrix a(3, 2);
    a << 1, 0, 0, 1, 0, 0;
    Vector b(3);
    b << 2, -1, 0;  // unconstrained optimum has a negative coordinate
    Vector x = nnls(a, b);
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(0.0));
}
