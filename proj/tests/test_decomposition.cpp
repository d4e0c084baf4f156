#include "jd/decomposition.hpp"

#include "jd/linalg.hpp"
#include "jd/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace jd;
using testsupport::max_abs;

TEST_CASE("validate accepts an orthonormal basis with zero residual") {
    Decomposition d = validate(Matrix::Identity(3, 3), 1e-12);
    CHECK(d.residual == 0.0);
    CHECK(d.size() == 3);
}

TEST_CASE("validate accepts the Mercedes-Benz frame") {
    Matrix mb = testsupport::mercedes_frame();
    // direct summation oracle: sum of the rank-one terms
    Matrix frame = Matrix::Zero(2, 2);
    for (Index j = 0; j < 3; ++j) frame += mb.col(j) * mb.col(j).transpose();
    CHECK(max_abs(frame - Matrix::Identity(2, 2)) < 1e-12);

    Decomposition d = validate(mb);
    CHECK(d.residual < 1e-12);
}

TEST_CASE("validate rejects a rank-deficient system") {
    Matrix one(2, 1);
    one << 1, 0;
    CHECK_THROWS_AS(validate(one, 1e-6), ValidationError);
    try {
        validate(one, 1e-6);
    } catch (const ValidationError& e) {
        CHECK(e.residual() == doctest::Approx(1.0));
    }
}

TEST_CASE("validate rejects zero vectors") {
    Matrix m = Matrix::Identity(2, 3);  // third column zero
    CHECK_THROWS_AS(validate(m, 1e-6), ValidationError);
}

TEST_CASE("split into two copies preserves the rank-one term") {
    Decomposition d = validate(Matrix::Identity(2, 2), 1e-12);
    SplitPlan plan{{2, 1}};
    Decomposition s = split(d, plan);
    CHECK(s.size() == 3);
    CHECK(s.vectors.col(0).norm() == doctest::Approx(1.0 / std::sqrt(2.0)));
    Matrix piece = s.vectors.col(0) * s.vectors.col(0).transpose() +
                   s.vectors.col(1) * s.vectors.col(1).transpose();
    CHECK(max_abs(piece - d.vectors.col(0) * d.vectors.col(0).transpose()) < 1e-15);
    REQUIRE(s.parent_map.has_value());
    CHECK((*s.parent_map)[0] == 0);
    CHECK((*s.parent_map)[1] == 0);
    CHECK((*s.parent_map)[2] == 1);
}

TEST_CASE("split of an ONB by (1,4) still validates") {
    Decomposition d = validate(Matrix::Identity(2, 2), 1e-12);
    Decomposition s = split(d, SplitPlan{{1, 4}});
    CHECK(s.size() == 5);
    CHECK_NOTHROW(validate(s.vectors, 1e-12));
}

TEST_CASE("split child norms follow norm / sqrt(count)") {
    // norms (1,2) with counts (1,4): children 1 and 2/sqrt(4) = 1
    Matrix vecs(2, 2);
    vecs << 1, 0, 0, 2;
    Decomposition d;  // not a decomposition of id; split only rescales
    d.dim = 2;
    d.vectors = vecs;
    Decomposition s = split(d, SplitPlan{{1, 4}});
    for (Index j = 0; j < s.size(); ++j) {
        CHECK(s.vectors.col(j).norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("split rejects zero counts") {
    Decomposition d = validate(Matrix::Identity(2, 2), 1e-12);
    CHECK_THROWS_AS(split(d, SplitPlan{{0, 2}}), ValidationError);
}

TEST_CASE("split preserves the frame operator and the Hilbertian constant") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Decomposition d = random_tight_frame(4, 9, seed);
        Pcg32 rng(seed, 7);
        SplitPlan plan;
        for (Index j = 0; j < d.size(); ++j) {
            plan.counts.push_back(1 + static_cast<Index>(rng.below(4)));
        }
        Decomposition s = split(d, plan);
        CHECK(max_abs(s.frame_operator() - d.frame_operator()) <= 1e-12);
        CHECK(svd(s.vectors).op_norm ==
              doctest::Approx(svd(d.vectors).op_norm).epsilon(1e-9));
    }
}

TEST_CASE("equal_norm_plan keeps an already even system") {
    Vector w = Vector::Constant(4, 0.25);
    SplitPlan plan = equal_norm_plan(w, 4);
    for (Index c : plan.counts) CHECK(c == 1);
}

TEST_CASE("equal_norm_plan splits weights (0.5, 2.5) at target 6 as (1,5)") {
    Vector w(2);
    w << 0.5, 2.5;
    SplitPlan plan = equal_norm_plan(w, 6);
    CHECK(plan.counts[0] == 1);
    CHECK(plan.counts[1] == 5);
    // oracle: all child weights equal 0.5, band center h/m' = 3/6
    const double ref = std::sqrt(3.0 / 6.0);
    for (std::size_t j = 0; j < 2; ++j) {
        const double child = std::sqrt(w[static_cast<Index>(j)] /
                                       static_cast<double>(plan.counts[j]));
        CHECK(child >= 0.9 * ref - 1e-12);
        CHECK(child <= 1.1 * ref + 1e-12);
    }
}

TEST_CASE("equal_norm_split lands in the band on random frames") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Decomposition d = random_tight_frame(5, 11, seed);
        Decomposition s = equal_norm_split(d, 4 * d.size());
        const double h = s.vectors.squaredNorm();
        const double ref = std::sqrt(h / static_cast<double>(s.size()));
        for (Index j = 0; j < s.size(); ++j) {
            CHECK(s.vectors.col(j).norm() >= 0.9 * ref * (1 - 1e-12));
            CHECK(s.vectors.col(j).norm() <= 1.1 * ref * (1 + 1e-12));
        }
        CHECK_NOTHROW(validate(s.vectors));
    }
}

TEST_CASE("random_tight_frame with m = n is a rotated ONB") {
    Decomposition d = random_tight_frame(3, 3, 42);
    CHECK(max_abs(d.vectors.transpose() * d.vectors - Matrix::Identity(3, 3)) < 1e-9);
}

TEST_CASE("random_tight_frame validates and is deterministic") {
    Decomposition a = random_tight_frame(4, 9, 7);
    Decomposition b = random_tight_frame(4, 9, 7);
    CHECK(a.vectors == b.vectors);
    CHECK(a.vectors.squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(a.residual <= 1e-9);
    CHECK_THROWS_AS(random_tight_frame(4, 3, 7), ValidationError);
}

TEST_CASE("tighten keeps a tight input unchanged") {
    Decomposition d = random_tight_frame(3, 7, 5);
    TightenResult t = tighten(d.vectors);
    CHECK(max_abs(t.decomposition.vectors - d.vectors) < 1e-9);
}

TEST_CASE("tighten rescales a diagonal frame") {
    Matrix v(2, 2);
    v << 2, 0, 0, 1;
    TightenResult t = tighten(v);
    CHECK(max_abs(t.decomposition.vectors - Matrix::Identity(2, 2)) < 1e-12);
    CHECK(t.frame_upper == doctest::Approx(4.0));
    CHECK(t.frame_lower == doctest::Approx(1.0));
    // witness condition number equals the frame constant ratio sqrt(B/A)
    SpectralSummary map_spec = svd(t.map);
    CHECK(map_spec.op_norm / map_spec.singular_values[1] ==
          doctest::Approx(std::sqrt(t.frame_upper / t.frame_lower)).epsilon(1e-10));
}

TEST_CASE("tighten of a random spanning set validates") {
    Pcg32 rng(9, 8);
    Matrix v = gaussian_matrix(rng, 5, 12);
    TightenResult t = tighten(v);
    CHECK_NOTHROW(validate(t.decomposition.vectors, 1e-9));
}

TEST_CASE("tighten is idempotent") {
    Pcg32 rng(10, 9);
    Matrix v = gaussian_matrix(rng, 4, 9);
    Matrix once = tighten(v).decomposition.vectors;
    Matrix twice = tighten(once).decomposition.vectors;
    CHECK(max_abs(twice - once) < 1e-9);
}

TEST_CASE("tighten rejects non-spanning input") {
    Matrix v(3, 3);
    v << 1, 2, 3, 0, 0, 0, 0, 0, 0;
    CHECK_THROWS_AS(tighten(v), ValidationError);
}
