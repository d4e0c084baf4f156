#pragma once

#include "jd/decomposition.hpp"
#include "jd/john.hpp"
#include "jd/linalg.hpp"
#include "jd/rng.hpp"

#include <cmath>
#include <cstdint>

namespace testsupport {

using jd::Index;
using jd::Matrix;
using jd::Vector;

inline Matrix random_symmetric(std::uint64_t seed, Index n) {
    jd::Pcg32 rng(seed, 11);
    Matrix a = jd::gaussian_matrix(rng, n, n);
    return 0.5 * (a + a.transpose());
}

inline Matrix random_orthogonal(std::uint64_t seed, Index n) {
    jd::Pcg32 rng(seed, 12);
    Matrix g = jd::gaussian_matrix(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, n);
}

// random contraction: |T| <= 1 with a spread of singular values
inline Matrix random_contraction(std::uint64_t seed, Index n) {
    jd::Pcg32 rng(seed, 13);
    Matrix g = jd::gaussian_matrix(rng, n, n);
    return g / (jd::svd(g).op_norm * (1.0 + 1e-12));
}

inline Matrix random_projection(std::uint64_t seed, Index n, Index rank) {
    jd::Pcg32 rng(seed, 14);
    Matrix g = jd::gaussian_matrix(rng, n, rank);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
    return q * q.transpose();
}

// symmetric point cloud (one representative per +- pair) that spans R^n
inline Matrix random_point_set(std::uint64_t seed, Index n, Index count) {
    jd::Pcg32 rng(seed, 15);
    Matrix pts = jd::gaussian_matrix(rng, n, count);
    for (Index j = 0; j < count; ++j) pts.col(j).normalize();
    // stretch a few points so contacts are not the whole cloud
    for (Index j = 0; j < std::min<Index>(n, count); ++j) pts.col(j) *= 1.5;
    return pts;
}

// three unit-ish vectors at 0, 120, 240 degrees scaled to norm sqrt(2/3)
inline Matrix mercedes_frame() {
    Matrix m(2, 3);
    const double r = std::sqrt(2.0 / 3.0);
    const double deg120 = 2.0 * M_PI / 3.0;
    for (Index j = 0; j < 3; ++j) {
        m(0, j) = r * std::cos(deg120 * static_cast<double>(j));
        m(1, j) = r * std::sin(deg120 * static_cast<double>(j));
    }
    return m;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
