#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace jd {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when an input violates a documented precondition or a
/// produced object fails its own validation. Carries the measured
/// residual when one exists (NaN otherwise).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg,
                             double residual = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

inline void require(bool cond, const std::string& msg,
                    double residual = std::numeric_limits<double>::quiet_NaN()) {
    if (!cond) throw ValidationError(msg, residual);
}

inline void require_finite(const Eigen::Ref<const Matrix>& m, const std::string& what) {
    if (!m.allFinite()) throw ValidationError(what + ": non-finite entries");
}

}  // namespace jd
