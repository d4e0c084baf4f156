#pragma once

#include "jd/decomposition.hpp"
#include "jd/types.hpp"

namespace jd {

/// Origin-symmetric ellipsoid {x : x^T M x <= 1}, M positive definite.
struct Ellipsoid {
    Matrix shape;
};

/// Norm |x|_X = max_j |<x, u_j>| over unit directions u_j spanning R^n.
struct PolytopeSpace {
    Index dim = 0;
    Matrix directions;  // n x m, unit columns
};

struct MveeResult {
    Ellipsoid ellipsoid;
    Vector point_weights;  // barycentric weights on the input points
    bool converged = false;
    double gap = 0.0;  // max_j x_j^T M x_j - 1 at termination
    long iterations = 0;
};

struct JohnResult {
    Ellipsoid ellipsoid;
    IndexSet contact_indices;
    Vector weights;           // c_j > 0 on the contacts, sum ~ n
    Matrix contact_points;    // normalized contacts in unit-ball coordinates
    Decomposition decomposition;  // columns sqrt(c_j) * u_j
    double residual = 0.0;        // |sum c_j u_j u_j^T - id|_F
    bool mvee_converged = true;
    double mvee_gap = 0.0;
};

/// Minimal-volume enclosing ellipsoid of {+-p_j}; inputs give one
/// representative point per +- pair as columns. Frank-Wolfe ascent with
/// away steps on the log-det objective. A result that exceeds max_iter
/// is returned with converged = false and the achieved gap.
MveeResult mvee(const Matrix& points, double tol = 1e-9, long max_iter = 200000);

/// MVEE followed by contact identification and nonnegative least-squares
/// weights solving sum c_j u_j u_j^T = id over the contacts.
JohnResult john_decomposition(const Matrix& points, double tol = 1e-7,
                              long max_iter = 200000);

double polytope_norm(const PolytopeSpace& space, const Vector& x);

/// The polytope space whose unit directions are the normalized contacts.
PolytopeSpace polytope_space(const JohnResult& john);

PolytopeSpace linf_space(Index n);

/// Nonnegative least squares min |A c - b| s.t. c >= 0 (Lawson-Hanson).
Vector nnls(const Matrix& a, const Vector& b, double tol = 1e-12);

}  // namespace jd
