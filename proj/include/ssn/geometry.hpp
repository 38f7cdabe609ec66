#pragma once

#include <cstddef>

#include "ssn/errors.hpp"
#include "ssn/linalg/matrix.hpp"
#include "ssn/linalg/vec.hpp"

// Exact closed-form primitives of the unit sphere S^{n-1} embedded in R^n:
// tangent projection, exponential/logarithm maps, geodesic distance,
// parallel transport and tangent-space bases. All operations are pure and
// all values are immutable after construction.

namespace ssn::geom {

/// Unit-norm point on S^{n-1}, n >= 2.
class SpherePoint {
public:
    /// Validates ||coords|| = 1 within 1e-12.
    explicit SpherePoint(linalg::Vec coords);

    /// Scales an arbitrary nonzero vector onto the sphere.
    static SpherePoint normalized(linalg::Vec coords);

    const linalg::Vec& coords() const { return coords_; }
    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }

    bool operator==(const SpherePoint& other) const { return coords_ == other.coords_; }

private:
    struct Unchecked {};
    SpherePoint(linalg::Vec coords, Unchecked) : coords_(std::move(coords)) {}

    linalg::Vec coords_;
};

/// Vector in the tangent hyperplane at `base`: <base, coords> = 0.
class TangentVector {
public:
    /// Validates orthogonality within 1e-10 * max(1, ||coords||).
    TangentVector(SpherePoint base, linalg::Vec coords);

    const SpherePoint& base() const { return base_; }
    const linalg::Vec& coords() const { return coords_; }
    std::size_t dim() const { return coords_.size(); }

    double norm() const { return linalg::norm2(coords_); }
    TangentVector scaled(double c) const { return TangentVector(base_, linalg::scaled(coords_, c)); }

private:
    SpherePoint base_;
    linalg::Vec coords_;
};

/// Orthonormal basis of the tangent space at `base`, as an n x (n-1) matrix.
class TangentBasis {
public:
    TangentBasis(SpherePoint base, linalg::DenseMatrix columns);

    const SpherePoint& base() const { return base_; }
    const linalg::DenseMatrix& columns() const { return columns_; }

    /// Embeds tangent coordinates w in R^{n-1} as columns * w.
    TangentVector embed(const linalg::Vec& w) const;

private:
    SpherePoint base_;
    linalg::DenseMatrix columns_;
};

/// Householder reflector H = I - tau u u^T with H e_1 = -sign(p_1) p.
/// Columns 2..n of H form an orthonormal basis of the tangent space at p;
/// applying H is O(n), so it is the preferred reduction in hot paths.
struct PoleReflector {
    linalg::Vec u;
    double tau = 0.0;

    linalg::Vec apply(linalg::Vec x) const;
};

PoleReflector pole_reflector(const SpherePoint& p);

/// (I - p p^T) u
TangentVector project_to_tangent(const SpherePoint& p, const linalg::Vec& u);

/// Point reached after unit time along the geodesic with initial velocity v.
SpherePoint exp_map(const TangentVector& v);

/// Inverse of exp at p: returns v with exp_map(v) = q and ||v|| = distance(p, q).
/// Throws AntipodalPointsError when <p, q> <= -1 + 1e-10.
TangentVector log_map(const SpherePoint& p, const SpherePoint& q);

/// Geodesic distance, arccos of the clamped inner product; in [0, pi].
double distance(const SpherePoint& p, const SpherePoint& q);

/// Carries v from its base point to q along the minimal geodesic.
TangentVector parallel_transport(const TangentVector& v, const SpherePoint& q);

/// Deterministic orthonormal tangent basis from the Householder complement.
TangentBasis tangent_basis(const SpherePoint& p);

} // namespace ssn::geom
