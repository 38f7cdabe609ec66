#include "ssn/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ssn::geom {

using linalg::Vec;

SpherePoint::SpherePoint(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw GeometryError("SpherePoint: dimension must be >= 2");
    const double n = linalg::norm2(coords_);
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12) {
        throw GeometryError("SpherePoint: coordinates are not unit-norm");
    }
}

SpherePoint SpherePoint::normalized(Vec coords) {
    if (coords.size() < 2) throw GeometryError("SpherePoint: dimension must be >= 2");
    const double n = linalg::norm2(coords);
    if (!std::isfinite(n) || n < 1e-300) throw GeometryError("SpherePoint: cannot normalize zero vector");
    for (double& x : coords) x /= n;
    return SpherePoint(std::move(coords), Unchecked{});
}

TangentVector::TangentVector(SpherePoint base, Vec coords)
    : base_(std::move(base)), coords_(std::move(coords)) {
    if (base_.dim() != coords_.size()) throw DimensionMismatchError("TangentVector: size mismatch");
    const double ip = linalg::dot(base_.coords(), coords_);
    if (std::abs(ip) > 1e-10 * std::max(1.0, linalg::norm2(coords_))) {
        throw GeometryError("TangentVector: not orthogonal to base point");
    }
}

TangentBasis::TangentBasis(SpherePoint base, linalg::DenseMatrix columns)
    : base_(std::move(base)), columns_(std::move(columns)) {
    if (columns_.rows() != base_.dim() || columns_.cols() != base_.dim() - 1) {
        throw DimensionMismatchError("TangentBasis: matrix must be n x (n-1)");
    }
}

TangentVector TangentBasis::embed(const Vec& w) const {
    if (w.size() != columns_.cols()) throw DimensionMismatchError("TangentBasis::embed: size mismatch");
    const std::size_t n = columns_.rows();
    Vec v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) s += columns_(i, j) * w[j];
        v[i] = s;
    }
    return TangentVector(base_, std::move(v));
}

Vec PoleReflector::apply(Vec x) const {
    const double c = tau * linalg::dot(u, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * u[i];
    return x;
}

PoleReflector pole_reflector(const SpherePoint& p) {
    // Sign-stabilized: u = p + sign(p_1) e_1 never cancels, ||u||^2 = 2(1 + |p_1|).
    PoleReflector h;
    h.u = p.coords();
    const double s = h.u[0] >= 0.0 ? 1.0 : -1.0;
    h.u[0] += s;
    h.tau = 1.0 / (1.0 + std::abs(p[0]));
    return h;
}

TangentVector project_to_tangent(const SpherePoint& p, const Vec& u) {
    if (p.dim() != u.size()) throw DimensionMismatchError("project_to_tangent: size mismatch");
    const double ip = linalg::dot(p.coords(), u);
    Vec v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] - ip * p[i];
    return TangentVector(p, std::move(v));
}

SpherePoint exp_map(const TangentVector& v) {
    const SpherePoint& p = v.base();
    const double theta = v.norm();
    Vec out(p.dim());
    if (theta < 1e-8) {
        // sin(t)/t and cos(t) by their quadratic Taylor polynomials; at
        // theta < 1e-14 this is exactly p + v.
        const double sinc = 1.0 - theta * theta / 6.0;
        const double cost = 1.0 - theta * theta / 2.0;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = cost * p[i] + sinc * v.coords()[i];
    } else {
        const double cost = std::cos(theta);
        const double sinc = std::sin(theta) / theta;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = cost * p[i] + sinc * v.coords()[i];
    }
    return SpherePoint::normalized(std::move(out));
}

double distance(const SpherePoint& p, const SpherePoint& q) {
    if (p.dim() != q.dim()) throw DimensionMismatchError("distance: size mismatch");
    const double c = std::clamp(linalg::dot(p.coords(), q.coords()), -1.0, 1.0);
    return std::acos(c);
}

TangentVector log_map(const SpherePoint& p, const SpherePoint& q) {
    if (p.dim() != q.dim()) throw DimensionMismatchError("log_map: size mismatch");
    const double c = std::clamp(linalg::dot(p.coords(), q.coords()), -1.0, 1.0);
    if (c <= -1.0 + 1e-10) {
        throw AntipodalPointsError("log_map: points are antipodal, inverse exponential undefined");
    }
    // Tangent part of q, rescaled to length theta.
    Vec w(p.dim());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = q[i] - c * p[i];
    const double wn = linalg::norm2(w);
    if (wn < 1e-30) return TangentVector(p, Vec(p.dim(), 0.0));
    const double theta = std::acos(c);
    for (double& x : w) x *= theta / wn;
    return TangentVector(p, std::move(w));
}

TangentVector parallel_transport(const TangentVector& v, const SpherePoint& q) {
    const SpherePoint& p = v.base();
    const TangentVector u = log_map(p, q); // throws on antipodal pairs
    const double theta = u.norm();
    if (theta < 1e-14) return TangentVector(q, v.coords());
    // Decompose along the geodesic direction e: that component rotates to
    // -sin(theta) p + cos(theta) e, the orthogonal rest is unchanged.
    const Vec e = linalg::scaled(u.coords(), 1.0 / theta);
    const double a = linalg::dot(e, v.coords());
    const double cost = std::cos(theta), sint = std::sin(theta);
    Vec out = v.coords();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += a * ((cost - 1.0) * e[i] - sint * p[i]);
    }
    return TangentVector(q, std::move(out));
}

TangentBasis tangent_basis(const SpherePoint& p) {
    const std::size_t n = p.dim();
    const PoleReflector h = pole_reflector(p);
    linalg::DenseMatrix cols(n, n - 1);
    for (std::size_t j = 1; j < n; ++j) {
        // Column j of H = e_j - tau * u_j * u.
        const double c = h.tau * h.u[j];
        for (std::size_t i = 0; i < n; ++i) {
            cols(i, j - 1) = (i == j ? 1.0 : 0.0) - c * h.u[i];
        }
    }
    return TangentBasis(p, std::move(cols));
}

} // namespace ssn::geom
