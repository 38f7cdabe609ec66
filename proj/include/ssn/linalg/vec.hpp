#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ssn/errors.hpp"

namespace ssn::linalg {

using Vec = std::vector<double>;

inline void check_same_size(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatchError("vector sizes disagree");
    }
}

// All reductions below run serially in index order so results are
// reproducible bit-for-bit regardless of thread count.

inline double dot(const Vec& a, const Vec& b) {
    check_same_size(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm1(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

inline double norm_inf(const Vec& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

inline Vec scaled(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    check_same_size(a, b);
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    check_same_size(a, b);
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// y += c * x
inline void axpy(double c, const Vec& x, Vec& y) {
    check_same_size(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline bool all_finite(const Vec& a) {
    for (double x : a) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace ssn::linalg
