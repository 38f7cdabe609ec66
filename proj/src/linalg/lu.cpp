#include "ssn/linalg/lu.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ssn::linalg {

namespace {

constexpr double kZeroPivot = 1e-300;
constexpr std::size_t kParallelCutoff = 64;

} // namespace

LuFactors lu_factor(DenseMatrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatchError("lu_factor: matrix not square");
    LuFactors f;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < kZeroPivot) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        const double pivot = a(k, k);
        const double* krow = a.row(k);
#pragma omp parallel for schedule(static) if (n - k >= kParallelCutoff)
        for (std::size_t i = k + 1; i < n; ++i) {
            double* irow = a.row(i);
            const double l = irow[k] / pivot;
            irow[k] = l;
            for (std::size_t j = k + 1; j < n; ++j) irow[j] -= l * krow[j];
        }
    }
    f.lu = std::move(a);
    return f;
}

Vec lu_solve(const LuFactors& f, const Vec& b) {
    const std::size_t n = f.lu.rows();
    if (b.size() != n) throw DimensionMismatchError("lu_solve: size mismatch");
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    // L y = P b (unit lower triangle)
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        const double* row = f.lu.row(i);
        for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
        x[i] = s;
    }
    // U x = y
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        const double* row = f.lu.row(ii);
        for (std::size_t j = ii + 1; j < n; ++j) s -= row[j] * x[j];
        x[ii] = s / row[ii];
    }
    return x;
}

Vec lu_solve_t(const LuFactors& f, const Vec& b) {
    const std::size_t n = f.lu.rows();
    if (b.size() != n) throw DimensionMismatchError("lu_solve_t: size mismatch");
    // A^T x = b with PA = LU: solve U^T z = b, L^T w = z, x = P^T w.
    Vec z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(j, i) * z[j];
        z[i] = s / f.lu(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(j, ii) * z[j];
        z[ii] = s;
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = z[i];
    return x;
}

double inverse_norm1_estimate(const LuFactors& f) {
    const std::size_t n = f.lu.rows();
    if (f.singular) return std::numeric_limits<double>::infinity();
    if (n == 0) return 0.0;

    // Hager's method: maximize ||A^{-1} x||_1 over the unit 1-norm ball.
    Vec x(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const Vec y = lu_solve(f, x);
        est = norm1(y);
        Vec xi(n);
        for (std::size_t i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        const Vec z = lu_solve_t(f, xi);
        std::size_t jmax = 0;
        double zmax = std::abs(z[0]);
        for (std::size_t j = 1; j < n; ++j) {
            if (std::abs(z[j]) > zmax) {
                zmax = std::abs(z[j]);
                jmax = j;
            }
        }
        if (zmax <= dot(z, x)) break;
        x.assign(n, 0.0);
        x[jmax] = 1.0;
    }
    return est;
}

double condest1(double anorm1, const LuFactors& f) {
    if (f.singular) return std::numeric_limits<double>::infinity();
    return anorm1 * inverse_norm1_estimate(f);
}

namespace ref {

LuFactors lu_factor(DenseMatrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatchError("lu_factor: matrix not square");
    LuFactors f;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        if (std::abs(a(piv, k)) < kZeroPivot) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a(i, k) / a(k, k);
            a(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

} // namespace ref

} // namespace ssn::linalg
