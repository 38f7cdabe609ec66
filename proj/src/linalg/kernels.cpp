#include "ssn/linalg/kernels.hpp"

#include <cstddef>

namespace ssn::linalg {

namespace {

// Below this size the parallel-for setup costs more than the loop body.
constexpr std::size_t kParallelCutoff = 64;

} // namespace

Vec matvec(const DenseMatrix& a, const Vec& x) {
    if (a.cols() != x.size()) throw DimensionMismatchError("matvec: size mismatch");
    const std::size_t m = a.rows(), n = a.cols();
    Vec y(m);
#pragma omp parallel for schedule(static) if (m >= kParallelCutoff)
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vec matvec_t(const DenseMatrix& a, const Vec& x) {
    if (a.rows() != x.size()) throw DimensionMismatchError("matvec_t: size mismatch");
    const std::size_t m = a.rows(), n = a.cols();
    Vec y(n);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

Vec spmv(const SparseCsr& a, const Vec& x) {
    if (a.dim() != x.size()) throw DimensionMismatchError("spmv: size mismatch");
    const std::size_t n = a.dim();
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& va = a.values();
    Vec y(n);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[ci[k]];
        y[i] = s;
    }
    return y;
}

Vec spmv_t(const SparseCsr& a, const Vec& x) {
    if (a.dim() != x.size()) throw DimensionMismatchError("spmv_t: size mismatch");
    const std::size_t n = a.dim();
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& va = a.values();
    Vec y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) y[ci[k]] += va[k] * x[i];
    }
    return y;
}

void reflect_inplace(Vec& x, const Vec& u, double tau) {
    check_same_size(x, u);
    const double c = tau * dot(u, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * u[i];
}

DenseMatrix reflect_both(const DenseMatrix& v, const Vec& u, double tau) {
    const std::size_t n = v.rows();
    if (v.cols() != n || u.size() != n) throw DimensionMismatchError("reflect_both: size mismatch");

    // Left apply: (HV)[i][j] = V[i][j] - tau * u[i] * t[j],  t = V^T u.
    Vec t(n);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += u[i] * v(i, j);
        t[j] = s;
    }
    DenseMatrix w(n, n);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) {
        const double cu = tau * u[i];
        const double* vrow = v.row(i);
        double* wrow = w.row(i);
        for (std::size_t j = 0; j < n; ++j) wrow[j] = vrow[j] - cu * t[j];
    }

    // Right apply: result[i][j] = (HV)[i][j] - tau * s[i] * u[j],  s = (HV) u.
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) {
        double* wrow = w.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += wrow[j] * u[j];
        const double cs = tau * s;
        for (std::size_t j = 0; j < n; ++j) wrow[j] -= cs * u[j];
    }
    return w;
}

namespace ref {

Vec matvec(const DenseMatrix& a, const Vec& x) {
    if (a.cols() != x.size()) throw DimensionMismatchError("matvec: size mismatch");
    Vec y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vec matvec_t(const DenseMatrix& a, const Vec& x) {
    if (a.rows() != x.size()) throw DimensionMismatchError("matvec_t: size mismatch");
    Vec y(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

Vec spmv(const SparseCsr& a, const Vec& x) {
    if (a.dim() != x.size()) throw DimensionMismatchError("spmv: size mismatch");
    Vec y(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            s += a.values()[k] * x[a.col_idx()[k]];
        }
        y[i] = s;
    }
    return y;
}

DenseMatrix reflect_both(const DenseMatrix& v, const Vec& u, double tau) {
    const std::size_t n = v.rows();
    if (v.cols() != n || u.size() != n) throw DimensionMismatchError("reflect_both: size mismatch");
    Vec t(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += u[i] * v(i, j);
        t[j] = s;
    }
    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cu = tau * u[i];
        for (std::size_t j = 0; j < n; ++j) w(i, j) = v(i, j) - cu * t[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += w(i, j) * u[j];
        const double cs = tau * s;
        for (std::size_t j = 0; j < n; ++j) w(i, j) -= cs * u[j];
    }
    return w;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatchError("matmul: size mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
    return c;
}

} // namespace ref

} // namespace ssn::linalg
