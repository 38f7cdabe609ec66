#pragma once

#include <cstddef>
#include <vector>

#include "ssn/linalg/matrix.hpp"
#include "ssn/linalg/vec.hpp"

namespace ssn::linalg {

/// LU factorization with partial pivoting, P A = L U, stored packed in `lu`.
struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> perm; // row i of PA is row perm[i] of A
    bool singular = false;         // a pivot fell below the hard zero threshold
};

/// Right-looking LU with partial pivoting. Pivot search is serial; the
/// rank-1 trailing update is row-parallel with a fixed per-element
/// accumulation order, so factors are thread-count independent.
LuFactors lu_factor(DenseMatrix a);

/// Solves A x = b given factors of A.
Vec lu_solve(const LuFactors& f, const Vec& b);

/// Solves A^T x = b given factors of A.
Vec lu_solve_t(const LuFactors& f, const Vec& b);

/// Hager/Higham estimate of ||A^{-1}||_1 from LU factors.
double inverse_norm1_estimate(const LuFactors& f);

/// 1-norm condition estimate: ||A||_1 * est(||A^{-1}||_1).
/// `anorm1` is the 1-norm of the unfactored matrix. Returns +inf for
/// singular factors.
double condest1(double anorm1, const LuFactors& f);

namespace ref {

/// Plain serial LU, same algorithm as linalg::lu_factor.
LuFactors lu_factor(DenseMatrix a);

} // namespace ref

} // namespace ssn::linalg
