#pragma once

#include "ssn/linalg/matrix.hpp"
#include "ssn/linalg/sparse.hpp"
#include "ssn/linalg/vec.hpp"

// Hot dense kernels. Each OpenMP version partitions work by output element
// and keeps a serial inner loop, so its result is bit-identical to the
// reference version for any thread count. The ref:: namespace holds the
// plain serial implementations used as test oracles and as the baseline in
// the kernel benchmark.

namespace ssn::linalg {

/// y = A x
Vec matvec(const DenseMatrix& a, const Vec& x);

/// y = A^T x
Vec matvec_t(const DenseMatrix& a, const Vec& x);

/// y = A x, sparse A
Vec spmv(const SparseCsr& a, const Vec& x);

/// y = A^T x, sparse A (serial scatter; O(nnz))
Vec spmv_t(const SparseCsr& a, const Vec& x);

/// x <- (I - tau u u^T) x
void reflect_inplace(Vec& x, const Vec& u, double tau);

/// H V H with H = I - tau u u^T
DenseMatrix reflect_both(const DenseMatrix& v, const Vec& u, double tau);

namespace ref {

Vec matvec(const DenseMatrix& a, const Vec& x);
Vec matvec_t(const DenseMatrix& a, const Vec& x);
Vec spmv(const SparseCsr& a, const Vec& x);
DenseMatrix reflect_both(const DenseMatrix& v, const Vec& u, double tau);

/// C = A B (naive; test oracle only)
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

} // namespace ref

} // namespace ssn::linalg
