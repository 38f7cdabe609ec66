#pragma once

#include <cstdint>
#include <memory>

#include "ssn/errors.hpp"
#include "ssn/geometry.hpp"
#include "ssn/linalg/matrix.hpp"
#include "ssn/linalg/sparse.hpp"

namespace ssn::field {

/// Field evaluation produced a non-finite value or an inconsistent operand.
class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One selected element of the Clarke generalized covariant derivative at
/// `base`, stored as the full ambient n x n matrix. As an operator it maps
/// the tangent space at `base` into itself.
class ClarkeElement {
public:
    ClarkeElement(geom::SpherePoint base, linalg::DenseMatrix matrix);

    const geom::SpherePoint& base() const { return base_; }
    const linalg::DenseMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return base_.dim(); }

private:
    geom::SpherePoint base_;
    linalg::DenseMatrix matrix_;
};

/// Locally Lipschitz vector field on S^{n-1}: a value X(p) in the tangent
/// space at p, plus one Clarke element at p.
class VectorField {
public:
    virtual ~VectorField() = default;

    virtual std::size_t dimension() const = 0;
    virtual geom::TangentVector eval(const geom::SpherePoint& p) const = 0;
    virtual ClarkeElement clarke_element(const geom::SpherePoint& p) const = 0;
};

/// One randomly generated absolute-value benchmark problem:
/// find p on the sphere with (I - p p^T)[A p - |p| - b] = 0.
struct AvvfInstance {
    std::size_t n = 0;
    linalg::SparseCsr a;
    linalg::Vec b;
    geom::SpherePoint planted_solution;
    std::uint64_t seed = 0;
    double density = 0.0;   // requested nnz fraction
    double sigma_min = 0.0; // estimated smallest singular value of the scaled A
};

/// X(p) = (I - p p^T)(A p - |p| - b), with |p| the componentwise magnitude.
geom::TangentVector avvf_eval(const AvvfInstance& inst, const geom::SpherePoint& p);

/// V = (I - p p^T)[A - diag(sgn p)] - p^T[A p - |p| - b] I, with sgn(0) = 0.
ClarkeElement avvf_clarke_element(const AvvfInstance& inst, const geom::SpherePoint& p);

/// Adapter exposing an instance through the VectorField interface. Holds a
/// reference; the instance must outlive the field.
class AvvfField : public VectorField {
public:
    explicit AvvfField(const AvvfInstance& inst) : inst_(&inst) {}

    std::size_t dimension() const override { return inst_->n; }
    geom::TangentVector eval(const geom::SpherePoint& p) const override {
        return avvf_eval(*inst_, p);
    }
    ClarkeElement clarke_element(const geom::SpherePoint& p) const override {
        return avvf_clarke_element(*inst_, p);
    }

private:
    const AvvfInstance* inst_;
};

/// Draws a random instance. A carries prescribed singular values (uniform
/// on (0,1), rescaled onto (3.3, 6.6)) spread from a diagonal by random
/// plane rotations until the nnz fraction reaches max(density, 5/n); the
/// planted solution is uniform on (-100,100)^n normalized, and b is
/// computed from it. Deterministic per seed. Throws DegenerateMatrixError
/// when 20 attempts in a row degenerate.
AvvfInstance generate_instance(std::size_t n, double density, std::uint64_t seed);

/// Builds an instance around a caller-supplied matrix and planted solution.
AvvfInstance make_instance(linalg::SparseCsr a, geom::SpherePoint planted, std::uint64_t seed,
                           double density);

/// Uniform on (-100,100)^n, normalized. Deterministic per seed.
geom::SpherePoint random_start(std::size_t n, std::uint64_t seed);

/// Smallest singular value via LU + inverse power iteration on A^{-T}A^{-1}.
/// Returns 0 for numerically singular input.
double estimate_sigma_min(const linalg::SparseCsr& a);

/// Per-invariant audit of an instance (sigma_min > 3, planted residual,
/// exact reconstruction of b).
struct InstanceCheck {
    bool sigma_ok = false;
    bool planted_residual_ok = false;
    bool b_reconstructs_ok = false;
    double sigma_estimate = 0.0;
    double planted_residual = 0.0;

    bool all_ok() const { return sigma_ok && planted_residual_ok && b_reconstructs_ok; }
};

InstanceCheck verify_instance(const AvvfInstance& inst);

namespace detail {

/// Generation loop with testing knobs exposed: the attempt budget and the
/// raw singular-value floor below which an attempt is discarded.
AvvfInstance generate_instance_impl(std::size_t n, double density, std::uint64_t seed,
                                    int max_attempts, double min_raw_sigma);

} // namespace detail

} // namespace ssn::field
