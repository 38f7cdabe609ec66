#pragma once

#include <span>
#include <string>
#include <vector>

#include "ssn/field.hpp"
#include "ssn/geometry.hpp"

// Newton-type iterations for finding a singularity X(p) = 0 of a nonsmooth
// vector field on the sphere:
//
//   nm_solve  — the local method: full steps p_{k+1} = exp_{p_k}(v_k) with
//               v_k solving X(p_k) + V_k v = 0 on the tangent space; fails
//               hard when the tangent system is not acceptably solvable.
//   gnm_solve — the globalized method: the same direction with a gradient
//               fallback, safeguarded by a nonmonotone Armijo search on the
//               merit function phi(p) = 0.5 ||X(p)||^2.
//
// Both record a full per-iteration trace whose acceptance certificates can
// be re-verified independently.

namespace ssn::solver {

struct SolverConfig {
    double tol_residual = 1e-6;
    int max_iters = 100;
    double sigma = 1e-4;              // Armijo slope fraction, in (0, 1/2)
    double beta = 0.5;                // backtracking factor, in (0, 1)
    int nonmonotone_depth = 0;        // M: merit window is the last m_k + 1 values
    int max_backtracks = 60;
    double solve_residual_factor = 1e-8; // accept Newton solve when ||Vv+X|| <= eta ||X||
    double condition_cap = 1e14;

    /// Throws ConfigError on out-of-range parameters.
    void validate() const;
};

enum class DirectionKind { Newton, GradientFallback };

const char* to_string(DirectionKind k);

struct Direction {
    geom::TangentVector vector;
    DirectionKind kind = DirectionKind::Newton;
    double slope = 0.0; // phi'(p)^T v; negative whenever vector != 0
};

enum class SolveStatus {
    Singularity,     // ||X(p)|| < tol_residual
    StationaryPoint, // direction vanished while the residual did not
    MaxIters,
    LineSearchStall,
    SingularClarke, // NM only: tangent system not acceptably solvable
};

const char* to_string(SolveStatus s);

struct IterationRecord {
    int k = 0;
    double residual = 0.0; // ||X(p_k)||
    double merit = 0.0;    // phi(p_k)
    double alpha = 0.0;    // accepted step size
    int backtracks = 0;
    DirectionKind kind = DirectionKind::Newton;
    int m_k = 0;
    double slope = 0.0;
};

struct SolveTrace {
    std::vector<IterationRecord> iterates; // one record per completed step
    SolveStatus status = SolveStatus::MaxIters;
    geom::SpherePoint final_point;
    double final_residual = 0.0;
    double final_merit = 0.0;
    double wall_time_s = 0.0;

    int iterations() const { return static_cast<int>(iterates.size()); }
};

/// phi(p) = 0.5 ||X(p)||^2
double merit(const field::VectorField& f, const geom::SpherePoint& p);

/// Riemannian gradient of phi: the tangent projection of V^T X(p).
geom::TangentVector merit_gradient(const field::VectorField& f, const geom::SpherePoint& p);

/// Solves X(p) + V v = 0 reduced to tangent coordinates through the
/// Householder basis at p. Falls back to the steepest-descent direction
/// -phi'(p) when the reduced system is ill-conditioned (estimate above
/// condition_cap) or the back-substituted residual fails the eta test.
Direction newton_direction(const field::VectorField& f, const geom::SpherePoint& p,
                           const SolverConfig& cfg);

/// Same, from a precomputed value and Clarke element at p.
Direction newton_direction(const geom::SpherePoint& p, const geom::TangentVector& value,
                           const field::ClarkeElement& element, const SolverConfig& cfg);

/// max of the last m_k + 1 merit values with m_k = min(k, M); `merits` holds
/// phi(p_0..p_k).
double nonmonotone_reference(std::span<const double> merits, int k, int nonmonotone_depth);

struct LineSearchResult {
    double alpha = 0.0;
    int backtracks = 0;
    bool stalled = false; // no step in {1, beta, ...} passed within max_backtracks
};

/// First alpha in {1, beta, beta^2, ...} with
/// phi(exp_p(alpha v)) <= reference + sigma * alpha * slope.
/// Requires dir.slope < 0.
LineSearchResult line_search(const field::VectorField& f, const geom::SpherePoint& p,
                             const Direction& dir, double reference, const SolverConfig& cfg);

/// Local Newton method: full steps, no fallback, no search.
SolveTrace nm_solve(const field::VectorField& f, const geom::SpherePoint& p0,
                    const SolverConfig& cfg);

/// Globalized Newton method with the nonmonotone line search.
SolveTrace gnm_solve(const field::VectorField& f, const geom::SpherePoint& p0,
                     const SolverConfig& cfg);

/// Re-checks, from the trace alone, that every recorded step satisfies the
/// nonmonotone acceptance inequality and the m_k update rule.
/// `final_merit` is phi at the point reached by the last recorded step.
bool verify_certificate_records(std::span<const IterationRecord> records, double final_merit,
                                const SolverConfig& cfg);

bool verify_certificates(const SolveTrace& trace, const SolverConfig& cfg);

} // namespace ssn::solver
