#include "ssn/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ssn/linalg/kernels.hpp"
#include "ssn/linalg/lu.hpp"

namespace ssn::solver {

using geom::SpherePoint;
using geom::TangentVector;
using linalg::DenseMatrix;
using linalg::Vec;

namespace {

constexpr double kZeroDirection = 1e-15;

struct Evaluation {
    TangentVector value;
    double residual;
    double merit;
};

// phi is derived from dot(x, x) everywhere (never from a rounded norm) so
// the value recorded in the trace is bit-identical to the one the line
// search compared against.
Evaluation evaluate(const field::VectorField& f, const SpherePoint& p) {
    TangentVector x = f.eval(p);
    const double sq = linalg::dot(x.coords(), x.coords());
    return {std::move(x), std::sqrt(sq), 0.5 * sq};
}

class WallTimer {
public:
    double elapsed_s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace

void SolverConfig::validate() const {
    if (!(sigma > 0.0) || !(sigma < 0.5)) throw ConfigError("sigma must be in (0, 1/2)");
    if (!(beta > 0.0) || !(beta < 1.0)) throw ConfigError("beta must be in (0, 1)");
    if (nonmonotone_depth < 0) throw ConfigError("nonmonotone depth M must be >= 0");
    if (!(tol_residual > 0.0)) throw ConfigError("tol_residual must be positive");
    if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
    if (max_backtracks < 0) throw ConfigError("max_backtracks must be >= 0");
    if (!(solve_residual_factor > 0.0)) throw ConfigError("solve_residual_factor must be positive");
    if (!(condition_cap > 0.0)) throw ConfigError("condition_cap must be positive");
}

const char* to_string(DirectionKind k) {
    return k == DirectionKind::Newton ? "newton" : "gradient_fallback";
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Singularity: return "singularity";
        case SolveStatus::StationaryPoint: return "stationary_point";
        case SolveStatus::MaxIters: return "max_iters";
        case SolveStatus::LineSearchStall: return "line_search_stall";
        case SolveStatus::SingularClarke: return "singular_clarke";
    }
    return "unknown";
}

double merit(const field::VectorField& f, const SpherePoint& p) {
    const TangentVector x = f.eval(p);
    return 0.5 * linalg::dot(x.coords(), x.coords());
}

TangentVector merit_gradient(const field::VectorField& f, const SpherePoint& p) {
    const TangentVector x = f.eval(p);
    const field::ClarkeElement v = f.clarke_element(p);
    return geom::project_to_tangent(p, linalg::matvec_t(v.matrix(), x.coords()));
}

Direction newton_direction(const SpherePoint& p, const TangentVector& value,
                           const field::ClarkeElement& element, const SolverConfig& cfg) {
    const std::size_t n = p.dim();
    const Vec& x = value.coords();
    const TangentVector grad =
        geom::project_to_tangent(p, linalg::matvec_t(element.matrix(), x));

    // Reduce X + V v = 0 to tangent coordinates: with H the Householder
    // reflector sending e_1 to +-p, the trailing (n-1)x(n-1) block of H V H
    // is the operator in the basis H e_2, ..., H e_n.
    const geom::PoleReflector h = geom::pole_reflector(p);
    const DenseMatrix w = linalg::reflect_both(element.matrix(), h.u, h.tau);
    DenseMatrix b(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) b(i - 1, j - 1) = w(i, j);
    }
    const Vec hx = h.apply(x);
    Vec rhs(n - 1);
    for (std::size_t i = 1; i < n; ++i) rhs[i - 1] = -hx[i];

    const double bnorm1 = b.norm1();
    const linalg::LuFactors lu = linalg::lu_factor(std::move(b));
    if (!lu.singular && linalg::condest1(bnorm1, lu) < cfg.condition_cap) {
        const Vec wsol = linalg::lu_solve(lu, rhs);
        Vec vfull(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) vfull[i] = wsol[i - 1];
        vfull = h.apply(std::move(vfull));

        Vec residual = linalg::matvec(element.matrix(), vfull);
        for (std::size_t i = 0; i < n; ++i) residual[i] += x[i];
        const double xnorm = linalg::norm2(x);
        if (linalg::norm2(residual) <= cfg.solve_residual_factor * xnorm) {
            const double slope = linalg::dot(grad.coords(), vfull);
            if (slope < 0.0) {
                return Direction{TangentVector(p, std::move(vfull)), DirectionKind::Newton, slope};
            }
        }
    }

    const double slope = -linalg::dot(grad.coords(), grad.coords());
    return Direction{grad.scaled(-1.0), DirectionKind::GradientFallback, slope};
}

Direction newton_direction(const field::VectorField& f, const SpherePoint& p,
                           const SolverConfig& cfg) {
    return newton_direction(p, f.eval(p), f.clarke_element(p), cfg);
}

double nonmonotone_reference(std::span<const double> merits, int k, int nonmonotone_depth) {
    if (k < 0 || static_cast<std::size_t>(k) >= merits.size()) {
        throw std::invalid_argument("nonmonotone_reference: k out of range");
    }
    const int m_k = std::min(k, nonmonotone_depth);
    double best = merits[k];
    for (int j = 1; j <= m_k; ++j) best = std::max(best, merits[k - j]);
    return best;
}

LineSearchResult line_search(const field::VectorField& f, const SpherePoint& p,
                             const Direction& dir, double reference, const SolverConfig& cfg) {
    if (!(dir.slope < 0.0)) {
        throw std::invalid_argument("line_search: direction is not a descent direction");
    }
    if (!(dir.vector.base() == p)) {
        throw std::invalid_argument("line_search: direction is not based at p");
    }
    double alpha = 1.0;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
        const SpherePoint trial = geom::exp_map(dir.vector.scaled(alpha));
        if (merit(f, trial) <= reference + cfg.sigma * alpha * dir.slope) {
            return {alpha, bt, false};
        }
        alpha *= cfg.beta;
    }
    return {0.0, cfg.max_backtracks, true};
}

SolveTrace nm_solve(const field::VectorField& f, const SpherePoint& p0, const SolverConfig& cfg) {
    cfg.validate();
    const WallTimer timer;
    std::vector<IterationRecord> records;
    SpherePoint p = p0;

    for (int k = 0;; ++k) {
        const Evaluation e = evaluate(f, p);
        if (e.residual < cfg.tol_residual) {
            return SolveTrace{std::move(records), SolveStatus::Singularity, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        if (k >= cfg.max_iters) {
            return SolveTrace{std::move(records), SolveStatus::MaxIters, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        const Direction dir = newton_direction(p, e.value, f.clarke_element(p), cfg);
        if (dir.kind != DirectionKind::Newton) {
            return SolveTrace{std::move(records), SolveStatus::SingularClarke, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        if (dir.vector.norm() < kZeroDirection) {
            return SolveTrace{std::move(records), SolveStatus::StationaryPoint, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        records.push_back({k, e.residual, e.merit, 1.0, 0, dir.kind, 0, dir.slope});
        p = geom::exp_map(dir.vector);
    }
}

SolveTrace gnm_solve(const field::VectorField& f, const SpherePoint& p0, const SolverConfig& cfg) {
    cfg.validate();
    const WallTimer timer;
    std::vector<IterationRecord> records;
    std::vector<double> merit_history;
    SpherePoint p = p0;

    for (int k = 0;; ++k) {
        const Evaluation e = evaluate(f, p);
        if (e.residual < cfg.tol_residual) {
            return SolveTrace{std::move(records), SolveStatus::Singularity, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        if (k >= cfg.max_iters) {
            return SolveTrace{std::move(records), SolveStatus::MaxIters, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        merit_history.push_back(e.merit);

        const Direction dir = newton_direction(p, e.value, f.clarke_element(p), cfg);
        if (dir.vector.norm() < kZeroDirection) {
            return SolveTrace{std::move(records), SolveStatus::StationaryPoint, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        const int m_k = std::min(k, cfg.nonmonotone_depth);
        const double reference = nonmonotone_reference(merit_history, k, cfg.nonmonotone_depth);
        const LineSearchResult ls = line_search(f, p, dir, reference, cfg);
        if (ls.stalled) {
            return SolveTrace{std::move(records), SolveStatus::LineSearchStall, std::move(p),
                              e.residual, e.merit, timer.elapsed_s()};
        }
        records.push_back({k, e.residual, e.merit, ls.alpha, ls.backtracks, dir.kind, m_k,
                           dir.slope});
        p = geom::exp_map(dir.vector.scaled(ls.alpha));
    }
}

bool verify_certificate_records(std::span<const IterationRecord> recs, double final_merit,
                                const SolverConfig& cfg) {
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const IterationRecord& r = recs[k];
        if (r.k != static_cast<int>(k)) return false;
        if (r.m_k != std::min(static_cast<int>(k), cfg.nonmonotone_depth)) return false;
        if (!(r.slope < 0.0)) return false;

        double reference = r.merit;
        for (int j = 1; j <= r.m_k; ++j) reference = std::max(reference, recs[k - j].merit);
        const double next_merit = k + 1 < recs.size() ? recs[k + 1].merit : final_merit;
        if (!(next_merit <= reference + cfg.sigma * r.alpha * r.slope)) return false;
    }
    return true;
}

bool verify_certificates(const SolveTrace& trace, const SolverConfig& cfg) {
    return verify_certificate_records(trace.iterates, trace.final_merit, cfg);
}

} // namespace ssn::solver
