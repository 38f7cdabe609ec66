#include "ssn/field.hpp"

#include <cmath>
#include <utility>

#include "ssn/linalg/kernels.hpp"
#include "ssn/linalg/lu.hpp"
#include "ssn/linalg/rng.hpp"

namespace ssn::field {

using linalg::DenseMatrix;
using linalg::SparseCsr;
using linalg::Vec;

namespace {

constexpr std::uint64_t kStreamMatrix = 0x6d61747269780000ULL;
constexpr std::uint64_t kStreamSolution = 0x736f6c7574696f6eULL;
constexpr std::size_t kParallelCutoff = 64;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// A p - |p| - b; the same expression and evaluation order used to plant b,
/// so the residual at the planted solution is exactly zero.
Vec ambient_residual(const AvvfInstance& inst, const Vec& p) {
    Vec r = linalg::spmv(inst.a, p);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (r[i] - std::abs(p[i])) - inst.b[i];
    return r;
}

geom::SpherePoint sample_sphere_point(std::size_t n, std::mt19937_64& gen) {
    for (;;) {
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = rng::uniform_real(gen, -100.0, 100.0);
        if (linalg::norm2(x) >= 1e-12) return geom::SpherePoint::normalized(std::move(x));
    }
}

/// Largest eigenvalue of A^{-T} A^{-1} by power iteration; sigma_min is its
/// inverse square root. Returns 0 when the solves blow up.
double sigma_min_from_lu(const linalg::LuFactors& lu, std::mt19937_64& gen) {
    const std::size_t n = lu.lu.rows();
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng::uniform_real(gen, -1.0, 1.0);
    const double xn = linalg::norm2(x);
    if (xn < 1e-300) return 0.0;
    for (double& v : x) v /= xn;

    double lambda = 0.0, lambda_prev = -1.0;
    for (int it = 0; it < 500; ++it) {
        const Vec y = linalg::lu_solve(lu, x);
        lambda = linalg::dot(y, y); // Rayleigh quotient of the unit vector x
        if (!std::isfinite(lambda) || lambda <= 0.0) return 0.0;
        Vec z = linalg::lu_solve_t(lu, y);
        const double zn = linalg::norm2(z);
        if (!std::isfinite(zn) || zn < 1e-300) return 0.0;
        for (double& v : z) v /= zn;
        x = std::move(z);
        if (it >= 50 && std::abs(lambda - lambda_prev) <= 1e-13 * lambda) break;
        lambda_prev = lambda;
    }
    return 1.0 / std::sqrt(lambda);
}

std::size_t count_nonzeros(const DenseMatrix& m) {
    std::size_t nnz = 0;
    for (double x : m.data()) nnz += x != 0.0;
    return nnz;
}

/// Spreads diag(sv) to roughly `target_nnz` nonzeros with random plane
/// rotations on both sides. Orthogonal equivalences leave the singular
/// values untouched, so the spectrum of the result is exactly `sv` up to
/// rounding. Returns false if the rotation budget runs out first.
bool spread_by_rotations(DenseMatrix& b, std::size_t target_nnz, std::mt19937_64& gen) {
    const std::size_t n = b.rows();
    std::size_t nnz = count_nonzeros(b);
    const std::size_t cap =
        8 * n * (static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 8);
    for (std::size_t rot = 0; nnz < target_nnz; ++rot) {
        if (rot >= cap) return false;
        std::size_t i = rng::uniform_index(gen, n);
        std::size_t j = rng::uniform_index(gen, n - 1);
        if (j >= i) ++j;
        const double theta = rng::uniform_real(gen, 0.0, 2.0 * 3.14159265358979323846);
        const double c = std::cos(theta), s = std::sin(theta);
        const bool left = (gen() & 1) != 0;
        if (left) {
            double* ri = b.row(i);
            double* rj = b.row(j);
            for (std::size_t k = 0; k < n; ++k) {
                const double xi = ri[k], xj = rj[k];
                nnz -= (xi != 0.0) + (xj != 0.0);
                ri[k] = c * xi + s * xj;
                rj[k] = -s * xi + c * xj;
                nnz += (ri[k] != 0.0) + (rj[k] != 0.0);
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                const double xi = b(k, i), xj = b(k, j);
                nnz -= (xi != 0.0) + (xj != 0.0);
                b(k, i) = c * xi + s * xj;
                b(k, j) = -s * xi + c * xj;
                nnz += (b(k, i) != 0.0) + (b(k, j) != 0.0);
            }
        }
    }
    return true;
}

SparseCsr dense_to_csr(const DenseMatrix& m) {
    std::vector<linalg::Triplet> entries;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) {
                entries.push_back(
                    {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m(i, j)});
            }
        }
    }
    return SparseCsr::from_triplets(m.rows(), std::move(entries));
}

} // namespace

ClarkeElement::ClarkeElement(geom::SpherePoint base, DenseMatrix matrix)
    : base_(std::move(base)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != base_.dim() || matrix_.cols() != base_.dim()) {
        throw DimensionMismatchError("ClarkeElement: matrix must be n x n");
    }
    if (!matrix_.all_finite()) throw FieldError("ClarkeElement: non-finite entries");
}

geom::TangentVector avvf_eval(const AvvfInstance& inst, const geom::SpherePoint& p) {
    if (p.dim() != inst.n) throw DimensionMismatchError("avvf_eval: dimension mismatch");
    return geom::project_to_tangent(p, ambient_residual(inst, p.coords()));
}

ClarkeElement avvf_clarke_element(const AvvfInstance& inst, const geom::SpherePoint& p) {
    if (p.dim() != inst.n) throw DimensionMismatchError("avvf_clarke_element: dimension mismatch");
    const std::size_t n = inst.n;
    const Vec& pc = p.coords();

    // V = M - p (M^T p)^T - s I with M = A - diag(sgn p) and s = <p, r>.
    // M^T p = A^T p - |p| because sgn(p_i) p_i = |p_i|.
    Vec t = linalg::spmv_t(inst.a, pc);
    for (std::size_t i = 0; i < n; ++i) t[i] -= std::abs(pc[i]);
    const double s = linalg::dot(pc, ambient_residual(inst, pc));

    const auto& rp = inst.a.row_ptr();
    const auto& ci = inst.a.col_idx();
    const auto& va = inst.a.values();
    DenseMatrix v(n, n);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) {
        double* row = v.row(i);
        const double pi = pc[i];
        for (std::size_t j = 0; j < n; ++j) row[j] = -pi * t[j];
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) row[ci[k]] += va[k];
        row[i] -= sgn(pi) + s;
    }
    return ClarkeElement(p, std::move(v));
}

AvvfInstance make_instance(SparseCsr a, geom::SpherePoint planted, std::uint64_t seed,
                           double density) {
    const std::size_t n = a.dim();
    if (planted.dim() != n) throw DimensionMismatchError("make_instance: dimension mismatch");
    const double sigma = estimate_sigma_min(a);
    Vec b = linalg::spmv(a, planted.coords());
    for (std::size_t i = 0; i < n; ++i) b[i] -= std::abs(planted.coords()[i]);
    return AvvfInstance{n, std::move(a), std::move(b), std::move(planted), seed, density, sigma};
}

AvvfInstance detail::generate_instance_impl(std::size_t n, double density, std::uint64_t seed,
                                            int max_attempts, double min_raw_sigma) {
    if (n < 2) throw ConfigError("generate_instance: n must be >= 2");
    if (!(density > 0.0) || density > 1.0) throw ConfigError("generate_instance: density must be in (0,1]");

    // Density floor 5/n; diag alone already has density 1/n.
    const double effective = std::min(1.0, std::max(density, 5.0 / static_cast<double>(n)));
    const auto target_nnz = std::max(
        n, static_cast<std::size_t>(
               std::llround(effective * static_cast<double>(n) * static_cast<double>(n))));

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 gen(rng::derive_seed(seed, kStreamMatrix, static_cast<std::uint64_t>(attempt)));

        // Raw singular values uniform on (0,1), rescaled onto (3.3, 6.6).
        // The matrix is assembled around this spectrum, so sigma_min(A) > 3
        // holds by construction and the conditioning stays bounded in n.
        Vec sv(n);
        double min_sv = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            sv[i] = rng::uniform_unit(gen);
            min_sv = std::min(min_sv, sv[i]);
        }
        if (min_sv < min_raw_sigma) continue;
        double sigma_min_scaled = 1e300;
        for (std::size_t i = 0; i < n; ++i) {
            sv[i] = 3.3 * (1.0 + sv[i]);
            sigma_min_scaled = std::min(sigma_min_scaled, sv[i]);
        }

        DenseMatrix work(n, n);
        for (std::size_t i = 0; i < n; ++i) work(i, i) = sv[i];
        if (!spread_by_rotations(work, target_nnz, gen)) continue;
        SparseCsr a = dense_to_csr(work);

        std::mt19937_64 pgen(rng::derive_seed(seed, kStreamSolution, 0));
        geom::SpherePoint planted = sample_sphere_point(n, pgen);
        Vec b = linalg::spmv(a, planted.coords());
        for (std::size_t i = 0; i < n; ++i) b[i] -= std::abs(planted.coords()[i]);
        return AvvfInstance{n,    std::move(a), std::move(b), std::move(planted),
                            seed, density,     sigma_min_scaled};
    }
    throw DegenerateMatrixError("generate_instance: all attempts produced a degenerate spectrum");
}

AvvfInstance generate_instance(std::size_t n, double density, std::uint64_t seed) {
    return detail::generate_instance_impl(n, density, seed, 20, 1e-8);
}

geom::SpherePoint random_start(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ConfigError("random_start: n must be >= 2");
    std::mt19937_64 gen(seed);
    return sample_sphere_point(n, gen);
}

double estimate_sigma_min(const SparseCsr& a) {
    const linalg::LuFactors lu = linalg::lu_factor(a.to_dense());
    if (lu.singular) return 0.0;
    std::mt19937_64 gen(0x5eed0f5eedULL);
    return sigma_min_from_lu(lu, gen);
}

InstanceCheck verify_instance(const AvvfInstance& inst) {
    InstanceCheck c;
    c.sigma_estimate = estimate_sigma_min(inst.a);
    c.sigma_ok = c.sigma_estimate > 3.0;
    c.planted_residual = avvf_eval(inst, inst.planted_solution).norm();
    c.planted_residual_ok = c.planted_residual <= 1e-10;
    Vec b = linalg::spmv(inst.a, inst.planted_solution.coords());
    for (std::size_t i = 0; i < inst.n; ++i) b[i] -= std::abs(inst.planted_solution.coords()[i]);
    c.b_reconstructs_ok = b == inst.b;
    return c;
}

} // namespace ssn::field
