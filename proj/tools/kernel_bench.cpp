#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "ssn/linalg/kernels.hpp"
#include "ssn/linalg/lu.hpp"
#include "ssn/linalg/rng.hpp"

// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce bit-identical results.

namespace {

using namespace ssn;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

linalg::DenseMatrix random_matrix(std::size_t n, std::mt19937_64& gen) {
    linalg::DenseMatrix a(n, n);
    for (double& x : a.data()) x = rng::uniform_real(gen, -1.0, 1.0);
    return a;
}

linalg::Vec random_vec(std::size_t n, std::mt19937_64& gen) {
    linalg::Vec v(n);
    for (double& x : v) x = rng::uniform_real(gen, -1.0, 1.0);
    return v;
}

template <typename F>
double time_best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void report(const char* kernel, std::size_t n, double serial_s, double parallel_s, bool identical) {
    std::printf("%-14s n=%-5zu serial %9.4f ms   omp %9.4f ms   speedup %5.2fx   %s\n", kernel, n,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP kernel benchmark"};
    std::vector<std::size_t> sizes{256, 512, 1024};
    int repeats = 5;
    app.add_option("--sizes", sizes, "matrix sizes, comma separated")->delimiter(',');
    app.add_option("--repeats", repeats, "timing repeats (best-of)");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());
    bool all_identical = true;

    for (std::size_t n : sizes) {
        std::mt19937_64 gen(rng::derive_seed(42, 0xbe7c, n));
        const linalg::DenseMatrix a = random_matrix(n, gen);
        const linalg::Vec x = random_vec(n, gen);
        linalg::Vec u = random_vec(n, gen);
        const double tau = 2.0 / linalg::dot(u, u);

        linalg::Vec y_ref, y_omp;
        double ts = time_best_of(repeats, [&] { y_ref = linalg::ref::matvec(a, x); });
        double tp = time_best_of(repeats, [&] { y_omp = linalg::matvec(a, x); });
        report("matvec", n, ts, tp, y_ref == y_omp);
        all_identical = all_identical && y_ref == y_omp;

        linalg::DenseMatrix r_ref, r_omp;
        ts = time_best_of(repeats, [&] { r_ref = linalg::ref::reflect_both(a, u, tau); });
        tp = time_best_of(repeats, [&] { r_omp = linalg::reflect_both(a, u, tau); });
        report("reflect_both", n, ts, tp, r_ref == r_omp);
        all_identical = all_identical && r_ref == r_omp;

        linalg::LuFactors lu_ref, lu_omp;
        ts = time_best_of(repeats, [&] { lu_ref = linalg::ref::lu_factor(a); });
        tp = time_best_of(repeats, [&] { lu_omp = linalg::lu_factor(a); });
        const bool lu_same = lu_ref.lu == lu_omp.lu && lu_ref.perm == lu_omp.perm &&
                             lu_ref.singular == lu_omp.singular;
        report("lu_factor", n, ts, tp, lu_same);
        all_identical = all_identical && lu_same;
    }

    if (!all_identical) {
        std::printf("FAILURE: some kernels disagree with their serial reference\n");
        return 1;
    }
    return 0;
}
