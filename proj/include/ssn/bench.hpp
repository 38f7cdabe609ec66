#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ssn/solver.hpp"

// Batch experiment harness: many random instances per dimension, solved by
// GNM at several nonmonotone depths and optionally by the pure Newton
// method, aggregated into per-(method, dimension) rows. Instances are
// independent, so cells fan out across OpenMP threads; per-run results are
// deterministic functions of the seeds and aggregation runs in seed order,
// so reports are identical for any thread count.

namespace ssn::bench {

struct BenchPlan {
    std::vector<std::size_t> dimensions{50, 100, 200};
    int instances_per_dim = 50;
    std::vector<int> m_values{0, 1, 5};
    bool include_pure_newton = false;
    std::uint64_t base_seed = 1;
    int repeats_per_timing = 3;
    double density = 0.003;
    solver::SolverConfig solver;
    int threads = 0;          // 0: OpenMP default
    bool measure_time = true; // false: skip timing, report zero times

    void validate() const; // throws ConfigError
};

struct BenchRow {
    std::string method;
    std::size_t dimension = 0;
    double solved_percent = 0.0;
    double avg_iters_solved = 0.0; // over solved runs only
    double avg_time_s = 0.0;       // over solved runs only
    int n_runs = 0;
};

/// One (method, instance) solve summary, the JSONL unit.
struct RunRecord {
    std::string method;
    std::size_t dim = 0;
    std::uint64_t instance_seed = 0;
    std::string status;
    int iters = 0;
    double res_final = 0.0; // NaN when the instance could not be generated
    double time_s = 0.0;
};

struct BatchResult {
    std::vector<BenchRow> rows;
    std::vector<RunRecord> runs;
};

std::string gnm_label(int m);
inline const char* nm_label() { return "NM"; }

BatchResult run_batch(const BenchPlan& plan);

/// Rebuilds rows from raw run records (deterministic method/dimension order).
std::vector<BenchRow> aggregate_runs(const std::vector<RunRecord>& runs);

/// CSV report, 6 significant digits, header
/// method,dimension,solved_percent,avg_iters_solved[,avg_time_s],n_runs.
void write_report(const std::vector<BenchRow>& rows, const std::filesystem::path& path,
                  bool include_timing = true);

void write_runs_jsonl(const std::vector<RunRecord>& runs, const std::filesystem::path& path);

std::vector<RunRecord> read_runs_jsonl(const std::filesystem::path& path);

} // namespace ssn::bench
