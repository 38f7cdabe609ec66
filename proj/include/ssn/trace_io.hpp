#pragma once

#include <filesystem>

#include "ssn/solver.hpp"

namespace ssn::solver {

/// Writes one JSON object per iteration
///   {k, res, merit, alpha, backtracks, kind, m_k, slope}
/// followed by a terminal record
///   {status, iters, final_res, final_merit, wall_time_s}.
void write_trace_jsonl(const SolveTrace& trace, const std::filesystem::path& path);

/// Trace as re-read from disk; the final point is not serialized.
struct TraceFile {
    std::vector<IterationRecord> iterates;
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
    double final_residual = 0.0;
    double final_merit = 0.0;
    double wall_time_s = 0.0;
};

TraceFile read_trace_jsonl(const std::filesystem::path& path);

/// Certificate re-check on a trace file (same checks as verify_certificates).
bool verify_certificates(const TraceFile& trace, const SolverConfig& cfg);

} // namespace ssn::solver
