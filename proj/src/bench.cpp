#include "ssn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>
#include <omp.h>

#include "ssn/linalg/rng.hpp"

namespace ssn::bench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kStreamStart = 0x7374617274000000ULL;

struct Method {
    std::string label;
    bool pure_newton = false;
    int m = 0;
};

std::vector<Method> method_list(const BenchPlan& plan) {
    std::vector<int> ms = plan.m_values;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    std::vector<Method> methods;
    for (int m : ms) methods.push_back({gnm_label(m), false, m});
    if (plan.include_pure_newton) methods.push_back({nm_label(), true, 0});
    return methods;
}

/// NM first? No: GNM rows by ascending M, NM last; dimensions ascending.
bool method_before(const std::string& a, const std::string& b) {
    const bool a_nm = a == nm_label();
    const bool b_nm = b == nm_label();
    if (a_nm != b_nm) return b_nm;
    if (a_nm) return false;
    auto parse_m = [](const std::string& s) {
        return std::stoi(s.substr(s.find('=') + 1));
    };
    return parse_m(a) < parse_m(b);
}

std::string fmt_g6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

} // namespace

std::string gnm_label(int m) { return "GNM(M=" + std::to_string(m) + ")"; }

void BenchPlan::validate() const {
    if (dimensions.empty()) throw ConfigError("bench plan: no dimensions");
    for (std::size_t d : dimensions) {
        if (d < 2) throw ConfigError("bench plan: dimensions must be >= 2");
    }
    if (instances_per_dim < 1) throw ConfigError("bench plan: instances_per_dim must be >= 1");
    if (m_values.empty() && !include_pure_newton) {
        throw ConfigError("bench plan: no methods selected");
    }
    for (int m : m_values) {
        if (m < 0) throw ConfigError("bench plan: M values must be >= 0");
    }
    if (repeats_per_timing < 1) throw ConfigError("bench plan: repeats_per_timing must be >= 1");
    if (!(density > 0.0) || density > 1.0) throw ConfigError("bench plan: density must be in (0,1]");
    if (threads < 0) throw ConfigError("bench plan: threads must be >= 0");
    solver.validate();
}

BatchResult run_batch(const BenchPlan& plan) {
    plan.validate();
    const std::vector<Method> methods = method_list(plan);
    const std::size_t n_dims = plan.dimensions.size();
    const std::size_t n_inst = static_cast<std::size_t>(plan.instances_per_dim);
    const std::size_t n_methods = methods.size();
    const std::size_t n_tasks = n_dims * n_inst;

    std::vector<RunRecord> runs(n_tasks * n_methods);
    const int team = plan.threads > 0 ? plan.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::size_t task = 0; task < n_tasks; ++task) {
        const std::size_t di = task / n_inst;
        const std::size_t ii = task % n_inst;
        const std::size_t n = plan.dimensions[di];
        const std::uint64_t inst_seed = plan.base_seed + ii;
        RunRecord* out = runs.data() + task * n_methods;

        try {
            const field::AvvfInstance inst = field::generate_instance(n, plan.density, inst_seed);
            const field::AvvfField f(inst);
            // One starting point per instance, shared by every method so the
            // columns stay comparable.
            const geom::SpherePoint p0 =
                field::random_start(n, rng::derive_seed(plan.base_seed, kStreamStart, ii));

            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                const Method& m = methods[mi];
                solver::SolverConfig cfg = plan.solver;
                cfg.nonmonotone_depth = m.m;

                auto run_once = [&] {
                    return m.pure_newton ? solver::nm_solve(f, p0, cfg)
                                         : solver::gnm_solve(f, p0, cfg);
                };
                solver::SolveTrace trace = run_once();
                double mean_time = 0.0;
                if (plan.measure_time) {
                    // Timing repeats run back-to-back on this thread.
                    double total = trace.wall_time_s;
                    for (int r = 1; r < plan.repeats_per_timing; ++r) total += run_once().wall_time_s;
                    mean_time = total / plan.repeats_per_timing;
                }
                out[mi] = RunRecord{m.label,           n,
                                    inst_seed,         to_string(trace.status),
                                    trace.iterations(), trace.final_residual,
                                    mean_time};
            }
        } catch (const DegenerateMatrixError&) {
            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                out[mi] = RunRecord{methods[mi].label, n, inst_seed, "degenerate_matrix", 0,
                                    std::numeric_limits<double>::quiet_NaN(), 0.0};
            }
        } catch (const std::exception& e) {
            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                out[mi] = RunRecord{methods[mi].label, n, inst_seed, std::string("error: ") + e.what(),
                                    0, std::numeric_limits<double>::quiet_NaN(), 0.0};
            }
        }
    }

    return BatchResult{aggregate_runs(runs), std::move(runs)};
}

std::vector<BenchRow> aggregate_runs(const std::vector<RunRecord>& runs) {
    std::map<std::string, std::map<std::size_t, std::vector<const RunRecord*>>, decltype(&method_before)>
        cells(&method_before);
    for (const RunRecord& r : runs) cells[r.method][r.dim].push_back(&r);

    std::vector<BenchRow> rows;
    for (const auto& [method, by_dim] : cells) {
        for (const auto& [dim, cell] : by_dim) {
            BenchRow row;
            row.method = method;
            row.dimension = dim;
            row.n_runs = static_cast<int>(cell.size());
            int solved = 0;
            double iters = 0.0, time = 0.0;
            for (const RunRecord* r : cell) {
                if (r->status == "singularity") {
                    ++solved;
                    iters += r->iters;
                    time += r->time_s;
                }
            }
            row.solved_percent = 100.0 * solved / static_cast<double>(row.n_runs);
            row.avg_iters_solved = solved > 0 ? iters / solved : 0.0;
            row.avg_time_s = solved > 0 ? time / solved : 0.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_report(const std::vector<BenchRow>& rows, const std::filesystem::path& path,
                  bool include_timing) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out << "method,dimension,solved_percent,avg_iters_solved";
    if (include_timing) out << ",avg_time_s";
    out << ",n_runs\n";
    for (const BenchRow& r : rows) {
        out << r.method << ',' << r.dimension << ',' << fmt_g6(r.solved_percent) << ','
            << fmt_g6(r.avg_iters_solved);
        if (include_timing) out << ',' << fmt_g6(r.avg_time_s);
        out << ',' << r.n_runs << '\n';
    }
    if (!out) throw ParseError("write failed: " + path.string());
}

void write_runs_jsonl(const std::vector<RunRecord>& runs, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    for (const RunRecord& r : runs) {
        ordered_json j;
        j["method"] = r.method;
        j["dim"] = r.dim;
        j["instance_seed"] = r.instance_seed;
        j["status"] = r.status;
        j["iters"] = r.iters;
        if (std::isfinite(r.res_final)) {
            j["res_final"] = r.res_final;
        } else {
            j["res_final"] = nullptr;
        }
        j["time_s"] = r.time_s;
        out << j.dump() << '\n';
    }
    if (!out) throw ParseError("write failed: " + path.string());
}

std::vector<RunRecord> read_runs_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path.string());
    std::vector<RunRecord> runs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const ordered_json j = ordered_json::parse(line);
            RunRecord r;
            r.method = j.at("method").get<std::string>();
            r.dim = j.at("dim").get<std::size_t>();
            r.instance_seed = j.at("instance_seed").get<std::uint64_t>();
            r.status = j.at("status").get<std::string>();
            r.iters = j.at("iters").get<int>();
            r.res_final = j.at("res_final").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                      : j.at("res_final").get<double>();
            r.time_s = j.at("time_s").get<double>();
            runs.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("invalid run record in " + path.string() + ": " + e.what());
        }
    }
    return runs;
}

} // namespace ssn::bench
