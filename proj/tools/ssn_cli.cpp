#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssn/bench.hpp"
#include "ssn/field.hpp"
#include "ssn/instance_io.hpp"
#include "ssn/linalg/rng.hpp"
#include "ssn/solver.hpp"
#include "ssn/trace_io.hpp"

// Exit codes: 0 success, 1 solve/check failure, 2 usage, 3 generation
// failure, 4 I/O or parse failure.

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitParse = 4;

void echo_params(const ordered_json& j) { std::cerr << j.dump() << '\n'; }

struct GenerateOpts {
    std::size_t n = 0;
    double density = 0.003;
    std::uint64_t seed = 0;
    std::string out;
};

struct SolveOpts {
    std::string instance;
    std::string method = "gnm";
    int m = 0;
    std::uint64_t seed = 0;
    std::string trace;
    bool start_planted = false;
    std::string config;
};

struct BenchOpts {
    std::vector<std::size_t> dims;
    int instances = 0;
    std::vector<int> m_values;
    bool include_nm = false;
    std::uint64_t seed = 0;
    int repeats = 0;
    double density = 0.0;
    int threads = 0;
    bool no_timing = false;
    std::string out_csv = "bench.csv";
    std::string out_jsonl = "bench_runs.jsonl";
    std::string plan_file;
    std::string config;
};

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ssn::ParseError("cannot open: " + path);
    try {
        ordered_json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ssn::ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

/// Applies SolverConfig keys from a config JSON; flags already parsed into
/// `cfg` win, tracked through `overridden`.
void apply_solver_config(ssn::solver::SolverConfig& cfg, const ordered_json& j,
                         const std::vector<std::string>& overridden) {
    auto flag_set = [&](const char* name) {
        return std::find(overridden.begin(), overridden.end(), name) != overridden.end();
    };
    auto pick = [&](const char* key, auto& field) {
        if (j.contains(key) && !flag_set(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    pick("tol_residual", cfg.tol_residual);
    pick("max_iters", cfg.max_iters);
    pick("sigma", cfg.sigma);
    pick("beta", cfg.beta);
    pick("M", cfg.nonmonotone_depth);
    pick("max_backtracks", cfg.max_backtracks);
    pick("solve_residual_factor", cfg.solve_residual_factor);
    pick("condition_cap", cfg.condition_cap);
}

ordered_json solver_config_json(const ssn::solver::SolverConfig& cfg) {
    ordered_json j;
    j["tol_residual"] = cfg.tol_residual;
    j["max_iters"] = cfg.max_iters;
    j["sigma"] = cfg.sigma;
    j["beta"] = cfg.beta;
    j["M"] = cfg.nonmonotone_depth;
    j["max_backtracks"] = cfg.max_backtracks;
    j["solve_residual_factor"] = cfg.solve_residual_factor;
    j["condition_cap"] = cfg.condition_cap;
    return j;
}

int run_generate(const GenerateOpts& o) {
    ordered_json echo;
    echo["subcommand"] = "generate";
    echo["n"] = o.n;
    echo["density"] = o.density;
    echo["seed"] = o.seed;
    echo["out"] = o.out;
    echo_params(echo);

    const ssn::field::AvvfInstance inst = ssn::field::generate_instance(o.n, o.density, o.seed);
    ssn::field::write_instance(inst, o.out);
    std::printf("sigma_min %.17g\n", inst.sigma_min);
    std::printf("nnz %zu\n", inst.a.nnz());
    return 0;
}

int run_solve(const SolveOpts& o, ssn::solver::SolverConfig cfg,
              const std::vector<std::string>& overridden) {
    if (!o.config.empty()) apply_solver_config(cfg, load_json_file(o.config), overridden);
    cfg.validate();

    ordered_json echo;
    echo["subcommand"] = "solve";
    echo["instance"] = o.instance;
    echo["method"] = o.method;
    echo["seed"] = o.seed;
    echo["start_planted"] = o.start_planted;
    echo["trace"] = o.trace;
    echo["solver"] = solver_config_json(cfg);
    echo_params(echo);

    const ssn::field::AvvfInstance inst = ssn::field::read_instance(o.instance);
    const ssn::field::AvvfField field(inst);
    const ssn::geom::SpherePoint p0 = o.start_planted
                                          ? inst.planted_solution
                                          : ssn::field::random_start(inst.n, o.seed);
    const ssn::solver::SolveTrace trace = o.method == "nm" ? ssn::solver::nm_solve(field, p0, cfg)
                                                           : ssn::solver::gnm_solve(field, p0, cfg);
    if (!o.trace.empty()) ssn::solver::write_trace_jsonl(trace, o.trace);

    std::printf("status %s\n", ssn::solver::to_string(trace.status));
    std::printf("iters %d\n", trace.iterations());
    std::printf("final_residual %.17g\n", trace.final_residual);
    return trace.status == ssn::solver::SolveStatus::Singularity ? 0 : kExitFailure;
}

ssn::bench::BenchPlan build_plan(const BenchOpts& o, const CLI::App* sub,
                                 ssn::solver::SolverConfig cfg,
                                 const std::vector<std::string>& overridden) {
    ssn::bench::BenchPlan plan;
    plan.solver = cfg;

    if (!o.plan_file.empty()) {
        const ordered_json j = load_json_file(o.plan_file);
        if (j.contains("dimensions")) plan.dimensions = j.at("dimensions").get<std::vector<std::size_t>>();
        if (j.contains("instances_per_dim")) plan.instances_per_dim = j.at("instances_per_dim").get<int>();
        if (j.contains("M_values")) plan.m_values = j.at("M_values").get<std::vector<int>>();
        if (j.contains("include_pure_newton")) {
            plan.include_pure_newton = j.at("include_pure_newton").get<bool>();
        }
        if (j.contains("base_seed")) plan.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("repeats_per_timing")) plan.repeats_per_timing = j.at("repeats_per_timing").get<int>();
        if (j.contains("density")) plan.density = j.at("density").get<double>();
        if (j.contains("threads")) plan.threads = j.at("threads").get<int>();
        if (j.contains("solver")) apply_solver_config(plan.solver, j.at("solver"), overridden);
    }

    if (sub->count("--dims") > 0) plan.dimensions = o.dims;
    if (sub->count("--instances") > 0) plan.instances_per_dim = o.instances;
    if (sub->count("--M") > 0) plan.m_values = o.m_values;
    if (o.include_nm) plan.include_pure_newton = true;
    if (sub->count("--seed") > 0) plan.base_seed = o.seed;
    if (sub->count("--repeats") > 0) plan.repeats_per_timing = o.repeats;
    if (sub->count("--density") > 0) plan.density = o.density;
    if (sub->count("--threads") > 0) plan.threads = o.threads;
    plan.measure_time = !o.no_timing;
    return plan;
}

int run_bench(const ssn::bench::BenchPlan& plan, const BenchOpts& o) {
    ordered_json echo;
    echo["subcommand"] = "bench";
    echo["dimensions"] = plan.dimensions;
    echo["instances_per_dim"] = plan.instances_per_dim;
    echo["M_values"] = plan.m_values;
    echo["include_pure_newton"] = plan.include_pure_newton;
    echo["base_seed"] = plan.base_seed;
    echo["repeats_per_timing"] = plan.repeats_per_timing;
    echo["density"] = plan.density;
    echo["threads"] = plan.threads;
    echo["measure_time"] = plan.measure_time;
    echo["out_csv"] = o.out_csv;
    echo["out_jsonl"] = o.out_jsonl;
    echo["solver"] = solver_config_json(plan.solver);
    echo_params(echo);

    const ssn::bench::BatchResult result = ssn::bench::run_batch(plan);
    ssn::bench::write_report(result.rows, o.out_csv, plan.measure_time);
    ssn::bench::write_runs_jsonl(result.runs, o.out_jsonl);

    for (const ssn::bench::BenchRow& r : result.rows) {
        std::printf("%-12s n=%-5zu solved %6.2f%%  avg_iters %7.2f  avg_time %.4gs  (%d runs)\n",
                    r.method.c_str(), r.dimension, r.solved_percent, r.avg_iters_solved,
                    r.avg_time_s, r.n_runs);
    }
    std::printf("report: %s\nruns:   %s\n", o.out_csv.c_str(), o.out_jsonl.c_str());
    return 0;
}

int run_check(const std::string& path) {
    ordered_json echo;
    echo["subcommand"] = "check";
    echo["instance"] = path;
    echo_params(echo);

    const ssn::field::AvvfInstance inst = ssn::field::read_instance(path);
    const ssn::field::InstanceCheck check = ssn::field::verify_instance(inst);
    std::printf("sigma_min > 3:        %s (estimate %.6g)\n", check.sigma_ok ? "ok" : "FAIL",
                check.sigma_estimate);
    std::printf("planted residual:     %s (%.3g)\n", check.planted_residual_ok ? "ok" : "FAIL",
                check.planted_residual);
    std::printf("b reconstruction:     %s\n", check.b_reconstructs_ok ? "ok" : "FAIL");

    // Round trip: rewrite and re-read, then compare the numeric payload.
    bool roundtrip_ok = false;
    const fs::path tmp =
        fs::temp_directory_path() /
        ("ssn_check_" + std::to_string(ssn::rng::splitmix64(inst.seed ^ std::random_device{}())) +
         ".json");
    try {
        ssn::field::write_instance(inst, tmp);
        const ssn::field::AvvfInstance back = ssn::field::read_instance(tmp);
        roundtrip_ok = back.n == inst.n && back.a == inst.a && back.b == inst.b &&
                       back.planted_solution == inst.planted_solution && back.seed == inst.seed &&
                       back.density == inst.density && back.sigma_min == inst.sigma_min;
        fs::remove(tmp);
    } catch (...) {
        fs::remove(tmp);
        throw;
    }
    std::printf("file round-trip:      %s\n", roundtrip_ok ? "ok" : "FAIL");

    return check.all_ok() && roundtrip_ok ? 0 : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton-type solvers for singularities of nonsmooth vector fields on the unit sphere"};
    app.require_subcommand(1);

    GenerateOpts gen_opts;
    CLI::App* gen = app.add_subcommand("generate", "Generate a random AVVF instance file");
    gen->add_option("--n", gen_opts.n, "problem dimension (>= 2)")->required();
    gen->add_option("--density", gen_opts.density, "requested nnz fraction")
        ->capture_default_str();
    gen->add_option("--seed", gen_opts.seed, "generator seed")->capture_default_str();
    gen->add_option("--out", gen_opts.out, "output instance JSON path")->required();

    SolveOpts solve_opts;
    ssn::solver::SolverConfig solve_cfg;
    CLI::App* solve = app.add_subcommand("solve", "Solve one instance file");
    solve->add_option("--instance", solve_opts.instance, "instance JSON path")->required();
    solve->add_option("--method", solve_opts.method, "nm | gnm")
        ->check(CLI::IsMember({"nm", "gnm"}))
        ->capture_default_str();
    solve->add_option("--M", solve_cfg.nonmonotone_depth, "nonmonotone depth")
        ->capture_default_str();
    solve->add_option("--seed", solve_opts.seed, "starting-point seed")->capture_default_str();
    solve->add_option("--tol", solve_cfg.tol_residual, "residual stopping tolerance")
        ->capture_default_str();
    solve->add_option("--max-iters", solve_cfg.max_iters, "iteration cap")->capture_default_str();
    solve->add_option("--sigma", solve_cfg.sigma, "Armijo slope fraction")->capture_default_str();
    solve->add_option("--beta", solve_cfg.beta, "backtracking factor")->capture_default_str();
    solve->add_option("--trace", solve_opts.trace, "write per-iteration JSONL trace here");
    solve->add_flag("--start-planted", solve_opts.start_planted,
                    "start from the instance's planted solution");
    solve->add_option("--config", solve_opts.config, "JSON config file (flags win)");

    BenchOpts bench_opts;
    ssn::solver::SolverConfig bench_cfg;
    CLI::App* bench = app.add_subcommand("bench", "Run a batch benchmark plan");
    bench->add_option("--dims", bench_opts.dims, "dimensions, comma separated")->delimiter(',');
    bench->add_option("--instances", bench_opts.instances, "instances per dimension");
    bench->add_option("--M", bench_opts.m_values, "GNM nonmonotone depths, comma separated")
        ->delimiter(',');
    bench->add_flag("--include-nm", bench_opts.include_nm, "also run the pure Newton method");
    bench->add_option("--seed", bench_opts.seed, "base seed");
    bench->add_option("--repeats", bench_opts.repeats, "timing repeats per solve");
    bench->add_option("--density", bench_opts.density, "requested nnz fraction");
    bench->add_option("--threads", bench_opts.threads, "worker thread cap (0 = default)");
    bench->add_flag("--no-timing", bench_opts.no_timing,
                    "skip timing and drop the avg_time_s column");
    bench->add_option("--tol", bench_cfg.tol_residual, "residual stopping tolerance")
        ->capture_default_str();
    bench->add_option("--max-iters", bench_cfg.max_iters, "iteration cap")->capture_default_str();
    bench->add_option("--out-csv", bench_opts.out_csv, "report CSV path")->capture_default_str();
    bench->add_option("--out-jsonl", bench_opts.out_jsonl, "raw per-run JSONL path")
        ->capture_default_str();
    bench->add_option("--plan", bench_opts.plan_file, "JSON plan file (flags win)");
    bench->add_option("--config", bench_opts.config, "JSON solver config file (flags win)");

    std::string check_path;
    CLI::App* check = app.add_subcommand("check", "Audit an instance file's invariants");
    check->add_option("--instance", check_path, "instance JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    auto overridden_solver_flags = [](const CLI::App* sub) {
        std::vector<std::string> out;
        const std::pair<const char*, const char*> mapping[] = {
            {"--tol", "tol_residual"},       {"--max-iters", "max_iters"}, {"--sigma", "sigma"},
            {"--beta", "beta"},              {"--M", "M"},
        };
        for (const auto& [flag, key] : mapping) {
            const CLI::Option* opt = sub->get_option_no_throw(flag);
            if (opt != nullptr && opt->count() > 0) out.push_back(key);
        }
        return out;
    };

    try {
        if (gen->parsed()) return run_generate(gen_opts);
        if (solve->parsed()) return run_solve(solve_opts, solve_cfg, overridden_solver_flags(solve));
        if (bench->parsed()) {
            ssn::bench::BenchPlan plan;
            if (!bench_opts.config.empty()) {
                apply_solver_config(bench_cfg, load_json_file(bench_opts.config),
                                    overridden_solver_flags(bench));
            }
            plan = build_plan(bench_opts, bench, bench_cfg, overridden_solver_flags(bench));
            return run_bench(plan, bench_opts);
        }
        if (check->parsed()) return run_check(check_path);
    } catch (const ssn::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ssn::DegenerateMatrixError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGeneration;
    } catch (const ssn::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
