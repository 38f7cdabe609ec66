#include "ssn/trace_io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

namespace ssn::solver {

namespace {

using ordered_json = nlohmann::ordered_json;

DirectionKind kind_from_string(const std::string& s) {
    if (s == "newton") return DirectionKind::Newton;
    if (s == "gradient_fallback") return DirectionKind::GradientFallback;
    throw ParseError("unknown direction kind: " + s);
}

SolveStatus status_from_string(const std::string& s) {
    for (SolveStatus st : {SolveStatus::Singularity, SolveStatus::StationaryPoint,
                           SolveStatus::MaxIters, SolveStatus::LineSearchStall,
                           SolveStatus::SingularClarke}) {
        if (s == to_string(st)) return st;
    }
    throw ParseError("unknown solve status: " + s);
}

} // namespace

void write_trace_jsonl(const SolveTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    for (const IterationRecord& r : trace.iterates) {
        ordered_json j;
        j["k"] = r.k;
        j["res"] = r.residual;
        j["merit"] = r.merit;
        j["alpha"] = r.alpha;
        j["backtracks"] = r.backtracks;
        j["kind"] = to_string(r.kind);
        j["m_k"] = r.m_k;
        j["slope"] = r.slope;
        out << j.dump() << '\n';
    }
    ordered_json j;
    j["status"] = to_string(trace.status);
    j["iters"] = trace.iterations();
    j["final_res"] = trace.final_residual;
    j["final_merit"] = trace.final_merit;
    j["wall_time_s"] = trace.wall_time_s;
    out << j.dump() << '\n';
    if (!out) throw ParseError("write failed: " + path.string());
}

TraceFile read_trace_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path.string());
    TraceFile t;
    std::string line;
    bool saw_terminal = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (saw_terminal) throw ParseError("trailing records after terminal line in " + path.string());
        ordered_json j;
        try {
            j = ordered_json::parse(line);
            if (j.contains("status")) {
                t.status = status_from_string(j.at("status").get<std::string>());
                t.iterations = j.at("iters").get<int>();
                t.final_residual = j.at("final_res").get<double>();
                t.final_merit = j.at("final_merit").get<double>();
                t.wall_time_s = j.at("wall_time_s").get<double>();
                saw_terminal = true;
                continue;
            }
            IterationRecord r;
            r.k = j.at("k").get<int>();
            r.residual = j.at("res").get<double>();
            r.merit = j.at("merit").get<double>();
            r.alpha = j.at("alpha").get<double>();
            r.backtracks = j.at("backtracks").get<int>();
            r.kind = kind_from_string(j.at("kind").get<std::string>());
            r.m_k = j.at("m_k").get<int>();
            r.slope = j.at("slope").get<double>();
            t.iterates.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("invalid trace line in " + path.string() + ": " + e.what());
        }
    }
    if (!saw_terminal) throw ParseError("missing terminal record in " + path.string());
    if (t.iterations != static_cast<int>(t.iterates.size())) {
        throw ParseError("iteration count mismatch in " + path.string());
    }
    return t;
}

bool verify_certificates(const TraceFile& trace, const SolverConfig& cfg) {
    return verify_certificate_records(trace.iterates, trace.final_merit, cfg);
}

} // namespace ssn::solver
