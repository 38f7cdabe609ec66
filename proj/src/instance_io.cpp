#include "ssn/instance_io.hpp"

#include <fstream>

#include <json.hpp>

namespace ssn::field {

namespace {

constexpr int kFormatVersion = 1;

using ordered_json = nlohmann::ordered_json;

} // namespace

void write_instance(const AvvfInstance& inst, const std::filesystem::path& path) {
    ordered_json j;
    j["version"] = kFormatVersion;
    j["n"] = inst.n;
    j["seed"] = inst.seed;
    j["density"] = inst.density;
    j["sigma_min"] = inst.sigma_min;
    ordered_json entries = ordered_json::array();
    for (const linalg::Triplet& t : inst.a.to_triplets()) {
        entries.push_back(ordered_json::array({t.row, t.col, t.value}));
    }
    j["A"] = std::move(entries);
    j["b"] = inst.b;
    j["p_star"] = inst.planted_solution.coords();

    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw ParseError("write failed: " + path.string());
}

AvvfInstance read_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
    }
    try {
        if (j.at("version").get<int>() != kFormatVersion) {
            throw ParseError("unsupported instance format version in " + path.string());
        }
        const auto n = j.at("n").get<std::size_t>();
        std::vector<linalg::Triplet> entries;
        for (const auto& e : j.at("A")) {
            if (!e.is_array() || e.size() != 3) throw ParseError("bad A entry in " + path.string());
            entries.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(),
                               e[2].get<double>()});
        }
        auto a = linalg::SparseCsr::from_triplets(n, std::move(entries));
        auto b = j.at("b").get<linalg::Vec>();
        if (b.size() != n) throw ParseError("b has wrong length in " + path.string());
        geom::SpherePoint planted(j.at("p_star").get<linalg::Vec>());
        if (planted.dim() != n) throw ParseError("p_star has wrong length in " + path.string());
        return AvvfInstance{n,
                            std::move(a),
                            std::move(b),
                            std::move(planted),
                            j.at("seed").get<std::uint64_t>(),
                            j.at("density").get<double>(),
                            j.at("sigma_min").get<double>()};
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) { // json access, geometry or triplet validation
        throw ParseError("invalid instance file " + path.string() + ": " + e.what());
    }
}

} // namespace ssn::field
