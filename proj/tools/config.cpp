#include "config.hpp"

#include "abc/csv.hpp"

#include <fstream>
#include <sstream>

namespace abclab {

using nlohmann::json;

json default_config_json() { return config_to_json(ExperimentConfig{}); }

namespace {

template <class T>
T field(const json& j, const char* name) {
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    require(j.is_object(), "config must be a JSON object");
    const std::string ver = field<std::string>(j, "schema_version");
    require(!ver.empty() && std::stoi(ver.substr(0, ver.find('.'))) == kSchemaMajor,
            "unsupported schema_version '" + ver + "' (expected major " + std::to_string(kSchemaMajor) + ")");
    static const char* known[] = {"schema_version", "construction", "profile", "stages", "grid", "horizons", "eps",
                                  "families", "seed", "output", "hamming", "witness", "literal", "word_eps", "sigma",
                                  "max_stretch", "budget", "allow_over_budget", "max_samples", "horizon_cap"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto* k : known) ok = ok || it.key() == k;
        require(ok, "unknown config field '" + it.key() + "'");
    }

    ExperimentConfig c;
    c.construction = field<std::string>(j, "construction");
    require(c.construction == "untwisted" || c.construction == "uniquely_ergodic" || c.construction == "weak_mixing",
            "construction must be untwisted, uniquely_ergodic or weak_mixing");
    try {
        c.profile = abc::profile_from_json(j.at("profile"));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field 'profile': ") + e.what());
    }
    const json& st = j.at("stages");
    c.stage_from = field<int>(st, "from");
    c.stage_to = field<int>(st, "to");
    require(c.stage_from >= 1 && c.stage_to >= c.stage_from, "stages must satisfy 1 <= from <= to");
    require(c.stage_to <= 12, "stages.to must be <= 12");
    c.grid = field<int>(j, "grid");
    require(c.grid >= 2 && c.grid <= 512, "grid must lie in [2, 512]");
    c.horizons.clear();
    for (const auto& h : j.at("horizons")) {
        std::string s = h.is_string() ? h.get<std::string>() : std::to_string(h.get<uint64_t>());
        bool sym = s == "q_n" || s == "q_next" || s == "lprime_q";
        bool num = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos && s != "0";
        require(sym || num, "horizon '" + s + "' must be a positive integer, q_n, q_next or lprime_q");
        c.horizons.push_back(s);
    }
    require(!c.horizons.empty(), "horizons must not be empty");
    c.eps = field<std::vector<double>>(j, "eps");
    require(!c.eps.empty(), "eps must not be empty");
    for (double e : c.eps) require(e > 0 && e < 0.5, "every eps must lie in (0, 1/2)");
    for (const auto& f : j.at("families")) {
        FamilyGrid g;
        try {
            g.family = abc::ScalingFamily::parse(f.at("family").get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config field 'families': ") + e.what());
        }
        g.t = field<std::vector<double>>(f, "t");
        for (double t : g.t) require(t > 0, "family exponents t must be positive");
        c.families.push_back(g);
    }
    c.seed = field<uint64_t>(j, "seed");
    c.output = field<std::string>(j, "output");
    require(!c.output.empty(), "output must not be empty");
    const json& h = j.at("hamming");
    c.hamming.enabled = field<bool>(h, "enabled");
    c.hamming.nx = field<int>(h, "nx");
    c.hamming.ny = field<int>(h, "ny");
    c.hamming.eps = field<double>(h, "eps");
    c.hamming.samples = field<long>(h, "samples");
    require(c.hamming.nx >= 1 && c.hamming.ny >= 1 && c.hamming.nx * c.hamming.ny <= 65535, "hamming partition size out of range");
    require(c.hamming.eps > 0 && c.hamming.eps < 1, "hamming.eps must lie in (0, 1)");
    require(double(c.hamming.samples) >= 100.0 / c.hamming.eps - 1e-9, "hamming.samples must be >= 100/hamming.eps");
    c.witness = field<bool>(j, "witness");
    c.literal = field<bool>(j, "literal");
    c.word_eps = field<double>(j, "word_eps");
    require(c.word_eps > 0 && c.word_eps < 1, "word_eps must lie in (0, 1)");
    c.sigma = field<double>(j, "sigma");
    c.max_stretch = field<double>(j, "max_stretch");
    c.budget = field<double>(j, "budget");
    require(c.budget > 0, "budget must be positive");
    c.allow_over_budget = field<bool>(j, "allow_over_budget");
    c.max_samples = field<uint64_t>(j, "max_samples");
    require(c.max_samples >= 1, "max_samples must be >= 1");
    c.horizon_cap = field<uint64_t>(j, "horizon_cap");
    require(c.horizon_cap >= 1, "horizon_cap must be >= 1");
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json fam = json::array();
    for (const auto& f : c.families) fam.push_back({{"family", f.family.name()}, {"t", f.t}});
    return {{"schema_version", kSchemaVersion},
            {"construction", c.construction},
            {"profile", abc::profile_to_json(c.profile)},
            {"stages", {{"from", c.stage_from}, {"to", c.stage_to}}},
            {"grid", c.grid},
            {"horizons", c.horizons},
            {"eps", c.eps},
            {"families", fam},
            {"seed", c.seed},
            {"output", c.output},
            {"hamming", {{"enabled", c.hamming.enabled}, {"nx", c.hamming.nx}, {"ny", c.hamming.ny}, {"eps", c.hamming.eps},
                         {"samples", c.hamming.samples}}},
            {"witness", c.witness},
            {"literal", c.literal},
            {"word_eps", c.word_eps},
            {"sigma", c.sigma},
            {"max_stretch", c.max_stretch},
            {"budget", c.budget},
            {"allow_over_budget", c.allow_over_budget},
            {"max_samples", c.max_samples},
            {"horizon_cap", c.horizon_cap}};
}

std::string canonical_dump(const ExperimentConfig& c) { return config_to_json(c).dump(); }

std::string config_hash(const ExperimentConfig& c) { return abc::fnv1a_hex(canonical_dump(c)); }

std::string config_header(const ExperimentConfig& c) {
    return "# config_hash: " + config_hash(c) + "\n# config: " + canonical_dump(c) + "\n";
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

} // namespace abclab
