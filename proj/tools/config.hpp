#pragma once

#include "abc/params.hpp"
#include "abc/scaling.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace abclab {

enum ExitCode { kOk = 0, kOther = 1, kValidation = 2, kBudget = 3, kConstruction = 4 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kSchemaMajor = 1;
constexpr const char* kSchemaVersion = "1.0";

struct FamilyGrid {
    abc::ScalingFamily family;
    std::vector<double> t;
};

struct HammingSpec {
    bool enabled = false;
    int nx = 8, ny = 8;
    double eps = 0.2;
    long samples = 2000;
};

struct ExperimentConfig {
    std::string construction = "untwisted";   // untwisted | uniquely_ergodic | weak_mixing
    abc::ParamProfile profile;
    int stage_from = 2, stage_to = 3;
    int grid = 24;
    // integers, or "q_n", "q_next", "lprime_q"
    std::vector<std::string> horizons{"1", "q_n", "q_next"};
    std::vector<double> eps{0.125};
    std::vector<FamilyGrid> families;
    uint64_t seed = 1;
    std::string output = "abclab_out";
    HammingSpec hamming;
    bool witness = true;
    bool literal = false;
    double word_eps = 0.15;
    double sigma = 0;
    double max_stretch = 0;
    double budget = 1e9;
    bool allow_over_budget = false;
    uint64_t max_samples = 4096;
    uint64_t horizon_cap = 1ull << 40;
};

nlohmann::json default_config_json();
// Validates every field; throws ConfigError naming the field.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

// Canonical compact dump and its FNV-1a hash.
std::string canonical_dump(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);
// Comment lines "# config_hash: ..." and "# config: {...}" for output headers.
std::string config_header(const ExperimentConfig& c);

nlohmann::json load_json_file(const std::string& path);

} // namespace abclab
