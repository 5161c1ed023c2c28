#pragma once

#include "config.hpp"

#include "abc/system.hpp"
#include "abc/words.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abclab {

struct StageSystem {
    abc::StageParams stage;
    abc::MapPtr h;   // conjugacy added at this stage
    abc::MapPtr H;   // accumulated conjugacy
    abc::AbCSystem sys;
    std::optional<abc::WordSelection> words;
};

// Stages 1..config.stage_to; regime seed stages (n = 1, non-custom) use the identity.
std::vector<StageSystem> build_systems(const ExperimentConfig& c);

uint64_t resolve_horizon(const std::string& token, const abc::StageParams& st, uint64_t cap);

// Orbit evaluations the run would perform.
double estimate_cost(const ExperimentConfig& c, const std::vector<abc::StageParams>& chain);

struct ParamsOptions {
    std::string chain_file;  // re-validate this chain instead of building one
};

int cmd_params(const ExperimentConfig& c, const ParamsOptions& opt);
int cmd_run(const ExperimentConfig& c);
int cmd_plotdata(const std::vector<std::string>& inputs, const std::string& outdir, const std::vector<std::string>& families);

struct WordsOptions {
    int s = 4, k = 2000, N = 40;
    double eps = 1.0 / 16;
    uint64_t seed = 1;
    std::string out;
    std::string verify;
};
int cmd_words(const WordsOptions& opt);

int cmd_norms(const ExperimentConfig& c, int grid, double fd_step);
int cmd_describe(const ExperimentConfig& c);

} // namespace abclab
