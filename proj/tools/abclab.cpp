// abclab: build AbC stages, measure Bowen/Hamming complexity and write reports.
#include "commands.hpp"
#include "config.hpp"

#include "abc/complexity.hpp"
#include "abc/mapnode.hpp"
#include "abc/words.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <iostream>

using namespace abclab;

namespace {

struct Overrides {
    std::string config_file;
    std::optional<uint64_t> seed;
    std::optional<int> grid, from, to;
    std::vector<double> eps;
    std::optional<std::string> out, construction;
    bool allow_over_budget = false;
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("-c,--config", o.config_file, "experiment config (JSON)");
    app->add_option("--seed", o.seed, "RNG seed");
    app->add_option("--grid", o.grid, "candidate grid resolution g (g x g points)");
    app->add_option("--from", o.from, "first stage");
    app->add_option("--to", o.to, "last stage");
    app->add_option("--eps", o.eps, "Bowen radii");
    app->add_option("-o,--out", o.out, "output directory");
    app->add_option("--construction", o.construction, "untwisted | uniquely_ergodic | weak_mixing");
    app->add_flag("--allow-over-budget", o.allow_over_budget, "run even if the evaluation estimate exceeds the budget");
}

// defaults < file < flags
ExperimentConfig resolve(const Overrides& o) {
    nlohmann::json j = default_config_json();
    if (!o.config_file.empty()) j.merge_patch(load_json_file(o.config_file));
    if (o.seed) j["seed"] = *o.seed;
    if (o.grid) j["grid"] = *o.grid;
    if (o.from) j["stages"]["from"] = *o.from;
    if (o.to) j["stages"]["to"] = *o.to;
    if (!o.eps.empty()) j["eps"] = o.eps;
    if (o.out) j["output"] = *o.out;
    if (o.construction) j["construction"] = *o.construction;
    if (o.allow_over_budget) j["allow_over_budget"] = true;
    return config_from_json(j);
}

void set_threads() {
    if (const char* env = std::getenv("ABCLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"abclab - slow-entropy experiments for AbC diffeomorphisms of the torus"};
    app.require_subcommand(1);
    set_threads();

    Overrides o;
    ParamsOptions popt;
    auto* params = app.add_subcommand("params", "build and validate a parameter chain");
    add_common(params, o);
    params->add_option("--chain", popt.chain_file, "re-validate an emitted chain file");

    auto* run = app.add_subcommand("run", "run complexity measurements");
    add_common(run, o);

    std::vector<std::string> reports, fams;
    std::string plot_out = "plotdata";
    auto* plot = app.add_subcommand("plotdata", "extract two-column curves from report CSVs");
    plot->add_option("reports", reports, "counts.csv files")->required();
    plot->add_option("-o,--out", plot_out, "output directory");
    plot->add_option("--family", fams, "restrict to these families");

    WordsOptions wopt;
    auto* words = app.add_subcommand("words", "sample or verify a word selection");
    words->add_option("--s", wopt.s, "alphabet size");
    words->add_option("--k", wopt.k, "word length");
    words->add_option("--N", wopt.N, "number of words");
    words->add_option("--eps", wopt.eps, "overlap slack");
    words->add_option("--seed", wopt.seed, "RNG seed");
    words->add_option("-o,--out", wopt.out, "selection file to write");
    words->add_option("--verify", wopt.verify, "verify an existing selection file");

    int norm_grid = 128;
    double fd_step = 1e-6;
    auto* norms = app.add_subcommand("norms", "finite-difference C^1 norms of the stage conjugacies");
    add_common(norms, o);
    norms->add_option("--norm-grid", norm_grid, "evaluation grid");
    norms->add_option("--fd-step", fd_step, "finite-difference step");

    auto* describe = app.add_subcommand("describe", "print stage parameters and map trees");
    add_common(describe, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*params) return cmd_params(resolve(o), popt);
        if (*run) return cmd_run(resolve(o));
        if (*plot) return cmd_plotdata(reports, plot_out, fams);
        if (*words) return cmd_words(wopt);
        if (*norms) return cmd_norms(resolve(o), norm_grid, fd_step);
        if (*describe) return cmd_describe(resolve(o));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kValidation;
    } catch (const abc::ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kValidation;
    } catch (const abc::ComplexityError& e) {
        std::cerr << "invalid measurement setup: " << e.what() << "\n";
        return kValidation;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const abc::ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return kConstruction;
    } catch (const abc::WordError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return kConstruction;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOther;
}
