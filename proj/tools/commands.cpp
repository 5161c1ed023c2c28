#include "commands.hpp"

#include "abc/complexity.hpp"
#include "abc/csv.hpp"
#include "abc/normest.hpp"
#include "abc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace abclab {

namespace fs = std::filesystem;
using namespace abc;

namespace {

std::ofstream open_out(const fs::path& p) {
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

bool is_seed_stage(const ExperimentConfig& c, int n) { return n == 1 && c.profile.regime != Regime::Custom; }

uint64_t word_seed(uint64_t seed, int n) { return splitmix64(seed ^ splitmix64(uint64_t(n))); }

} // namespace

std::vector<StageSystem> build_systems(const ExperimentConfig& c) {
    auto chain = build_chain(c.profile, c.stage_to);
    std::vector<StageSystem> out;
    MapPtr H = make_identity();
    for (const auto& st : chain) {
        StageSystem s;
        s.stage = st;
        if (is_seed_stage(c, st.n) || (c.construction == "weak_mixing" && st.n == 1)) {
            // a one-letter word leaves every block untwisted
            s.h = make_identity();
        } else if (c.construction == "untwisted") {
            s.h = build_untwisted_h(st, c.literal);
        } else if (c.construction == "uniquely_ergodic") {
            s.h = build_ue_h(st, default_ue_step(st));
        } else {
            const int q = int(to_long_checked(st.q, "q_n"));
            const int alphabet = st.n * st.n;
            if (alphabet > 36) throw ConstructionError("weak-mixing alphabet n^2 exceeds 36 symbols");
            s.words = sample_selection(alphabet, q, q, c.word_eps, word_seed(c.seed, st.n));
            WmOptions wo;
            wo.sigma = c.sigma;
            wo.max_stretch = c.max_stretch;
            s.h = build_wm_h(st, assemble_W(*s.words, q), wo);
        }
        H = s.h->kind() == "Identity" ? H : (H->kind() == "Identity" ? s.h : make_composite({H, s.h}));
        s.H = H;
        s.sys = make_system(H, st);
        out.push_back(std::move(s));
    }
    return out;
}

uint64_t resolve_horizon(const std::string& token, const StageParams& st, uint64_t cap) {
    BigInt v;
    if (token == "q_n") v = st.q;
    else if (token == "q_next") v = st.q_next();
    else if (token == "lprime_q") v = st.l_prime * st.q;
    else v = BigInt(token);
    if (v > BigInt(std::to_string(cap))) return cap;
    return v.get_ui();
}

double estimate_cost(const ExperimentConfig& c, const std::vector<StageParams>& chain) {
    double cost = 0;
    const double cand = double(c.grid) * c.grid;
    for (const auto& st : chain) {
        if (st.n < c.stage_from) continue;
        const BigInt qn = st.q_next();
        const double period = qn.fits_ulong_p() ? double(qn.get_ui()) : 1e300;
        for (const auto& tok : c.horizons) {
            const double L = double(resolve_horizon(tok, st, c.horizon_cap));
            const double samples = std::min({L, period, double(c.max_samples)});
            cost += double(c.eps.size()) * cand * samples;
            if (c.hamming.enabled) cost += double(c.hamming.samples) * L;
        }
        if (c.witness && c.construction == "untwisted")
            for (double e : c.eps) cost += double(witness_cardinality(st, e)) * std::min(period, 1e300);
    }
    return cost;
}

// ------------------------------------------------------------------ params

int cmd_params(const ExperimentConfig& c, const ParamsOptions& opt) {
    std::vector<StageParams> chain;
    ParamProfile profile = c.profile;
    if (!opt.chain_file.empty()) {
        auto j = load_json_file(opt.chain_file);
        profile = profile_from_json(j.at("profile"));
        chain = chain_from_json(j.at("chain"));
    } else {
        chain = build_chain(profile, c.stage_to);
    }
    auto rep = validate_chain(chain, profile);
    const fs::path dir(c.output);
    if (opt.chain_file.empty()) {
        auto os = open_out(dir / "chain.json");
        nlohmann::json j{{"schema_version", kSchemaVersion},
                         {"config_hash", config_hash(c)},
                         {"profile", profile_to_json(profile)},
                         {"chain", chain_to_json(chain)}};
        os << j.dump(2) << "\n";
    }
    {
        auto os = open_out(dir / (opt.chain_file.empty() ? "validation.txt" : "revalidation.txt"));
        os << config_header(c) << rep.text();
    }
    std::cout << rep.text();
    return rep.ok() ? kOk : kValidation;
}

// ------------------------------------------------------------------ run

int cmd_run(const ExperimentConfig& c) {
    auto chain = build_chain(c.profile, c.stage_to);
    const double cost = estimate_cost(c, chain);
    if (cost > c.budget && !c.allow_over_budget) {
        std::ostringstream os;
        os << "estimated " << fmt_double(cost) << " orbit evaluations exceed the budget " << fmt_double(c.budget)
           << " (use --allow-over-budget)";
        throw BudgetError(os.str());
    }
    auto systems = build_systems(c);
    const fs::path dir(c.output);
    const std::string header = config_header(c);

    std::vector<CountRecord> records;
    std::ostringstream summary, witness_csv, packing_csv;
    witness_csv << header << "stage,eps,count,expected,all_separated,partial,horizon,min_separation,failures\n";
    packing_csv << header << "stage,horizon,eps,cover,sep,sep2,consistent\n";
    bool all_ok = true;

    for (const auto& s : systems) {
        const auto& st = s.stage;
        if (st.n < c.stage_from) continue;
        if (s.words) {
            auto os = open_out(dir / ("words_stage" + std::to_string(st.n) + ".txt"));
            write_selection(os, *s.words);
        }
        for (double eps : c.eps) {
            std::set<uint64_t> seen;
            for (const auto& tok : c.horizons) {
                const uint64_t L = resolve_horizon(tok, st, c.horizon_cap);
                if (!seen.insert(L).second) continue;
                BowenConfig cfg{L, eps, c.grid, {}, 1, c.max_samples};
                auto tab = bowen_table(s.sys, cfg);
                const bool sampled = tab.samples < std::min<uint64_t>(L, s.sys.alpha_next.den().fits_ulong_p()
                                                                              ? s.sys.alpha_next.den().get_ui()
                                                                              : L);
                auto pc = packing_consistency(tab, eps);
                all_ok = all_ok && pc.ok();
                packing_csv << st.n << "," << L << "," << fmt_double(eps) << "," << pc.cover << "," << pc.sep << ","
                            << pc.sep2 << "," << (pc.ok() ? "true" : "false") << "\n";
                records.push_back({st.n, to_decimal(st.q), L, eps, "separated_lower", pc.sep, sampled});
                records.push_back({st.n, to_decimal(st.q), L, eps, "cover_upper", pc.cover, sampled});
            }
            if (c.witness && c.construction == "untwisted" && !is_seed_stage(c, st.n)) {
                auto w = witness_untwisted(s.sys, eps, uint64_t(c.budget));
                const long expected = witness_cardinality(st, eps);
                witness_csv << st.n << "," << fmt_double(eps) << "," << w.count << "," << expected << ","
                            << (w.all_separated ? "true" : "false") << "," << (w.partial ? "true" : "false") << ","
                            << w.horizon << "," << fmt_double(w.min_separation) << "," << w.failures.size() << "\n";
                summary << (w.all_separated && !w.partial ? "PASS" : "FAIL") << " witness separation stage " << st.n
                        << " eps " << fmt_double(eps) << ": " << w.count << " points, " << w.failures.size()
                        << " unseparated pairs" << (w.partial ? " (partial horizon)" : "") << "\n";
                all_ok = all_ok && w.all_separated;
                if (w.all_separated) records.push_back({st.n, to_decimal(st.q), w.horizon, eps, "witness", w.count, w.partial});
            }
        }
        if (c.hamming.enabled) {
            auto part = Partition::grid(c.hamming.nx, c.hamming.ny);
            std::set<uint64_t> seen;
            for (const auto& tok : c.horizons) {
                const uint64_t L = resolve_horizon(tok, st, c.horizon_cap);
                if (!seen.insert(L).second) continue;
                auto hr = hamming_cover(s.sys, part, L, c.hamming.eps, c.hamming.samples, c.seed ^ uint64_t(st.n));
                records.push_back({st.n, to_decimal(st.q), L, c.hamming.eps, "hamming_cover", hr.count, true});
            }
        }
    }
    summary << (all_ok ? "PASS" : "FAIL") << " packing/covering consistency and witness checks\n";

    std::vector<FamilySpec> fams;
    for (const auto& f : c.families) fams.push_back({f.family, f.t});
    auto rep = slow_entropy_report(records, fams);
    for (const auto& fl : rep.flags)
        summary << "trend " << fl.family << " t=" << fmt_double(fl.t) << " " << fl.kind << ": " << trend_name(fl.trend) << "\n";

    {
        auto os = open_out(dir / "counts.csv");
        os << header;
        write_report_csv(os, rep);
    }
    {
        auto os = open_out(dir / "packing.csv");
        os << packing_csv.str();
    }
    if (c.witness && c.construction == "untwisted") {
        auto os = open_out(dir / "witness.csv");
        os << witness_csv.str();
    }
    {
        auto os = open_out(dir / "summary.txt");
        os << header << summary.str();
    }
    std::cout << summary.str();
    return all_ok ? kOk : kValidation;
}

// ------------------------------------------------------------------ plotdata

int cmd_plotdata(const std::vector<std::string>& inputs, const std::string& outdir, const std::vector<std::string>& families) {
    struct Curve {
        std::string family, t, kind;
        std::vector<std::pair<std::string, std::string>> rows;
    };
    std::map<std::tuple<std::string, std::string, std::string>, Curve> curves;
    std::vector<std::string> order;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open report '" + path + "'");
        std::string line;
        std::vector<std::string> cols;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto f = split_csv_line(line);
            if (cols.empty()) {
                cols = f;
                for (const char* need : {"horizon", "count_kind", "family", "t", "log_ratio"})
                    if (std::find(cols.begin(), cols.end(), need) == cols.end())
                        throw std::runtime_error("report '" + path + "' is missing column '" + need + "'");
                continue;
            }
            auto get = [&](const char* name) {
                size_t i = size_t(std::find(cols.begin(), cols.end(), name) - cols.begin());
                return i < f.size() ? f[i] : std::string();
            };
            const std::string fam = get("family");
            if (fam.empty()) continue;
            if (!families.empty() && std::find(families.begin(), families.end(), fam) == families.end()) continue;
            auto key = std::make_tuple(fam, get("t"), get("count_kind"));
            auto& cv = curves[key];
            if (cv.family.empty()) {
                cv.family = fam;
                cv.t = get("t");
                cv.kind = get("count_kind");
            }
            cv.rows.push_back({get("horizon"), get("log_ratio")});
        }
    }
    fs::create_directories(outdir);
    auto man = open_out(fs::path(outdir) / "manifest.csv");
    man << "file,family,t,count_kind,rows\n";
    int idx = 0;
    for (auto& [key, cv] : curves) {
        const std::string name = "curve_" + std::to_string(idx++) + ".dat";
        auto os = open_out(fs::path(outdir) / name);
        os << "# " << cv.family << " t=" << cv.t << " " << cv.kind << "\n";
        for (const auto& [h, r] : cv.rows) os << h << " " << r << "\n";
        man << name << "," << cv.family << "," << cv.t << "," << cv.kind << "," << cv.rows.size() << "\n";
    }
    std::cout << idx << " curves written to " << outdir << "\n";
    return kOk;
}

// ------------------------------------------------------------------ words

int cmd_words(const WordsOptions& opt) {
    WordSelection sel;
    if (!opt.verify.empty()) {
        std::ifstream in(opt.verify);
        if (!in) throw std::runtime_error("cannot open '" + opt.verify + "'");
        sel = read_selection(in);
    } else {
        sel = sample_selection(opt.s, opt.k, opt.N, opt.eps, opt.seed);
        if (!opt.out.empty()) {
            auto os = open_out(fs::absolute(opt.out));
            write_selection(os, sel);
        }
    }
    auto rep = verify_selection(sel);
    std::cout << rep.text() << "\n";
    return rep.ok() ? kOk : kValidation;
}

// ------------------------------------------------------------------ norms

int cmd_norms(const ExperimentConfig& c, int grid, double fd_step) {
    auto systems = build_systems(c);
    std::vector<NormRecord> rows;
    for (const auto& s : systems) {
        if (s.stage.n < c.stage_from) continue;
        const std::string n = std::to_string(s.stage.n);
        rows.push_back({"h_" + n + " " + s.h->kind(), triple_norm(*s.h, 1, grid, fd_step)});
        rows.push_back({"H_" + n + " " + s.H->kind(), triple_norm(*s.H, 1, grid, fd_step)});
    }
    auto os = open_out(fs::path(c.output) / "norms.csv");
    os << config_header(c);
    write_norm_csv(os, rows);
    write_norm_csv(std::cout, rows);
    return kOk;
}

// ------------------------------------------------------------------ describe

int cmd_describe(const ExperimentConfig& c) {
    std::cout << config_header(c);
    auto systems = build_systems(c);
    for (const auto& s : systems) {
        const auto& st = s.stage;
        std::cout << "stage " << st.n << ": q=" << to_decimal(st.q) << " p=" << to_decimal(st.p) << " l=" << to_decimal(st.l)
                  << " l'=" << to_decimal(st.l_prime) << " eps=" << st.eps.str() << " alpha_next=" << s.sys.alpha_next.str()
                  << "\n";
        s.H->describe(std::cout, 2);
    }
    return kOk;
}

} // namespace abclab
