#include "abc/complexity.hpp"

#include "abc/csv.hpp"
#include "abc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace abc {

// ------------------------------------------------------------------ partitions

Partition Partition::grid(int nx, int ny) {
    if (nx < 1 || ny < 1 || nx * ny > 65535) throw ComplexityError("grid partition needs 1 <= cells <= 65535");
    Partition p;
    p.nx_ = nx;
    p.ny_ = ny;
    return p;
}

Partition Partition::pushforward(int nx, int ny, MapPtr node) {
    Partition p = grid(nx, ny);
    p.node_ = std::move(node);
    return p;
}

int Partition::label(Pt p) const {
    if (node_) p = node_->inverse(p);
    int cx = std::min(nx_ - 1, int(p.x * nx_));
    int cy = std::min(ny_ - 1, int(p.y * ny_));
    return cy * nx_ + cx;
}

std::string Partition::name() const {
    std::string s = "grid(" + std::to_string(nx_) + "x" + std::to_string(ny_) + ")";
    return node_ ? "pushforward " + s : s;
}

// ------------------------------------------------------------------ Bowen estimators

void validate_config(const BowenConfig& cfg) {
    if (cfg.n_time < 1) throw ComplexityError("n_time must be >= 1");
    if (!(cfg.eps > 0)) throw ComplexityError("eps must be positive");
    if (cfg.stride < 1) throw ComplexityError("stride must be >= 1");
    if (cfg.grid > 0) {
        if (!(cfg.eps > 2.0 / cfg.grid))
            throw ComplexityError("candidate grid too coarse: need eps > 2/g (eps=" + fmt_double(cfg.eps) +
                                  ", g=" + std::to_string(cfg.grid) + ")");
    } else if (cfg.points.empty()) {
        throw ComplexityError("no candidate points");
    }
}

std::vector<Pt> candidate_points(const BowenConfig& cfg) {
    if (cfg.grid <= 0) return cfg.points;
    std::vector<Pt> pts;
    pts.reserve(size_t(cfg.grid) * size_t(cfg.grid));
    for (int i = 0; i < cfg.grid; ++i)
        for (int j = 0; j < cfg.grid; ++j) pts.push_back({double(j) / cfg.grid, double(i) / cfg.grid});
    return pts;
}

uint64_t effective_stride(const BowenConfig& cfg) {
    uint64_t s = std::max<uint64_t>(1, cfg.stride);
    if (cfg.max_samples > 0) s = std::max(s, (cfg.n_time + cfg.max_samples - 1) / cfg.max_samples);
    return s;
}

double bowen_dist(const AbCSystem& sys, Pt x, Pt y, uint64_t n_time) {
    if (n_time < 1) throw ComplexityError("n_time must be >= 1");
    auto a = orbit(sys, x, n_time), b = orbit(sys, y, n_time);
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, torus_dist(a[i], b[i]));
    return d;
}

OrbitTable bowen_table(const AbCSystem& sys, const BowenConfig& cfg, Backend be) {
    validate_config(cfg);
    auto pts = candidate_points(cfg);
    for (auto& p : pts) p = sys.H->inverse(p);
    // T^{q} = id for alpha = p/q, so horizons beyond one period add nothing.
    BowenConfig eff = cfg;
    const BigInt& period = sys.alpha_next.den();
    if (period.fits_ulong_p() && period.get_ui() < eff.n_time) eff.n_time = period.get_ui();
    auto off = rotation_offsets(sys, eff.n_time, effective_stride(eff));
    return be == Backend::Serial ? serial::orbit_table(sys, pts, off) : omp::orbit_table(sys, pts, off);
}

SeparatedResult greedy_separated(const OrbitTable& tab, double eps, Backend be) {
    SeparatedResult r;
    for (size_t i = 0; i < tab.points; ++i) {
        bool near = be == Backend::Serial ? serial::any_within(tab, i, r.kept, eps) : omp::any_within(tab, i, r.kept, eps);
        if (!near) r.kept.push_back(i);
    }
    r.count = long(r.kept.size());
    for (size_t i : r.kept) r.witnesses.push_back(tab.row(i)[0]);
    return r;
}

long greedy_cover(const OrbitTable& tab, double eps, Backend be) {
    std::vector<char> covered(tab.points, 0);
    long count = 0;
    for (size_t i = 0; i < tab.points; ++i) {
        if (covered[i]) continue;
        ++count;
        if (be == Backend::Serial) serial::mark_within(tab, i, eps, covered);
        else omp::mark_within(tab, i, eps, covered);
    }
    return count;
}

SeparatedResult max_separated(const AbCSystem& sys, const BowenConfig& cfg, Backend be) {
    return greedy_separated(bowen_table(sys, cfg, be), cfg.eps, be);
}

long min_cover(const AbCSystem& sys, const BowenConfig& cfg, Backend be) {
    return greedy_cover(bowen_table(sys, cfg, be), cfg.eps, be);
}

PackingConsistency packing_consistency(const OrbitTable& tab, double eps, Backend be) {
    PackingConsistency c;
    c.cover = greedy_cover(tab, eps, be);
    c.sep = greedy_separated(tab, eps, be).count;
    c.sep2 = greedy_separated(tab, 2 * eps, be).count;
    return c;
}

// ------------------------------------------------------------------ witness set

long witness_cardinality(const StageParams& stage, double eps) {
    long q = to_long_checked(stage.q, "q_n");
    long levels = long(std::floor(1.0 / (4 * eps) + 1e-9)) + 1;
    return (q / 2) * levels;
}

std::vector<Pt> witness_preimages(const StageParams& stage, double eps, long i0) {
    const long q = to_long_checked(stage.q, "q_n");
    const double en = stage.eps.to_double();
    const long levels = long(std::floor(1.0 / (4 * eps) + 1e-9)) + 1;
    std::vector<Pt> pts;
    for (long k = 0; k < levels; ++k)
        for (long j = 0; j < q / 2; ++j)
            pts.push_back({double(i0) / double(q) + 2.0 * double(j) * en / (double(q) * double(q)), 0.375 + double(k) * eps});
    return pts;
}

WitnessResult witness_untwisted(const AbCSystem& sys, double eps, uint64_t budget, long i0) {
    WitnessResult res;
    auto pre = witness_preimages(sys.stage, eps, i0);
    res.count = long(pre.size());
    const BigInt qn = sys.stage.q_next();
    uint64_t horizon = qn.fits_ulong_p() ? qn.get_ui() : UINT64_MAX;
    const uint64_t cap = std::max<uint64_t>(1, budget / std::max<size_t>(1, pre.size()));
    if (horizon > cap) {
        horizon = cap;
        res.partial = true;
    }
    res.horizon = horizon;
    auto off = rotation_offsets(sys, horizon, 1);
    OrbitTable tab = omp::orbit_table(sys, pre, off);
    res.min_separation = kFar;
    res.all_separated = true;
    for (size_t a = 0; a < pre.size(); ++a)
        for (size_t b = a + 1; b < pre.size(); ++b) {
            PairSeparation ps{a, b, 0, 0};
            const Pt* A = tab.row(a);
            const Pt* B = tab.row(b);
            for (size_t s = 0; s < tab.samples; ++s) {
                double d = torus_dist(A[s], B[s]);
                if (d > ps.dist) {
                    ps.dist = d;
                    ps.time = s;
                }
                if (d >= eps) {
                    ps.dist = d;
                    ps.time = s;
                    break;
                }
            }
            res.min_separation = std::min(res.min_separation, ps.dist);
            res.pairs.push_back(ps);
            if (ps.dist < eps) {
                res.all_separated = false;
                res.failures.push_back(ps);
            }
        }
    return res;
}

// ------------------------------------------------------------------ Hamming

std::vector<uint16_t> code_orbit(const AbCSystem& sys, const Partition& part, Pt x, uint64_t n_time) {
    auto orb = orbit(sys, x, n_time);
    std::vector<uint16_t> w;
    w.reserve(orb.size());
    for (const auto& p : orb) w.push_back(uint16_t(part.label(p)));
    return w;
}

CodeTable hamming_codes(const AbCSystem& sys, const Partition& part, uint64_t n_time, long sample_size, uint64_t seed,
                        Backend be) {
    if (n_time < 1) throw ComplexityError("n_time must be >= 1");
    Rng rng(seed, 0x68616d6d);
    std::vector<Pt> pre(static_cast<size_t>(sample_size));
    for (auto& p : pre) {
        Pt x{rng.uniform(), rng.uniform()};
        p = sys.H->inverse(x);
    }
    auto off = rotation_offsets(sys, n_time, 1);
    return be == Backend::Serial ? serial::code_table(sys, part, pre, off) : omp::code_table(sys, part, pre, off);
}

HammingResult hamming_cover_table(const CodeTable& tab, double eps, Backend be) {
    HammingResult r;
    r.samples = long(tab.points);
    std::vector<char> covered(tab.points, 0);
    const double need = (1.0 - eps) * double(tab.points);
    for (size_t i = 0; i < tab.points && double(r.covered) < need; ++i) {
        if (covered[i]) continue;
        ++r.count;
        if (be == Backend::Serial) serial::hamming_mark(tab, i, eps, covered);
        else omp::hamming_mark(tab, i, eps, covered);
        r.covered = long(std::count(covered.begin(), covered.end(), 1));
    }
    return r;
}

HammingResult hamming_cover(const AbCSystem& sys, const Partition& part, uint64_t n_time, double eps, long sample_size,
                            uint64_t seed, Backend be) {
    if (!(eps > 0 && eps < 1)) throw ComplexityError("Hamming eps must lie in (0,1)");
    if (double(sample_size) < 100.0 / eps - 1e-9) throw ComplexityError("sample_size must be >= 100/eps");
    return hamming_cover_table(hamming_codes(sys, part, n_time, sample_size, seed, be), eps, be);
}

// ------------------------------------------------------------------ sandwich / upgrade

SandwichResult sandwich_check(const AbCSystem& sys_n, const AbCSystem& sys_next, uint64_t m, double eps, int grid,
                              Backend be) {
    BowenConfig cfg{m, eps, grid, {}, 1, 0};
    OrbitTable tn = bowen_table(sys_n, cfg, be);
    OrbitTable tnext = bowen_table(sys_next, cfg, be);
    SandwichResult r;
    r.n_4eps = greedy_cover(tn, 4 * eps, be);
    r.next_2eps = greedy_cover(tnext, 2 * eps, be);
    r.n_eps = greedy_cover(tn, eps, be);
    return r;
}

UpgradeResult upgrade_check(const AbCSystem& sys_n, const AbCSystem& sys_next, uint64_t m, double eps, int grid,
                            Backend be) {
    BowenConfig cfg{m, eps, grid, {}, 1, 0};
    UpgradeResult r;
    r.next_sep_eps = greedy_separated(bowen_table(sys_next, cfg, be), eps, be).count;
    r.n_sep_2eps = greedy_separated(bowen_table(sys_n, cfg, be), 2 * eps, be).count;
    return r;
}

// ------------------------------------------------------------------ reports

const char* trend_name(Trend t) {
    switch (t) {
    case Trend::Increasing: return "increasing";
    case Trend::Decreasing: return "decreasing";
    case Trend::Flat: return "flat";
    case Trend::Undetermined: return "undetermined";
    }
    return "?";
}

ComplexityReport slow_entropy_report(const std::vector<CountRecord>& records, const std::vector<FamilySpec>& families) {
    ComplexityReport rep;
    rep.records = records;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.count < 1) continue;
        const double lm = std::log(double(r.horizon));
        for (const auto& f : families)
            for (double t : f.t) {
                double la;
                try {
                    la = log_eval(f.family, lm, t);
                } catch (const DomainError&) {
                    continue;
                }
                rep.rows.push_back({i, f.family.name(), t, std::log(double(r.count)) - la});
            }
    }
    // tail trend per (family, t, kind) over the two largest horizons
    std::map<std::tuple<std::string, double, std::string>, std::vector<std::pair<uint64_t, double>>> series;
    for (const auto& row : rep.rows) {
        const auto& r = rep.records[row.record];
        series[{row.family, row.t, r.kind}].push_back({r.horizon, row.log_ratio});
    }
    for (auto& [key, pts] : series) {
        std::stable_sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first < b.first; });
        TrendFlag fl{std::get<0>(key), std::get<2>(key), std::get<1>(key), Trend::Undetermined};
        if (pts.size() >= 2) {
            double d = pts.back().second - pts[pts.size() - 2].second;
            fl.trend = d > 1e-12 ? Trend::Increasing : (d < -1e-12 ? Trend::Decreasing : Trend::Flat);
        }
        rep.flags.push_back(fl);
    }
    return rep;
}

void write_report_csv(std::ostream& os, const ComplexityReport& rep) {
    os << "stage,horizon,eps,count_kind,count,family,t,log_ratio\n";
    for (size_t i = 0; i < rep.records.size(); ++i) {
        const auto& r = rep.records[i];
        const std::string lead = std::to_string(r.stage) + "," + std::to_string(r.horizon) + "," + fmt_double(r.eps) + "," +
                                 r.kind + "," + std::to_string(r.count) + ",";
        os << lead << ",,\n";
        for (const auto& row : rep.rows)
            if (row.record == i) os << lead << row.family << "," << fmt_double(row.t) << "," << fmt_double(row.log_ratio) << "\n";
    }
}

} // namespace abc
