#pragma once

#include "abc/kernels.hpp"
#include "abc/scaling.hpp"
#include "abc/system.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace abc {

class ComplexityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grid A_{nx,ny}, optionally pushed forward by a map: label(p) = base label of node^{-1}(p).
class Partition {
public:
    static Partition grid(int nx, int ny);
    static Partition pushforward(int nx, int ny, MapPtr node);
    int label(Pt p) const;
    int cells() const { return nx_ * ny_; }
    // Sup-metric diameter of a base cell.
    double cell_diameter() const { return std::max(1.0 / nx_, 1.0 / ny_); }
    std::string name() const;

private:
    int nx_ = 1, ny_ = 1;
    MapPtr node_;
};

struct BowenConfig {
    uint64_t n_time = 1;
    double eps = 0.1;
    int grid = 0;                 // g > 0: g x g candidates; otherwise `points`
    std::vector<Pt> points;
    uint64_t stride = 1;
    uint64_t max_samples = 0;     // 0: no cap; otherwise stride grows until samples <= cap
};

// Row-major candidates (j/g, i/g), i = row (y), j = column (x).
std::vector<Pt> candidate_points(const BowenConfig& cfg);
uint64_t effective_stride(const BowenConfig& cfg);
void validate_config(const BowenConfig& cfg);

double bowen_dist(const AbCSystem& sys, Pt x, Pt y, uint64_t n_time);

// Horizons longer than the rotation period are clamped to it (the orbit repeats exactly).
OrbitTable bowen_table(const AbCSystem& sys, const BowenConfig& cfg, Backend be = Backend::Parallel);

struct SeparatedResult {
    long count = 0;
    std::vector<size_t> kept;   // candidate indices
    std::vector<Pt> witnesses;
};

// Greedy packing: keep a candidate iff its Bowen distance to every kept point is >= eps.
SeparatedResult greedy_separated(const OrbitTable& tab, double eps, Backend be = Backend::Parallel);
// Greedy cover: pick the first uncovered candidate, cover everything within Bowen distance < eps.
long greedy_cover(const OrbitTable& tab, double eps, Backend be = Backend::Parallel);

SeparatedResult max_separated(const AbCSystem& sys, const BowenConfig& cfg, Backend be = Backend::Parallel);
long min_cover(const AbCSystem& sys, const BowenConfig& cfg, Backend be = Backend::Parallel);

struct PackingConsistency {
    long cover = 0, sep = 0, sep2 = 0;
    bool ok() const { return sep2 <= cover && cover <= sep; }
};
// cover(eps) against separated(eps) and separated(2 eps) on one table.
PackingConsistency packing_consistency(const OrbitTable& tab, double eps, Backend be = Backend::Parallel);

// Witness points in pre-image coordinates: (i0/q + 2 j eps_n/q^2, 3/8 + k eps).
std::vector<Pt> witness_preimages(const StageParams& stage, double eps, long i0 = 0);
long witness_cardinality(const StageParams& stage, double eps);

struct PairSeparation {
    size_t a = 0, b = 0;
    double dist = 0;      // max over the horizon
    uint64_t time = 0;    // first time reaching eps (or argmax)
};

struct WitnessResult {
    long count = 0;
    bool all_separated = false;
    bool partial = false;
    uint64_t horizon = 0;
    double min_separation = 0;
    std::vector<PairSeparation> pairs;
    std::vector<PairSeparation> failures;
};

WitnessResult witness_untwisted(const AbCSystem& sys, double eps, uint64_t budget = 1000000000ull, long i0 = 0);

std::vector<uint16_t> code_orbit(const AbCSystem& sys, const Partition& part, Pt x, uint64_t n_time);

struct HammingResult {
    long count = 0;
    long covered = 0;
    long samples = 0;
};

HammingResult hamming_cover(const AbCSystem& sys, const Partition& part, uint64_t n_time, double eps, long sample_size,
                            uint64_t seed, Backend be = Backend::Parallel);
HammingResult hamming_cover_table(const CodeTable& tab, double eps, Backend be = Backend::Parallel);
CodeTable hamming_codes(const AbCSystem& sys, const Partition& part, uint64_t n_time, long sample_size, uint64_t seed,
                        Backend be = Backend::Parallel);

struct SandwichResult {
    long n_4eps = 0;     // T_n at 4 eps
    long next_2eps = 0;  // T_{n+1} at 2 eps
    long n_eps = 0;      // T_n at eps
    bool ok() const { return n_4eps <= next_2eps && next_2eps <= n_eps; }
};

SandwichResult sandwich_check(const AbCSystem& sys_n, const AbCSystem& sys_next, uint64_t m, double eps, int grid,
                              Backend be = Backend::Parallel);

struct UpgradeResult {
    long next_sep_eps = 0;  // S_{T_{n+1}}(eps)
    long n_sep_2eps = 0;    // S_{T_n}(2 eps)
    bool ok() const { return next_sep_eps >= n_sep_2eps; }
};
UpgradeResult upgrade_check(const AbCSystem& sys_n, const AbCSystem& sys_next, uint64_t m, double eps, int grid,
                            Backend be = Backend::Parallel);

// ------------------------------------------------------------------ reports

struct CountRecord {
    int stage = 0;
    std::string q;          // decimal
    uint64_t horizon = 1;
    double eps = 0;
    std::string kind;       // separated_lower, cover_upper, hamming_cover, witness
    long count = 0;
    bool sampled = false;
};

struct FamilySpec {
    ScalingFamily family;
    std::vector<double> t;
};

struct RatioRow {
    size_t record = 0;
    std::string family;
    double t = 0;
    double log_ratio = 0;
};

enum class Trend { Increasing, Decreasing, Flat, Undetermined };

struct TrendFlag {
    std::string family;
    std::string kind;
    double t = 0;
    Trend trend = Trend::Undetermined;
};

struct ComplexityReport {
    std::vector<CountRecord> records;
    std::vector<RatioRow> rows;
    std::vector<TrendFlag> flags;
};

const char* trend_name(Trend t);

ComplexityReport slow_entropy_report(const std::vector<CountRecord>& records, const std::vector<FamilySpec>& families);

// Columns: stage,horizon,eps,count_kind,count,family,t,log_ratio (family/t/log_ratio empty for bare counts).
void write_report_csv(std::ostream& os, const ComplexityReport& rep);

} // namespace abc
