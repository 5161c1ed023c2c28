#pragma once

#include "abc/bigrat.hpp"
#include "abc/params.hpp"
#include "abc/twist.hpp"

#include <json.hpp>

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace abc {

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Area-preserving map of the torus, immutable after construction.
class MapNode {
public:
    virtual ~MapNode() = default;
    virtual Pt forward(Pt p) const = 0;
    virtual Pt inverse(Pt p) const = 0;
    virtual std::string kind() const = 0;
    virtual nlohmann::json to_json() const = 0;
    // Lower bound on the distance from p to the set where the map fails to be C^1.
    virtual double kink_distance(Pt) const { return kFar; }
    // The map commutes with x -> x + 1/period; 0 makes no claim, -1 means every horizontal translation.
    virtual long period() const { return 0; }
    // Narrowest horizontal feature in global units.
    virtual double min_width() const { return 1.0; }
    virtual void describe(std::ostream& os, int indent = 0) const;
};

using MapPtr = std::shared_ptr<const MapNode>;

class IdentityMap final : public MapNode {
public:
    Pt forward(Pt p) const override { return p; }
    Pt inverse(Pt p) const override { return p; }
    std::string kind() const override { return "Identity"; }
    nlohmann::json to_json() const override;
    long period() const override { return -1; }
};

class RotationMap final : public MapNode {
public:
    explicit RotationMap(BigRational alpha);
    Pt forward(Pt p) const override { return {wrap01(p.x + shift_), p.y}; }
    Pt inverse(Pt p) const override { return {wrap01(p.x - shift_), p.y}; }
    std::string kind() const override { return "Rotation"; }
    nlohmann::json to_json() const override;
    long period() const override { return -1; }
    const BigRational& alpha() const { return alpha_; }

private:
    BigRational alpha_;
    double shift_;
};

// One vertical strip of a period cell. Offsets are in units of the period 1/q.
struct TwistBlock {
    double start = 0;
    double width = 0;
    double unit = 0;   // local coordinate is (v - start)/unit; unit == width unless literal rescaling
    long tiles = 1;    // equal-width twists inside the block
    bool twisted = true;
    int symbol = -1;   // word symbol for word-driven blocks
};

// Period-q tiling of blockwise quasi-rotations; backs QuasiRotTiled, UntwistedH and WordDrivenPhi.
class BlockTwistMap final : public MapNode {
public:
    BlockTwistMap(std::string kind, long q, double eps, std::vector<TwistBlock> blocks, nlohmann::json meta = {});
    Pt forward(Pt p) const override { return eval(p, false); }
    Pt inverse(Pt p) const override { return eval(p, true); }
    std::string kind() const override { return kind_; }
    nlohmann::json to_json() const override;
    double kink_distance(Pt p) const override;
    long period() const override { return q_; }
    double min_width() const override;
    void describe(std::ostream& os, int indent = 0) const override;

    long q() const { return q_; }
    double eps() const { return tw_.eps(); }
    const std::vector<TwistBlock>& blocks() const { return blocks_; }

private:
    Pt eval(Pt p, bool inverse) const;
    const TwistBlock* find(double v) const;

    std::string kind_;
    long q_;
    SquareTwist tw_;
    std::vector<TwistBlock> blocks_;
    bool uniform_ = false;
    nlohmann::json meta_;
};

// (x, y) -> (x, y + psi(x)) with psi a smoothed up-down staircase of period 1/q.
class VerticalStepShear final : public MapNode {
public:
    VerticalStepShear(long q, double eps, long i1, long s1);
    Pt forward(Pt p) const override { return {p.x, wrap01(p.y + psi(p.x))}; }
    Pt inverse(Pt p) const override { return {p.x, wrap01(p.y - psi(p.x))}; }
    std::string kind() const override { return "VerticalStepShear"; }
    nlohmann::json to_json() const override;
    long period() const override { return q_; }
    double min_width() const override { return eps_ / (double(q_) * q_); }
    void describe(std::ostream& os, int indent = 0) const override;

    double psi(double x) const;
    // Staircase on one step of length a*s, argument in units of 1/q^2.
    double step(long s, double w) const;
    long plateaus() const { return a_; }
    long i1() const { return i1_; }
    long s1() const { return s1_; }

private:
    long q_;
    double eps_;
    long i1_, s1_;
    long L_, a_;
};

// (x, y) -> (x + psi(y), y) translating strip i by b*i/a; identity near y in {0,1}.
class HorizontalStepShear final : public MapNode {
public:
    HorizontalStepShear(long q, long b, double eps);
    Pt forward(Pt p) const override { return {wrap01(p.x + psi(p.y)), p.y}; }
    Pt inverse(Pt p) const override { return {wrap01(p.x - psi(p.y)), p.y}; }
    std::string kind() const override { return "HorizontalStepShear"; }
    nlohmann::json to_json() const override;
    long period() const override { return q_; }
    void describe(std::ostream& os, int indent = 0) const override;

    double psi(double y) const;
    long a() const { return a_; }
    long b() const { return b_; }
    long j0() const { return j0_; }

private:
    long q_, b_, a_, j0_;
    double eps_;
};

// Composition f_1 o f_2 o ... o f_k; forward applies f_k first.
class CompositeMap final : public MapNode {
public:
    explicit CompositeMap(std::vector<MapPtr> parts);
    Pt forward(Pt p) const override;
    Pt inverse(Pt p) const override;
    std::string kind() const override { return "Composite"; }
    nlohmann::json to_json() const override;
    double kink_distance(Pt p) const override;
    long period() const override;
    double min_width() const override;
    void describe(std::ostream& os, int indent = 0) const override;
    const std::vector<MapPtr>& parts() const { return parts_; }

private:
    std::vector<MapPtr> parts_;
};

MapPtr make_identity();
MapPtr make_rotation(const BigRational& alpha);
MapPtr make_phi_q(long q, double eps);
MapPtr make_composite(std::vector<MapPtr> parts);

// Untwisted conjugacy: big and small quarter turns on [0,1/q - 1/q^2] and [1/q - 1/q^2, 1/q].
// literal = true rescales the big block by q instead of by its width.
MapPtr build_untwisted_h(const StageParams& stage, bool literal = false);

struct UeStepSpec {
    long i1 = 0;
    long s1 = 1;
};
// Smallest admissible i1 and the largest s1 fitting the period for that i1.
UeStepSpec default_ue_step(const StageParams& stage);
MapPtr build_ue_h(const StageParams& stage, const UeStepSpec& spec);

struct WmOptions {
    double sigma = 0;          // <= 0 selects 1/n
    double max_stretch = 0;    // <= 0 selects 2 q^3 * 64
};
MapPtr build_word_phi(const StageParams& stage, const std::vector<int>& W, double max_stretch);
MapPtr build_g_shear(const StageParams& stage, double sigma);
MapPtr build_wm_h(const StageParams& stage, const std::vector<int>& W, const WmOptions& opt = {});

MapPtr map_from_json(const nlohmann::json& j);

long to_long_checked(const BigInt& v, const char* what);

} // namespace abc
