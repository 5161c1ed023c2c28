#include "abc/mapnode.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "abc/csv.hpp"

namespace abc {

namespace {

constexpr double kResolution = 1e-12;

std::string pad(int indent) { return std::string(size_t(indent) * 2, ' '); }

} // namespace

long to_long_checked(const BigInt& v, const char* what) {
    if (!v.fits_slong_p()) throw ConstructionError(std::string(what) + " does not fit a machine integer");
    return v.get_si();
}

void MapNode::describe(std::ostream& os, int indent) const { os << pad(indent) << kind() << "\n"; }

nlohmann::json IdentityMap::to_json() const { return {{"kind", "Identity"}}; }

RotationMap::RotationMap(BigRational alpha) : alpha_(std::move(alpha)), shift_(alpha_.frac().to_double()) {}

nlohmann::json RotationMap::to_json() const { return {{"kind", "Rotation"}, {"alpha", alpha_.str()}}; }

// ---------------------------------------------------------------- block twists

BlockTwistMap::BlockTwistMap(std::string kind, long q, double eps, std::vector<TwistBlock> blocks, nlohmann::json meta)
    : kind_(std::move(kind)), q_(q), tw_(eps), blocks_(std::move(blocks)), meta_(std::move(meta)) {
    if (q_ < 1) throw ConstructionError(kind_ + ": period q must be >= 1");
    std::sort(blocks_.begin(), blocks_.end(), [](const TwistBlock& a, const TwistBlock& b) { return a.start < b.start; });
    for (size_t i = 0; i < blocks_.size(); ++i) {
        const auto& b = blocks_[i];
        if (b.width <= 0 || b.unit <= 0 || b.tiles < 1) throw ConstructionError(kind_ + ": malformed block");
        if (b.start < 0 || b.start + b.width > 1 + 1e-12) throw ConstructionError(kind_ + ": block outside the period cell");
        if (i > 0 && blocks_[i - 1].start + blocks_[i - 1].width > b.start + 1e-12)
            throw ConstructionError(kind_ + ": overlapping blocks");
    }
    if (!blocks_.empty()) {
        const double w = blocks_[0].width;
        uniform_ = true;
        for (size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i].width != w || std::fabs(blocks_[i].start - double(i) * w) > 1e-15) uniform_ = false;
    }
    if (min_width() < kResolution)
        throw ConstructionError(kind_ + ": block width " + fmt_double(min_width()) + " below numeric resolution 1e-12");
}

const TwistBlock* BlockTwistMap::find(double v) const {
    if (blocks_.empty()) return nullptr;
    if (uniform_) {
        size_t i = size_t(v / blocks_[0].width);
        if (i >= blocks_.size()) i = blocks_.size() - 1;
        // guard against rounding at the edges
        while (i > 0 && v < blocks_[i].start) --i;
        while (i + 1 < blocks_.size() && v >= blocks_[i + 1].start) ++i;
        return &blocks_[i];
    }
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), v,
                               [](double val, const TwistBlock& b) { return val < b.start; });
    if (it == blocks_.begin()) return nullptr;
    --it;
    if (v >= it->start + it->width) return nullptr;
    return &*it;
}

Pt BlockTwistMap::eval(Pt p, bool inverse) const {
    const double vf = p.x * double(q_);
    const double cell = std::floor(vf);
    double v = vf - cell;
    if (v >= 1.0) v = 0;
    const TwistBlock* b = find(v);
    if (!b || !b->twisted) return p;
    const double z = (v - b->start) / b->unit * double(b->tiles);
    double j = std::floor(z);
    if (j < 0) j = 0;
    if (j > double(b->tiles - 1)) j = double(b->tiles - 1);
    Pt loc{z - j, p.y};
    Pt r = tw_.apply(loc, inverse);
    const double v2 = b->start + (j + r.x) / double(b->tiles) * b->unit;
    return {wrap01((cell + v2) / double(q_)), wrap01(r.y)};
}

double BlockTwistMap::kink_distance(Pt p) const {
    const double vf = p.x * double(q_);
    const double cell = std::floor(vf);
    double v = vf - cell;
    const TwistBlock* b = find(v);
    if (!b || !b->twisted) return kFar;
    const double scale = double(q_) * double(b->tiles) / b->unit;
    const double z = (v - b->start) / b->unit * double(b->tiles);
    double j = std::floor(z);
    Pt loc{z - j, p.y};
    return tw_.kink_distance(loc) / std::max(1.0, scale);
}

double BlockTwistMap::min_width() const {
    double w = 1.0;
    for (const auto& b : blocks_) {
        w = std::min(w, b.width / double(q_));
        if (b.twisted) w = std::min(w, b.unit / (double(q_) * double(b.tiles)));
    }
    return w;
}

nlohmann::json BlockTwistMap::to_json() const {
    nlohmann::json bl = nlohmann::json::array();
    for (const auto& b : blocks_) {
        nlohmann::json e{{"start", fmt_double(b.start)}, {"width", fmt_double(b.width)}, {"unit", fmt_double(b.unit)},
                         {"tiles", b.tiles}, {"twisted", b.twisted}};
        if (b.symbol >= 0) e["symbol"] = b.symbol;
        bl.push_back(e);
    }
    nlohmann::json j{{"kind", kind_}, {"q", q_}, {"eps", fmt_double(tw_.eps())}, {"blocks", bl}};
    if (!meta_.is_null()) j["meta"] = meta_;
    return j;
}

void BlockTwistMap::describe(std::ostream& os, int indent) const {
    os << pad(indent) << kind_ << " q=" << q_ << " eps=" << fmt_double(tw_.eps()) << " period 1/" << q_ << "\n";
    for (const auto& b : blocks_) {
        os << pad(indent + 1) << "x in [" << fmt_double(b.start / q_) << ", " << fmt_double((b.start + b.width) / q_)
           << ") ";
        if (b.symbol >= 0) os << "symbol " << b.symbol << ": ";
        if (!b.twisted) {
            os << "identity\n";
            continue;
        }
        os << "quarter-turn twist, " << b.tiles << (b.tiles == 1 ? " tile" : " tiles") << " of width "
           << fmt_double(b.unit / (double(q_) * b.tiles));
        if (b.unit != b.width) os << " (literal rescale, local extent " << fmt_double(b.width / b.unit) << ")";
        os << "\n";
    }
    if (blocks_.empty()) os << pad(indent + 1) << "(no blocks: identity)\n";
}

// ---------------------------------------------------------------- vertical step shear

VerticalStepShear::VerticalStepShear(long q, double eps, long i1, long s1) : q_(q), eps_(eps), i1_(i1), s1_(s1) {
    if (q_ < 1) throw ConstructionError("VerticalStepShear: q must be >= 1");
    if (!(eps_ > 0 && eps_ < 1.0 / 6)) throw ConstructionError("VerticalStepShear: eps must lie in (0, 1/6)");
    L_ = long(std::floor(1.0 / (3 * eps_)));
    a_ = 2 * L_ - 1;
    if (s1_ < 1) throw ConstructionError("VerticalStepShear: s1 must be >= 1");
}

double VerticalStepShear::step(long s, double w) const {
    auto F = [&](long i) -> double {
        if (i >= 1 && i <= L_ - 1) return 1;
        if (i >= L_ && i <= 2 * L_ - 2) return -1;
        return 0;
    };
    auto P = [&](long m) -> double {
        if (m <= 0) return 0;
        if (m <= L_ - 1) return double(m);
        if (m <= 2 * L_ - 2) return double(2 * L_ - 2 - m);
        return 0;
    };
    const double sd = double(s);
    long k = long(std::floor(w / sd));
    double acc = P(k - 1) + F(k) * ramp((w - double(k) * sd) / eps_) + F(k + 1) * ramp((w - double(k + 1) * sd) / eps_);
    return -3 * eps_ * acc;
}

double VerticalStepShear::psi(double x) const {
    const double vf = x * double(q_);
    double v = vf - std::floor(vf);
    const double z = v * double(q_);
    if (z < double(i1_)) return 0;
    for (long s = 1; s <= s1_; ++s) {
        const double start = double(i1_) + double(a_) * double(s * (s - 1)) / 2;
        const double end = start + double(a_ * s);
        if (z < end) return step(s, z - start);
    }
    return 0;
}

nlohmann::json VerticalStepShear::to_json() const {
    return {{"kind", "VerticalStepShear"}, {"q", q_}, {"eps", fmt_double(eps_)}, {"i1", i1_}, {"s1", s1_},
            {"plateaus_per_step", a_}};
}

void VerticalStepShear::describe(std::ostream& os, int indent) const {
    os << pad(indent) << "VerticalStepShear q=" << q_ << " eps=" << fmt_double(eps_) << " plateaus/step=" << a_ << "\n";
    const double u = 1.0 / (double(q_) * q_);
    for (long s = 1; s <= s1_; ++s) {
        double start = double(i1_) + double(a_) * double(s * (s - 1)) / 2;
        os << pad(indent + 1) << "x in [" << fmt_double(start * u) << ", " << fmt_double((start + a_ * s) * u)
           << ") staircase with step length " << s << "/q^2, plateau values -3eps*{0..." << (L_ - 1) << "...0}\n";
    }
    os << pad(indent + 1) << "elsewhere psi = 0; repeats with period 1/" << q_ << "\n";
}

// ---------------------------------------------------------------- horizontal step shear

HorizontalStepShear::HorizontalStepShear(long q, long b, double eps) : q_(q), b_(b), eps_(eps) {
    if (q_ < 1 || b_ < 1) throw ConstructionError("HorizontalStepShear: q and b must be >= 1");
    if (!(eps_ > 0 && eps_ < 0.5)) throw ConstructionError("HorizontalStepShear: eps must lie in (0, 1/2)");
    const long unit = 2 * q_ * q_ * q_;
    a_ = b_ * unit;
    long m = long(std::ceil(double(b_) * eps_ - 1e-12));
    if (m < 1) m = 1;
    j0_ = m * unit;
    if (a_ - j0_ < j0_ + 1) throw ConstructionError("HorizontalStepShear: no active strips (b*eps too large)");
    if (1.0 / double(a_) < kResolution) throw ConstructionError("HorizontalStepShear: strip height below resolution");
}

double HorizontalStepShear::psi(double y) const {
    const double z = y * double(a_);
    const long k = long(std::floor(z));
    const long lo = j0_ + 1, hi = a_ - j0_;
    long full = std::min(k - 1, hi) - lo + 1;
    if (full < 0) full = 0;
    double partial = 0;
    if (k >= lo && k <= hi) partial += ramp((z - double(k)) / eps_);
    if (k + 1 >= lo && k + 1 <= hi) partial += ramp((z - double(k + 1)) / eps_);
    const long unit = a_ / b_;
    double v = double(full % unit) / double(unit) + partial * double(b_) / double(a_);
    return v - std::floor(v);
}

nlohmann::json HorizontalStepShear::to_json() const {
    return {{"kind", "HorizontalStepShear"}, {"q", q_}, {"b", b_}, {"a", a_}, {"j0", j0_}, {"eps", fmt_double(eps_)}};
}

void HorizontalStepShear::describe(std::ostream& os, int indent) const {
    os << pad(indent) << "HorizontalStepShear a=" << a_ << " strips, b=" << b_ << ", eps=" << fmt_double(eps_) << "\n";
    os << pad(indent + 1) << "y in [0, " << fmt_double(double(j0_) / a_) << "] and [" << fmt_double(1 - double(j0_) / a_)
       << ", 1): identity\n";
    os << pad(indent + 1) << "strip i in between: x -> x + " << b_ << "*i/" << a_ << " on plateaus\n";
}

// ---------------------------------------------------------------- composite

CompositeMap::CompositeMap(std::vector<MapPtr> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_)
        if (!p) throw ConstructionError("Composite: null part");
}

Pt CompositeMap::forward(Pt p) const {
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) p = (*it)->forward(p);
    return p;
}

Pt CompositeMap::inverse(Pt p) const {
    for (const auto& part : parts_) p = part->inverse(p);
    return p;
}

double CompositeMap::kink_distance(Pt p) const {
    double d = kFar;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
        d = std::min(d, (*it)->kink_distance(p));
        p = (*it)->forward(p);
    }
    return d;
}

long CompositeMap::period() const {
    long g = -1;
    for (const auto& p : parts_) {
        long pp = p->period();
        if (pp == 0) return 0;
        if (pp < 0) continue;
        g = (g < 0) ? pp : std::gcd(g, pp);
    }
    return g;
}

double CompositeMap::min_width() const {
    double w = 1.0;
    for (const auto& p : parts_) w = std::min(w, p->min_width());
    return w;
}

nlohmann::json CompositeMap::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : parts_) a.push_back(p->to_json());
    return {{"kind", "Composite"}, {"parts", a}};
}

void CompositeMap::describe(std::ostream& os, int indent) const {
    os << pad(indent) << "Composite of " << parts_.size() << " maps (last applied first)\n";
    for (const auto& p : parts_) p->describe(os, indent + 1);
}

// ---------------------------------------------------------------- builders

MapPtr make_identity() { return std::make_shared<IdentityMap>(); }
MapPtr make_rotation(const BigRational& alpha) { return std::make_shared<RotationMap>(alpha); }

MapPtr make_phi_q(long q, double eps) {
    return std::make_shared<BlockTwistMap>("QuasiRotTiled", q, eps, std::vector<TwistBlock>{{0, 1, 1, 1, true, -1}});
}

MapPtr make_composite(std::vector<MapPtr> parts) {
    if (parts.size() == 1) return parts[0];
    return std::make_shared<CompositeMap>(std::move(parts));
}

MapPtr build_untwisted_h(const StageParams& stage, bool literal) {
    const long q = to_long_checked(stage.q, "q_n");
    if (q < 4) throw ConstructionError("untwisted conjugacy needs q_n >= 4 (got " + std::to_string(q) + ")");
    const double eps = stage.eps.to_double();
    const double small = 1.0 / double(q);
    const double big = 1.0 - small;
    if (literal && small > eps)
        throw ConstructionError("literal untwisted formula needs q_n >= 1/eps_n to stay bijective");
    std::vector<TwistBlock> blocks{{0, big, literal ? 1.0 : big, 1, true, -1}, {big, small, small, 1, true, -1}};
    nlohmann::json meta{{"n", stage.n}, {"literal", literal}};
    return std::make_shared<BlockTwistMap>("UntwistedH", q, eps, std::move(blocks), meta);
}

UeStepSpec default_ue_step(const StageParams& stage) {
    const long q = to_long_checked(stage.q, "q_n");
    const double eps = stage.eps.to_double();
    const long margin = long(std::ceil(2 * eps * double(q) - 1e-12));
    const long a = 2 * long(std::floor(1.0 / (3 * eps))) - 1;
    UeStepSpec s;
    s.i1 = margin;
    s.s1 = 0;
    while (s.i1 + a * (s.s1 + 1) * (s.s1 + 2) / 2 <= q - margin) ++s.s1;
    if (s.s1 < 1) throw ConstructionError("no staircase fits: q_n too small for eps_n");
    return s;
}

MapPtr build_ue_h(const StageParams& stage, const UeStepSpec& spec) {
    const long q = to_long_checked(stage.q, "q_n");
    const double eps = stage.eps.to_double();
    if (!(eps < 1.0 / 6)) throw ConstructionError("uniquely ergodic conjugacy needs eps_n < 1/6");
    const long margin = long(std::ceil(2 * eps * double(q) - 1e-12));
    const long a = 2 * long(std::floor(1.0 / (3 * eps))) - 1;
    if (spec.i1 < margin)
        throw ConstructionError("placement constraint i1 >= ceil(2 eps_n q_n) = " + std::to_string(margin) + " violated");
    if (spec.s1 < 1) throw ConstructionError("placement constraint s1 >= 1 violated");
    if (spec.i1 + a * spec.s1 * (spec.s1 + 1) / 2 > q - margin)
        throw ConstructionError("placement constraint i1 + a_n s1 (s1+1)/2 <= q_n - ceil(2 eps_n q_n) violated");
    auto shear = std::make_shared<VerticalStepShear>(q, eps, spec.i1, spec.s1);
    return make_composite({make_phi_q(q, eps), shear});
}

MapPtr build_word_phi(const StageParams& stage, const std::vector<int>& W, double max_stretch) {
    const long q = to_long_checked(stage.q, "q_n");
    const size_t len = size_t(2) * size_t(q) * size_t(q);
    if (W.size() != len)
        throw ConstructionError("word length " + std::to_string(W.size()) + " != 2 q_n^2 = " + std::to_string(len));
    const int alphabet = stage.n * stage.n;
    const double q3 = 2.0 * double(q) * q * q;
    if (max_stretch <= 0) max_stretch = q3 * 64;
    std::vector<TwistBlock> blocks;
    blocks.reserve(len);
    const double w = 1.0 / double(len);
    for (size_t i = 0; i < len; ++i) {
        const int j = W[i];
        if (j < 0 || j >= alphabet)
            throw ConstructionError("symbol " + std::to_string(j) + " outside alphabet of size " + std::to_string(alphabet));
        TwistBlock b{double(i) * w, w, w, 1, j > 0, j};
        if (j > 0) {
            double stretch = std::min(2.0 * std::pow(double(q), j + 2), max_stretch);
            b.tiles = std::max(1L, long(std::floor(stretch / q3 + 1e-9)));
        }
        blocks.push_back(b);
    }
    nlohmann::json meta{{"n", stage.n}, {"max_stretch", fmt_double(max_stretch)}};
    return std::make_shared<BlockTwistMap>("WordDrivenPhi", q, stage.eps.to_double(), std::move(blocks), meta);
}

MapPtr build_g_shear(const StageParams& stage, double sigma) {
    const long q = to_long_checked(stage.q, "q_n");
    if (sigma <= 0) sigma = 1.0 / stage.n;
    const long b = long(std::floor(double(stage.n) * std::pow(double(q), sigma) + 1e-9));
    return std::make_shared<HorizontalStepShear>(q, std::max(1L, b), stage.eps.to_double());
}

MapPtr build_wm_h(const StageParams& stage, const std::vector<int>& W, const WmOptions& opt) {
    return make_composite({build_g_shear(stage, opt.sigma), build_word_phi(stage, W, opt.max_stretch)});
}

MapPtr map_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    auto num = [](const nlohmann::json& v) { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); };
    if (kind == "Identity") return make_identity();
    if (kind == "Rotation") return make_rotation(BigRational::parse(j.at("alpha").get<std::string>()));
    if (kind == "QuasiRotTiled" || kind == "UntwistedH" || kind == "WordDrivenPhi") {
        std::vector<TwistBlock> blocks;
        for (const auto& b : j.at("blocks"))
            blocks.push_back({num(b.at("start")), num(b.at("width")), num(b.at("unit")), b.at("tiles").get<long>(),
                              b.at("twisted").get<bool>(), b.value("symbol", -1)});
        return std::make_shared<BlockTwistMap>(kind, j.at("q").get<long>(), num(j.at("eps")), std::move(blocks),
                                               j.value("meta", nlohmann::json()));
    }
    if (kind == "VerticalStepShear")
        return std::make_shared<VerticalStepShear>(j.at("q").get<long>(), num(j.at("eps")), j.at("i1").get<long>(),
                                                   j.at("s1").get<long>());
    if (kind == "HorizontalStepShear")
        return std::make_shared<HorizontalStepShear>(j.at("q").get<long>(), j.at("b").get<long>(), num(j.at("eps")));
    if (kind == "Composite") {
        std::vector<MapPtr> parts;
        for (const auto& p : j.at("parts")) parts.push_back(map_from_json(p));
        return std::make_shared<CompositeMap>(std::move(parts));
    }
    throw ConstructionError("unknown map kind '" + kind + "'");
}

} // namespace abc
