#include "abc/mapnode.hpp"
#include "abc/rng.hpp"
#include "abc/system.hpp"
#include "abc/words.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace abc;

namespace {

StageParams stage(int n, long q, BigRational eps) {
    StageParams s;
    s.n = n;
    s.q = q;
    s.p = 1;
    s.alpha = BigRational(1, q);
    s.eps = eps;
    return s;
}

std::vector<int> random_word(long q, int alphabet, uint64_t seed) {
    Rng rng(seed);
    std::vector<int> W(size_t(2 * q * q));
    for (auto& w : W) w = int(rng.below(uint64_t(alphabet)));
    return W;
}

std::vector<std::pair<std::string, MapPtr>> all_nodes() {
    auto s8 = stage(2, 8, BigRational(1, 8));
    auto s16 = stage(2, 16, BigRational(1, 16));
    return {{"identity", make_identity()},
            {"rotation", make_rotation(BigRational(3, 7))},
            {"phi_q", make_phi_q(4, 0.1)},
            {"untwisted", build_untwisted_h(s8)},
            {"untwisted literal", build_untwisted_h(s8, true)},
            {"ue", build_ue_h(s16, default_ue_step(s16))},
            {"word phi", build_word_phi(s8, random_word(8, 4, 3), 0)},
            {"g shear", build_g_shear(s8, 0.5)},
            {"wm", build_wm_h(s8, random_word(8, 4, 5))},
            {"composite", make_composite({build_untwisted_h(s8), make_phi_q(2, 0.2), make_rotation(BigRational(1, 3))})}};
}

} // namespace

TEST_CASE("inverse round trip for every node kind") {
    for (const auto& [name, node] : all_nodes()) {
        CAPTURE(name);
        Rng rng(11);
        double worst = 0;
        for (int i = 0; i < 10000; ++i) {
            Pt p{rng.uniform(), rng.uniform()};
            worst = std::max(worst, torus_dist(node->forward(node->inverse(p)), p));
            worst = std::max(worst, torus_dist(node->inverse(node->forward(p)), p));
        }
        // stretched word-driven sub-twists leave most points inside a transition annulus
        const bool annular = name == "wm" || name == "word phi";
        CHECK(worst < (annular ? 1e-8 : 1e-10));
    }
}

TEST_CASE("equivariance with the 1/q translation") {
    for (const auto& [name, node] : all_nodes()) {
        CAPTURE(name);
        long q = node->period();
        if (q <= 0) continue;
        const bool annular = name == "wm" || name == "word phi";
        Rng rng(13);
        for (int i = 0; i < 1000; ++i) {
            Pt p{rng.uniform(), rng.uniform()};
            Pt a = node->forward({wrap01(p.x + 1.0 / double(q)), p.y});
            Pt b = node->forward(p);
            CHECK(torus_dist(a, {wrap01(b.x + 1.0 / double(q)), b.y}) < (annular ? 1e-8 : 1e-10));
        }
    }
}

TEST_CASE("periods") {
    auto s8 = stage(2, 8, BigRational(1, 8));
    CHECK(make_identity()->period() == -1);
    CHECK(build_untwisted_h(s8)->period() == 8);
    CHECK(make_composite({make_phi_q(4, 0.1), make_phi_q(6, 0.1)})->period() == 2);
    CHECK(make_composite({make_identity(), make_phi_q(6, 0.1)})->period() == 6);
}

TEST_CASE("untwisted block behaviour") {
    auto s = stage(2, 8, BigRational(1, 8));
    auto h = build_untwisted_h(s);
    const double q = 8, big = 1.0 / q - 1.0 / (q * q);
    // inner rotation zone of the big block, oracle: rescale, quarter turn, rescale back
    Pt p{0.5 * big, 0.4};
    Pt r = h->forward(p);
    CHECK(r.x == doctest::Approx(0.6 * big).epsilon(1e-12));
    CHECK(r.y == doctest::Approx(0.5).epsilon(1e-12));
    // same point in the small block
    Pt ps{big + 0.5 / (q * q), 0.4};
    Pt rs = h->forward(ps);
    CHECK(rs.x == doctest::Approx(big + 0.6 / (q * q)).epsilon(1e-12));
    CHECK(rs.y == doctest::Approx(0.5).epsilon(1e-12));
    // identity zone of both twists near the block boundary
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        Pt z{1.0 / q - s.eps.to_double() / (q * q) * rng.uniform(), rng.uniform()};
        Pt f = h->forward(z);
        CHECK(f.x == z.x);
        CHECK(f.y == z.y);
    }
    CHECK_THROWS_AS(build_untwisted_h(stage(2, 2, BigRational(1, 8))), ConstructionError);
    CHECK_THROWS_AS(build_untwisted_h(stage(2, 4, BigRational(1, 8)), true), ConstructionError);
}

TEST_CASE("untwisted map preserves the measure of horizontal strips") {
    auto h = build_untwisted_h(stage(2, 8, BigRational(1, 8)));
    // stratified sample of 10^5 points; count those whose preimage lies in the strip
    const int nx = 400, ny = 250;
    long hits = 0;
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < nx; ++j) {
            Pt u = h->inverse({(j + 0.5) / nx, (i + 0.5) / ny});
            if (u.y >= 0.2 && u.y < 0.3) ++hits;
        }
    CHECK(std::fabs(double(hits) / (nx * ny) - 0.1) <= 1e-3);
}

TEST_CASE("vertical staircase plateau values") {
    auto s = stage(2, 16, BigRational(1, 16));
    auto spec = default_ue_step(s);
    VerticalStepShear sh(16, 1.0 / 16, spec.i1, spec.s1);
    const long L = long(std::floor(16.0 / 3));
    CHECK(sh.plateaus() == 2 * L - 1);
    const double q2 = 256;
    for (long st = 1; st <= spec.s1; ++st) {
        const double start = double(spec.i1) + double(sh.plateaus()) * double(st * (st - 1)) / 2;
        for (long k = 0; k < sh.plateaus(); ++k) {
            const double z = start + double(k * st) + 0.5 * double(st);
            const long expect = k <= L - 1 ? k : 2 * L - 2 - k;
            CHECK(sh.psi(z / q2) == doctest::Approx(-3.0 / 16 * double(expect)).epsilon(1e-12));
        }
    }
    // zero margins of the period cell
    for (double x : {0.0, 0.5 * 2.0 / 16 / 16, (1 - 1.0 / 16) / 16 + 1e-6})
        CHECK(sh.psi(x) == 0.0);
    auto h = build_ue_h(s, spec);
    Pt p{0.1 * 2.0 / 16 / 16, 0.3};
    Pt a = h->forward(p), b = phi_q_eval(16, 1.0 / 16, p);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}

TEST_CASE("uniquely ergodic placement constraints") {
    auto s = stage(2, 16, BigRational(1, 16));
    CHECK_THROWS_WITH_AS(build_ue_h(s, {0, 1}), doctest::Contains("i1 >="), ConstructionError);
    CHECK_THROWS_WITH_AS(build_ue_h(s, {2, 40}), doctest::Contains("i1 + a_n s1"), ConstructionError);
    CHECK_THROWS_AS(build_ue_h(stage(2, 16, BigRational(1, 4)), {4, 1}), ConstructionError);
}

TEST_CASE("shears are measure preserving") {
    VerticalStepShear v(16, 1.0 / 16, 2, 1);
    CHECK(jacobian_mc(v, 10000, 1e-6, 3).max_abs < 1e-6);
    HorizontalStepShear g(4, 4, 1.0 / 8);
    CHECK(jacobian_mc(g, 10000, 1e-6, 3).max_abs < 1e-6);
    CHECK(jacobian_mc(*make_rotation(BigRational(1, 3)), 1000, 1e-6, 3).max_abs < 1e-10);
}

TEST_CASE("weak-mixing conjugacy on symbol-0 blocks") {
    auto s = stage(2, 4, BigRational(1, 8));
    std::vector<int> W(32, 0);
    W[5] = 2;
    W[9] = 3;
    auto h = build_wm_h(s, W);
    auto g = std::dynamic_pointer_cast<const HorizontalStepShear>(build_g_shear(s, 0.5));
    REQUIRE(g);
    const double a = double(g->a()), b = double(g->b());
    // block 0 carries symbol 0; strip index i in the active range
    for (long i : {g->j0() + 2, g->j0() + 77, long(a) - g->j0() - 1}) {
        Pt p{0.3 / 128, (double(i) + 0.5) / a};
        Pt r = h->forward(p);
        double expect = wrap01(p.x + b * double(i) / a);
        CHECK(circ_dist(r.x, expect) < 1e-12);
        CHECK(r.y == p.y);
    }
    for (double y : {0.0, 0.05, 0.125, 0.99})
        CHECK(g->forward({0.37, y}).x == 0.37);
}

TEST_CASE("word-driven map errors") {
    auto s = stage(2, 4, BigRational(1, 8));
    CHECK_THROWS_AS(build_word_phi(s, std::vector<int>(31, 0), 0), ConstructionError);
    std::vector<int> W(32, 0);
    W[0] = 4;
    CHECK_THROWS_AS(build_word_phi(s, W, 0), ConstructionError);
    // stretch beyond numeric resolution
    auto s3 = stage(3, 64, BigRational(1, 8));
    std::vector<int> W3(size_t(2 * 64 * 64), 8);
    CHECK_THROWS_WITH_AS(build_word_phi(s3, W3, 1e30), doctest::Contains("resolution"), ConstructionError);
}

TEST_CASE("JSON round trip reproduces evaluation") {
    for (const auto& [name, node] : all_nodes()) {
        CAPTURE(name);
        auto back = map_from_json(nlohmann::json::parse(node->to_json().dump()));
        Rng rng(17);
        for (int i = 0; i < 200; ++i) {
            Pt p{rng.uniform(), rng.uniform()};
            CHECK(torus_dist(back->forward(p), node->forward(p)) < 1e-12);
        }
        std::ostringstream os;
        node->describe(os);
        CHECK(!os.str().empty());
    }
    CHECK_THROWS_AS(map_from_json({{"kind", "Nope"}}), ConstructionError);
}
