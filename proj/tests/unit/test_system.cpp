#include "abc/system.hpp"
#include "abc/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace abc;

namespace {

AbCSystem desk_system() {
    ParamProfile prof;
    prof.regime = Regime::Custom;
    prof.q1 = 8;
    CustomStep st;
    st.l = BigInt(2);
    st.eps = BigRational(1, 8);
    prof.custom = {st};
    auto chain = build_chain(prof, 1);
    return make_system(build_untwisted_h(chain[0]), chain[0]);
}

} // namespace

TEST_CASE("rotation orbit example") {
    auto sys = rotation_system(BigRational(1, 3));
    auto o = orbit(sys, {0, 0}, 4);
    REQUIRE(o.size() == 4);
    const double xs[] = {0, 1.0 / 3, 2.0 / 3, 0};
    for (int i = 0; i < 4; ++i) {
        CHECK(o[size_t(i)].x == doctest::Approx(xs[i]).epsilon(1e-15));
        CHECK(o[size_t(i)].y == 0.0);
    }
}

TEST_CASE("stride sampling") {
    auto sys = rotation_system(BigRational(1, 10));
    auto o = orbit(sys, {0.05, 0.5}, 10, 3);
    REQUIRE(o.size() == 4);
    CHECK(sample_count(10, 3) == 4);
    CHECK(sample_count(9, 3) == 3);
    CHECK(o[3].x == doctest::Approx(0.95));
}

TEST_CASE("orbit returns to its start after q_{n+1} steps") {
    auto sys = desk_system();
    const uint64_t Q = uint64_t(sys.alpha_next.den().get_ui());
    CHECK(Q == 128);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        Pt x{rng.uniform(), rng.uniform()};
        auto o = orbit(sys, x, Q + 1);
        CHECK(torus_dist(o.back(), x) < 1e-9);
    }
}

TEST_CASE("orbit matches naive composition") {
    auto sys = desk_system();
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        Pt x{rng.uniform(), rng.uniform()};
        auto a = orbit(sys, x, 100);
        auto b = orbit_naive(sys, x, 100);
        REQUIRE(a.size() == b.size());
        double worst = 0;
        for (size_t t = 0; t < a.size(); ++t) worst = std::max(worst, torus_dist(a[t], b[t]));
        CHECK(worst < 1e-9);
    }
    Pt x{0.3, 0.7};
    Pt u = sys.H->inverse(x);
    auto a = orbit(sys, x, 50, 7), b = orbit_from_preimage(sys, u, 50, 7);
    for (size_t t = 0; t < a.size(); ++t) CHECK(torus_dist(a[t], b[t]) == 0.0);
}

TEST_CASE("rotation clock is exact for huge denominators") {
    BigInt Q = pow_big(BigInt(2), 200);
    BigRational alpha(BigInt(Q / 3 + 1), Q);
    RotationClock clock(alpha);
    for (uint64_t t : {uint64_t(0), uint64_t(1), uint64_t(12345), uint64_t(1) << 62}) {
        BigRational tx = alpha * BigRational(BigInt(std::to_string(t)));
        BigInt fl = tx.num() / tx.den();
        double expect = (tx - BigRational(fl)).to_double();
        CHECK(clock.offset(t) == doctest::Approx(expect).epsilon(1e-15));
    }
    RotationClock small(BigRational(3, 7));
    CHECK(small.offset(5) == doctest::Approx(1.0 / 7));
}

TEST_CASE("central index minimises the distance to the centre") {
    ParamProfile prof;
    prof.regime = Regime::Custom;
    prof.q1 = 5;
    CustomStep st;
    st.l = BigInt(3);
    prof.custom = {st};
    auto chain = build_chain(prof, 3);
    for (size_t n = 1; n <= chain.size(); ++n) {
        std::vector<StageParams> head(chain.begin(), chain.begin() + long(n));
        long ic = central_index(head);
        BigRational c = 0;
        for (size_t m = 0; m + 1 < n; ++m) c = c + BigRational(BigInt(1), BigInt(2 * head[m].q));
        const long q = head.back().q.get_si();
        long best = 0;
        BigRational bestd(1000);
        for (long i = 0; i < q; ++i) {
            BigRational d = BigRational(BigInt(i), head.back().q) - c;
            if (d < BigRational(0)) d = BigRational(0) - d;
            if (d < bestd) {
                bestd = d;
                best = i;
            }
        }
        CAPTURE(n);
        CHECK(ic == best);
    }
}

TEST_CASE("jacobian of rotation and shear") {
    auto r = make_rotation(BigRational(2, 9));
    auto js = jacobian_mc(*r, 2000, 1e-5, 2);
    CHECK(js.max_abs < 1e-10);
    CHECK(js.used + js.excluded == 2000);
    auto tw = make_phi_q(1, 0.1);
    CHECK(jacobian_mc(*tw, 10000, 1e-6, 4).max_abs < 1e-3);
}
