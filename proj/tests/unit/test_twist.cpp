#include "abc/mapnode.hpp"
#include "abc/rng.hpp"
#include "abc/system.hpp"
#include "abc/twist.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace abc;

namespace {

bool same_bits(Pt a, Pt b) { return std::memcmp(&a.x, &b.x, sizeof(double)) == 0 && std::memcmp(&a.y, &b.y, sizeof(double)) == 0; }

} // namespace

TEST_CASE("circle helpers") {
    CHECK(wrap01(-0.25) == 0.75);
    CHECK(wrap01(1.0) == 0.0);
    CHECK(circ_dist(0.05, 0.95) == doctest::Approx(0.1));
    CHECK(circ_diff(0.05, 0.95) == doctest::Approx(0.1));
    CHECK(torus_dist({0.1, 0.9}, {0.9, 0.2}) == doctest::Approx(0.3));
    CHECK(smoothstep5(0) == 0);
    CHECK(smoothstep5(1) == 1);
    CHECK(smoothstep5(0.5) == doctest::Approx(0.5));
}

TEST_CASE("square twist examples") {
    SquareTwist tw(0.1);
    Pt a = tw.apply({0.5, 0.25});
    CHECK(a.x == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(same_bits(tw.apply({0.05, 0.5}), {0.05, 0.5}));
    Pt c = tw.apply({0.5, 0.5});
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(c.y == doctest::Approx(0.5));
    CHECK_THROWS(SquareTwist(0.25));
    CHECK_THROWS(SquareTwist(0));
}

TEST_CASE("square twist zones") {
    for (double eps : {0.05, 0.1, 0.2}) {
        SquareTwist tw(eps);
        Rng rng(3, uint64_t(eps * 1000));
        for (int i = 0; i < 10000; ++i) {
            Pt p{rng.uniform(), rng.uniform()};
            const double rho = std::max(std::fabs(p.x - 0.5), std::fabs(p.y - 0.5));
            Pt f = tw.apply(p);
            if (rho <= 0.5 - 2 * eps) {
                CHECK(std::fabs(f.x - (1 - p.y)) <= 1e-12);
                CHECK(std::fabs(f.y - p.x) <= 1e-12);
                Pt g = tw.apply(p, true);
                CHECK(std::fabs(g.x - p.y) <= 1e-12);
                CHECK(std::fabs(g.y - (1 - p.x)) <= 1e-12);
            } else if (rho >= 0.5 - eps) {
                CHECK(same_bits(f, p));
                CHECK(same_bits(tw.apply(p, true), p));
            }
            // level sets of the sup radius are preserved
            const double rho2 = std::max(std::fabs(f.x - 0.5), std::fabs(f.y - 0.5));
            CHECK(std::fabs(rho2 - rho) <= 1e-12);
            Pt back = tw.apply(f, true);
            CHECK(std::fabs(back.x - p.x) <= 1e-10);
            CHECK(std::fabs(back.y - p.y) <= 1e-10);
        }
    }
}

TEST_CASE("turn profile") {
    SquareTwist tw(0.1);
    CHECK(tw.turn(0.0) == 1.0);
    CHECK(tw.turn(0.3) == 1.0);
    CHECK(tw.turn(0.4) == 0.0);
    CHECK(tw.turn(0.45) == 0.0);
    double prev = 1;
    for (double r = 0.3; r <= 0.4; r += 0.001) {
        CHECK(tw.turn(r) <= prev + 1e-15);
        prev = tw.turn(r);
    }
}

TEST_CASE("phi_q examples") {
    SquareTwist tw(0.1);
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        Pt p{rng.uniform(), rng.uniform()};
        Pt a = phi_q_eval(1, 0.1, p), b = tw.apply(p);
        CHECK(torus_dist(a, b) <= 1e-14);
    }
    Pt r = phi_q_eval(4, 0.1, {0.125, 0.25});
    CHECK(r.x == doctest::Approx(0.1875).epsilon(1e-12));
    CHECK(r.y == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("phi_q equivariance") {
    Rng rng(9);
    for (long q : {3L, 4L, 16L}) {
        for (int i = 0; i < 1000; ++i) {
            Pt p{rng.uniform(), rng.uniform()};
            Pt a = phi_q_eval(q, 0.1, {wrap01(p.x + 1.0 / q), p.y});
            Pt b = phi_q_eval(q, 0.1, p);
            CHECK(torus_dist(a, {wrap01(b.x + 1.0 / q), b.y}) <= 1e-12);
        }
    }
}

TEST_CASE("square twist preserves area (histogram oracle)") {
    // push uniform samples forward and compare bin counts to the uniform expectation
    const int B = 8, N = 200000;
    std::vector<int> hist(B * B, 0);
    Rng rng(21);
    for (int i = 0; i < N; ++i) {
        Pt f = phi_q_eval(1, 0.15, {rng.uniform(), rng.uniform()});
        hist[std::min(B - 1, int(f.y * B)) * B + std::min(B - 1, int(f.x * B))]++;
    }
    const double expect = double(N) / (B * B);
    for (int h : hist) CHECK(std::fabs(h - expect) <= 6 * std::sqrt(expect));
}

TEST_CASE("Jacobian determinant of the twist") {
    auto node = make_phi_q(1, 0.1);
    auto st = jacobian_mc(*node, 10000, 1e-6, 7);
    CHECK(st.used > 9000);
    CHECK(st.max_abs <= 1e-3);
}

TEST_CASE("kink distance is zero on the diagonals of the ring") {
    SquareTwist tw(0.1);
    CHECK(tw.kink_distance({0.15, 0.15}) < 1e-12);
    CHECK(tw.kink_distance({0.5, 0.5}) > 0);
    CHECK(tw.kink_distance({0.05, 0.5}) > 0.01);
}
