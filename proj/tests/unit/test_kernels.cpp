#include "abc/complexity.hpp"
#include "abc/kernels.hpp"
#include "abc/rng.hpp"

#include <doctest.h>

using namespace abc;

namespace {

AbCSystem desk() {
    StageParams s;
    s.n = 2;
    s.q = 8;
    s.l = 2;
    s.alpha = BigRational(1, 8);
    s.eps = BigRational(1, 8);
    return make_system(build_untwisted_h(s), s);
}

std::vector<Pt> preimages(const AbCSystem& sys, int n) {
    Rng rng(21);
    std::vector<Pt> u;
    for (int i = 0; i < n; ++i) u.push_back(sys.H->inverse({rng.uniform(), rng.uniform()}));
    return u;
}

} // namespace

TEST_CASE("rotation offsets are exact multiples") {
    auto sys = rotation_system(BigRational(3, 7));
    auto off = rotation_offsets(sys, 10, 3);
    REQUIRE(off.size() == 4);
    CHECK(off[0] == 0.0);
    CHECK(off[1] == doctest::Approx(2.0 / 7));
    CHECK(off[3] == doctest::Approx(6.0 / 7));
}

TEST_CASE("orbit tables agree between backends") {
    auto sys = desk();
    auto u = preimages(sys, 50);
    auto off = rotation_offsets(sys, 40, 1);
    auto a = serial::orbit_table(sys, u, off), b = omp::orbit_table(sys, u, off);
    REQUIRE(a.data.size() == b.data.size());
    for (size_t i = 0; i < a.data.size(); ++i) {
        CHECK(a.data[i].x == b.data[i].x);
        CHECK(a.data[i].y == b.data[i].y);
    }
    // table rows equal the orbit routine
    auto o = orbit(sys, sys.H->forward(u[3]), 40);
    for (size_t t = 0; t < 40; ++t) CHECK(torus_dist(o[t], a.row(3)[t]) < 1e-12);
}

TEST_CASE("ball marking agrees between backends") {
    auto sys = desk();
    auto u = preimages(sys, 200);
    auto tab = serial::orbit_table(sys, u, rotation_offsets(sys, 16, 1));
    for (double eps : {0.05, 0.2, 0.4}) {
        for (size_t c : {size_t(0), size_t(17), size_t(199)}) {
            std::vector<char> m1(200, 0), m2(200, 0);
            serial::mark_within(tab, c, eps, m1);
            omp::mark_within(tab, c, eps, m2);
            CHECK(m1 == m2);
            for (size_t j = 0; j < 200; ++j) CHECK(bool(m1[j]) == (row_bowen(tab, c, j) < eps));
        }
        std::vector<size_t> centers{1, 5, 9, 50};
        for (size_t i = 0; i < 200; i += 7)
            CHECK(serial::any_within(tab, i, centers, eps) == omp::any_within(tab, i, centers, eps));
        CHECK(greedy_cover(tab, eps, Backend::Serial) == greedy_cover(tab, eps, Backend::Parallel));
        CHECK(greedy_separated(tab, eps, Backend::Serial).kept == greedy_separated(tab, eps, Backend::Parallel).kept);
    }
}

TEST_CASE("code tables and Hamming marking agree between backends") {
    auto sys = desk();
    auto part = Partition::grid(4, 4);
    auto u = preimages(sys, 150);
    auto off = rotation_offsets(sys, 64, 1);
    auto a = serial::code_table(sys, part, u, off), b = omp::code_table(sys, part, u, off);
    CHECK(a.data == b.data);
    for (size_t t = 0; t < 64; t += 9) CHECK(a.row(2)[t] == part.label(orbit(sys, sys.H->forward(u[2]), 64)[t]));
    for (double eps : {0.1, 0.3}) {
        std::vector<char> m1(150, 0), m2(150, 0);
        serial::hamming_mark(a, 4, eps, m1);
        omp::hamming_mark(a, 4, eps, m2);
        CHECK(m1 == m2);
        for (size_t j = 0; j < 150; ++j) CHECK(bool(m1[j]) == (row_hamming(a, 4, j) < eps));
        CHECK(hamming_cover_table(a, eps, Backend::Serial).count == hamming_cover_table(a, eps, Backend::Parallel).count);
    }
}

TEST_CASE("row distances stop early without changing the verdict") {
    auto sys = desk();
    auto tab = serial::orbit_table(sys, preimages(sys, 10), rotation_offsets(sys, 32, 1));
    for (size_t j = 1; j < 10; ++j) {
        const double full = row_bowen(tab, 0, j);
        CHECK((row_bowen(tab, 0, j, 0.1) >= 0.1) == (full >= 0.1));
    }
}
