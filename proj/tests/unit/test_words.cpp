#include "abc/words.hpp"

#include <doctest.h>

#include <sstream>

using namespace abc;

namespace {

Word parse(const std::string& s) {
    Word w;
    for (char c : s) w.push_back(uint8_t(c - '0'));
    return w;
}

// Plain overlap distance, independent of the bit-plane kernel.
double overlap_distance(const Word& a, const Word& b, int t) {
    const int k = int(a.size());
    int diff = 0;
    for (int i = 0; i + t < k; ++i) diff += a[size_t(i + t)] != b[size_t(i)];
    return double(diff) / double(k - t);
}

bool separated(const std::vector<Word>& ws, int s, double eps) {
    const int k = int(ws[0].size());
    const double thr = 1.0 - 1.0 / s - eps * s;
    for (size_t i = 0; i < ws.size(); ++i)
        for (size_t j = 0; j < ws.size(); ++j)
            for (int t = (i == j ? 1 : 0); double(t) < (1 - eps) * k; ++t)
                if (overlap_distance(ws[i], ws[j], t) < thr) return false;
    return true;
}

} // namespace

TEST_CASE("hamming_shift examples") {
    CHECK(hamming_shift(parse("0110"), parse("0110"), 0) == 0.0);
    CHECK(hamming_shift(parse("0101"), parse("1010"), 0) == 1.0);
    CHECK(hamming_shift(parse("012012"), parse("012012"), 3) == 0.0);
    CHECK(hamming_shift(parse("0011"), parse("0101"), 1) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(hamming_shift(parse("01"), parse("01"), 2), WordError);
}

TEST_CASE("bit-plane kernel matches the plain distance") {
    WordSelection sel;
    for (uint32_t i = 0, state = 12345; i < 4; ++i) {
        Word w(150);
        for (auto& x : w) {
            state = state * 1664525u + 1013904223u;
            x = uint8_t((state >> 16) % 3);
        }
        sel.words.push_back(w);
    }
    for (const auto& a : sel.words)
        for (const auto& b : sel.words)
            for (int t : {0, 1, 63, 64, 65, 100, 149}) {
                auto ba = to_bits(a, 3), bb = to_bits(b, 3);
                const int k = 150;
                CHECK(1.0 - double(shifted_matches(ba, bb, t)) / double(k - t) ==
                      doctest::Approx(overlap_distance(a, b, t)));
                CHECK(hamming_shift(a, b, t) == doctest::Approx(overlap_distance(a, b, t)));
            }
}

TEST_CASE("thresholds") {
    CHECK(separation_threshold(4, 1.0 / 16) == doctest::Approx(0.5));
    CHECK(shift_limit(2000, 1.0 / 16) == 1875);
    CHECK(shift_limit(4, 0.01) == 4);
}

TEST_CASE("single short balanced word") {
    auto sel = sample_selection(2, 4, 1, 0.1, 1);
    REQUIRE(sel.words.size() == 1);
    int ones = 0;
    for (auto x : sel.words[0]) ones += x;
    CHECK(ones == 2);
    CHECK(sel.verified);
}

TEST_CASE("moderate selection passes verification") {
    auto sel = sample_selection(4, 2000, 40, 1.0 / 16, 2024);
    CHECK(sel.verified);
    auto rep = verify_selection(sel);
    CHECK(rep.ok());
    CHECK(rep.uniform);
    CHECK(rep.min_pair >= 0.5);
    CHECK(rep.min_self >= 0.5);
    for (const auto& w : sel.words) {
        int cnt[4] = {0, 0, 0, 0};
        for (auto x : w) cnt[x]++;
        for (int c : cnt) CHECK(c == 500);
    }
}

TEST_CASE("length-4 binary words cannot be separated at eps 0.01") {
    // exhaustive oracle over all 4-tuples of balanced words
    std::vector<Word> balanced;
    for (int m = 0; m < 16; ++m) {
        Word w;
        for (int b = 0; b < 4; ++b) w.push_back(uint8_t((m >> b) & 1));
        if (__builtin_popcount(unsigned(m)) == 2) balanced.push_back(w);
    }
    REQUIRE(balanced.size() == 6);
    bool any = false;
    for (size_t a = 0; a < 6; ++a)
        for (size_t b = 0; b < 6; ++b)
            for (size_t c = 0; c < 6; ++c)
                for (size_t d = 0; d < 6; ++d)
                    any = any || separated({balanced[a], balanced[b], balanced[c], balanced[d]}, 2, 0.01);
    CHECK_FALSE(any);
    try {
        sample_selection(2, 4, 4, 0.01, 1);
        FAIL("selection unexpectedly succeeded");
    } catch (const WordError& e) {
        CHECK(std::string(e.what()).find("shift") != std::string::npos);
    }
}

TEST_CASE("verification of hand-built words") {
    WordSelection single;
    single.alphabet = 2;
    single.k = 8;
    single.eps = 0.05;
    single.words = {parse("01010101")};
    auto rep = verify_selection(single);
    CHECK(rep.uniform);
    CHECK(rep.min_pair == 1.0);
    CHECK(rep.min_self == 0.0);
    CHECK(rep.worst_t == 2);
    CHECK_FALSE(rep.ok());

    WordSelection skew = single;
    skew.words = {parse("00010111")};
    CHECK(verify_selection(skew).uniform);
    skew.words = {parse("00000111")};
    CHECK_FALSE(verify_selection(skew).uniform);
}

TEST_CASE("assembly of W") {
    WordSelection theta;
    theta.alphabet = 2;
    theta.k = 2;
    theta.words = {parse("01"), parse("10")};
    auto W = assemble_W(theta, 2);
    CHECK(W == std::vector<int>{0, 1, 1, 0, 1, 0, 0, 1});
    CHECK_THROWS_AS(assemble_W(theta, 3), WordError);

    auto sel = sample_selection(4, 8, 8, 0.15, 7);
    auto W8 = assemble_W(sel, 8);
    REQUIRE(W8.size() == 128);
    int bar[4] = {}, tilde[4] = {};
    for (size_t i = 0; i < 64; ++i) {
        bar[W8[i]]++;
        tilde[W8[i + 64]]++;
    }
    for (int x = 0; x < 4; ++x) CHECK(tilde[x] == bar[(x + 3) % 4]);
}

TEST_CASE("selection file round trip") {
    auto sel = sample_selection(3, 60, 3, 0.1, 77);
    std::stringstream ss;
    write_selection(ss, sel);
    auto back = read_selection(ss);
    CHECK(back.alphabet == 3);
    CHECK(back.k == 60);
    CHECK(back.eps == sel.eps);
    CHECK(back.seed == 77);
    CHECK(back.words == sel.words);
    CHECK(verify_selection(back).ok() == verify_selection(sel).ok());
    CHECK(base36_value(base36_digit(35)) == 35);
    CHECK(base36_digit(10) == 'a');
}

TEST_CASE("selection is deterministic given the seed") {
    auto a = sample_selection(2, 64, 4, 0.2, 3), b = sample_selection(2, 64, 4, 0.2, 3);
    CHECK(a.words == b.words);
}

TEST_CASE("single-round success rate grows with word length") {
    // 20 seeds per length; one inversion allowed
    std::vector<int> successes;
    for (int k : {500, 1000, 2000, 4000}) {
        int ok = 0;
        for (uint64_t seed = 0; seed < 20; ++seed) {
            try {
                sample_selection(4, k, 40, 1.0 / 16, 1000 + seed, {1});
                ++ok;
            } catch (const WordError&) {
            }
        }
        successes.push_back(ok);
    }
    int inversions = 0;
    for (size_t i = 1; i < successes.size(); ++i) inversions += successes[i] < successes[i - 1];
    CAPTURE(successes[0]);
    CAPTURE(successes[3]);
    CHECK(inversions <= 1);
    CHECK(successes.back() == 20);
}
