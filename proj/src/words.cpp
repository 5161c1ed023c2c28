#include "abc/words.hpp"

#include "abc/csv.hpp"
#include "abc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace abc {

double hamming_shift(const Word& w, const Word& w2, int t) {
    const int k = int(w.size());
    if (int(w2.size()) != k) throw WordError("hamming_shift: words of different length");
    if (t < 0 || t >= k) throw WordError("hamming_shift: shift must satisfy 0 <= t < k");
    int diff = 0;
    for (int i = t; i < k; ++i) diff += (w[i] != w2[i - t]);
    return double(diff) / double(k - t);
}

double separation_threshold(int s, double eps) { return 1.0 - 1.0 / s - eps * s; }

int shift_limit(int k, double eps) {
    int lim = int(std::ceil((1.0 - eps) * k - 1e-9));
    return std::clamp(lim, 0, k);
}

BitWord to_bits(const Word& w, int alphabet) {
    BitWord b;
    b.k = int(w.size());
    const size_t nw = size_t(b.k) / 64 + 1;
    b.planes.assign(static_cast<size_t>(alphabet), std::vector<uint64_t>(nw, 0));
    for (int i = 0; i < b.k; ++i) {
        if (w[i] >= alphabet) throw WordError("symbol outside alphabet");
        b.planes[w[i]][size_t(i) / 64] |= uint64_t(1) << (i % 64);
    }
    return b;
}

int shifted_matches(const BitWord& a, const BitWord& b, int t) {
    const int len = a.k - t;
    if (len <= 0) return 0;
    const int ws = t / 64, bs = t % 64;
    const int full = len / 64, rest = len % 64;
    int m = 0;
    for (size_t sym = 0; sym < a.planes.size(); ++sym) {
        const uint64_t* A = a.planes[sym].data();
        const uint64_t* B = b.planes[sym].data();
        const size_t na = a.planes[sym].size();
        auto shifted = [&](int idx) -> uint64_t {
            size_t lo = size_t(idx + ws);
            uint64_t v = A[lo] >> bs;
            if (bs && lo + 1 < na) v |= A[lo + 1] << (64 - bs);
            return v;
        };
        for (int i = 0; i < full; ++i) m += __builtin_popcountll(shifted(i) & B[i]);
        if (rest) m += __builtin_popcountll(shifted(full) & B[full] & ((uint64_t(1) << rest) - 1));
    }
    return m;
}

std::string SelectionReport::text() const {
    std::ostringstream os;
    os << "uniform: " << (uniform ? "exact" : "VIOLATED") << "\n";
    os << "threshold: " << fmt_double(threshold) << "\n";
    os << "min pairwise overlap distance: " << fmt_double(min_pair) << "\n";
    os << "min self-sliding distance: " << fmt_double(min_self) << "\n";
    if (worst_i >= 0)
        os << "worst: words " << worst_i << "," << worst_j << " shift " << worst_t << " distance " << fmt_double(worst)
           << "\n";
    os << "verified: " << (ok() ? "yes" : "no") << "\n";
    return os.str();
}

namespace {

struct Worst {
    double d = 2;
    int i = -1, j = -1, t = -1;
};

// Minimum overlap distance of (i, j) over admissible shifts; self pairs skip t = 0.
Worst scan_pair(const std::vector<BitWord>& bits, int i, int j, int limit, double stop_below) {
    Worst w;
    const int k = bits[i].k;
    for (int t = (i == j) ? 1 : 0; t < limit; ++t) {
        double d = 1.0 - double(shifted_matches(bits[i], bits[j], t)) / double(k - t);
        if (d < w.d) w = {d, i, j, t};
        if (d < stop_below) break;
    }
    return w;
}

bool is_uniform(const Word& w, int s) {
    std::vector<int> c(static_cast<size_t>(s), 0);
    for (auto x : w) {
        if (x >= s) return false;
        ++c[x];
    }
    const int target = int(w.size()) / s;
    return std::all_of(c.begin(), c.end(), [&](int v) { return v == target; });
}

Word draw_word(int s, int k, uint64_t seed, uint64_t index, uint64_t round) {
    Rng rng(seed, index, round);
    Word w(static_cast<size_t>(k));
    for (auto& x : w) x = uint8_t(rng.below(uint64_t(s)));
    // repair: vacate surplus occurrences at random positions, refill deficits left to right
    const int target = k / s;
    std::vector<std::vector<int>> pos(static_cast<size_t>(s));
    for (int i = 0; i < k; ++i) pos[w[i]].push_back(i);
    std::vector<int> vacant;
    for (int x = 0; x < s; ++x) {
        auto& p = pos[x];
        int surplus = int(p.size()) - target;
        for (int r = 0; r < surplus; ++r) {
            size_t pick = size_t(r) + rng.below(p.size() - size_t(r));
            std::swap(p[size_t(r)], p[pick]);
            vacant.push_back(p[size_t(r)]);
        }
    }
    std::sort(vacant.begin(), vacant.end());
    size_t v = 0;
    for (int x = 0; x < s; ++x)
        for (int d = target - int(pos[x].size()); d > 0; --d) w[vacant[v++]] = uint8_t(x);
    return w;
}

} // namespace

SelectionReport verify_selection(const WordSelection& sel) {
    SelectionReport rep;
    rep.threshold = separation_threshold(sel.alphabet, sel.eps);
    const int n = int(sel.words.size());
    for (const auto& w : sel.words) {
        if (int(w.size()) != sel.k) throw WordError("word length differs from k");
        rep.uniform = rep.uniform && (sel.k % sel.alphabet == 0) && is_uniform(w, sel.alphabet);
    }
    if (n == 0) return rep;
    const int limit = shift_limit(sel.k, sel.eps);
    std::vector<BitWord> bits;
    for (const auto& w : sel.words) bits.push_back(to_bits(w, sel.alphabet));
    std::vector<Worst> pair_w(static_cast<size_t>(n)), self_w(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        Worst pw, sw;
        for (int j = 0; j < n; ++j) {
            Worst w = scan_pair(bits, i, j, limit, -1.0);
            if (i == j) sw = w;
            else if (w.d < pw.d) pw = w;
        }
        pair_w[size_t(i)] = pw;
        self_w[size_t(i)] = sw;
    }
    Worst worst;
    for (int i = 0; i < n; ++i) {
        rep.min_pair = std::min(rep.min_pair, pair_w[size_t(i)].d);
        rep.min_self = std::min(rep.min_self, self_w[size_t(i)].d);
        for (const Worst& w : {pair_w[size_t(i)], self_w[size_t(i)]})
            if (w.i >= 0 && w.d < worst.d) worst = w;
    }
    rep.min_pair = std::min(rep.min_pair, 1.0);
    rep.min_self = std::min(rep.min_self, 1.0);
    if (worst.i >= 0) {
        rep.worst = worst.d;
        rep.worst_i = worst.i;
        rep.worst_j = worst.j;
        rep.worst_t = worst.t;
    }
    return rep;
}

WordSelection sample_selection(int s, int k, int N, double eps, uint64_t seed, const SampleOptions& opt) {
    if (s < 2) throw WordError("alphabet size must be >= 2");
    if (k < 1 || k % s != 0) throw WordError("word length must be a positive multiple of the alphabet size");
    if (N < 1) throw WordError("need at least one word");
    if (s > 255) throw WordError("alphabet size above 255 not supported");
    WordSelection sel;
    sel.alphabet = s;
    sel.k = k;
    sel.eps = eps;
    sel.seed = seed;
    sel.words.resize(static_cast<size_t>(N));
    const double thr = separation_threshold(s, eps);
    const int limit = shift_limit(k, eps);
    std::vector<char> redraw(static_cast<size_t>(N), 1);
    std::vector<BitWord> bits(static_cast<size_t>(N));
    Worst last;
    for (int round = 0; round < opt.max_rounds; ++round) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < N; ++i) {
            if (!redraw[size_t(i)]) continue;
            sel.words[size_t(i)] = draw_word(s, k, seed, uint64_t(i), uint64_t(round));
            bits[size_t(i)] = to_bits(sel.words[size_t(i)], s);
        }
        // a failing pair redraws its later word; a failing self-shift redraws the word
        std::vector<Worst> fail(static_cast<size_t>(N));
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i <= j && fail[size_t(j)].i < 0; ++i) {
                Worst w = scan_pair(bits, i, j, limit, thr);
                if (w.d < thr) {
                    fail[size_t(j)] = w;
                    break;
                }
                if (i != j) {
                    w = scan_pair(bits, j, i, limit, thr);
                    if (w.d < thr) fail[size_t(j)] = w;
                }
            }
        }
        bool any = false;
        last = Worst{};
        for (int j = 0; j < N; ++j) {
            redraw[size_t(j)] = fail[size_t(j)].i >= 0;
            if (redraw[size_t(j)]) {
                any = true;
                if (fail[size_t(j)].d < last.d) last = fail[size_t(j)];
            }
        }
        if (!any) {
            sel.rounds = round + 1;
            sel.verified = true;
            return sel;
        }
    }
    std::ostringstream os;
    os << "word selection failed after " << opt.max_rounds << " rounds: words " << last.i << "," << last.j << " shift "
       << last.t << " distance " << fmt_double(last.d) << " < threshold " << fmt_double(thr)
       << " (word length likely too short for these parameters)";
    throw WordError(os.str());
}

std::vector<int> assemble_W(const WordSelection& theta, int q) {
    if (int(theta.words.size()) != q) throw WordError("assemble_W: need exactly q words");
    std::vector<int> W;
    W.reserve(size_t(2) * size_t(q) * size_t(q));
    for (const auto& w : theta.words) {
        if (int(w.size()) != q) throw WordError("assemble_W: each word must have length q");
        for (auto x : w) W.push_back(x);
    }
    const size_t half = W.size();
    for (size_t i = 0; i < half; ++i) W.push_back((W[i] + 1) % theta.alphabet);
    return W;
}

char base36_digit(int v) {
    if (v < 0 || v >= 36) throw WordError("symbol not representable in base 36");
    return v < 10 ? char('0' + v) : char('a' + v - 10);
}

int base36_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
    throw WordError(std::string("bad base-36 digit '") + c + "'");
}

void write_selection(std::ostream& os, const WordSelection& sel) {
    os << sel.alphabet << " " << sel.k << " " << sel.words.size() << " " << fmt_double(sel.eps) << " " << sel.seed << "\n";
    for (const auto& w : sel.words) {
        std::string line;
        line.reserve(w.size());
        for (auto x : w) line.push_back(base36_digit(x));
        os << line << "\n";
    }
}

WordSelection read_selection(std::istream& is) {
    WordSelection sel;
    std::string header;
    if (!std::getline(is, header)) throw WordError("selection file: missing header");
    std::istringstream hs(header);
    size_t n = 0;
    std::string eps;
    if (!(hs >> sel.alphabet >> sel.k >> n >> eps >> sel.seed)) throw WordError("selection file: bad header");
    sel.eps = std::stod(eps);
    std::string line;
    while (sel.words.size() < n && std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Word w;
        for (char c : line) w.push_back(uint8_t(base36_value(c)));
        if (int(w.size()) != sel.k) throw WordError("selection file: word of wrong length");
        sel.words.push_back(std::move(w));
    }
    if (sel.words.size() != n) throw WordError("selection file: fewer words than the header states");
    sel.verified = verify_selection(sel).ok();
    return sel;
}

} // namespace abc
