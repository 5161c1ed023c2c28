#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace abc {

using Word = std::vector<uint8_t>;

struct WordSelection {
    int alphabet = 2;
    int k = 0;
    double eps = 0;
    uint64_t seed = 0;
    std::vector<Word> words;
    bool verified = false;
    int rounds = 0;  // sampling rounds used
};

class WordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Normalized mismatch count between w[t..] and w2[..k-t).
double hamming_shift(const Word& w, const Word& w2, int t);

// 1 - 1/s - eps*s
double separation_threshold(int s, double eps);
// Shifts 0 <= t < (1-eps)k are checked.
int shift_limit(int k, double eps);

struct SelectionReport {
    bool uniform = true;
    double min_pair = 1;       // over ordered pairs i != j and admissible shifts
    double min_self = 1;       // over words and shifts t >= 1
    int worst_i = -1, worst_j = -1, worst_t = -1;
    double worst = 1;
    double threshold = 0;
    bool ok() const { return uniform && worst >= threshold; }
    std::string text() const;
};

SelectionReport verify_selection(const WordSelection& sel);

struct SampleOptions {
    int max_rounds = 50;
};

// Throws WordError with the worst offending pair when the retry budget runs out.
WordSelection sample_selection(int s, int k, int N, double eps, uint64_t seed, const SampleOptions& opt = {});

// W = wbar wtilde, wbar the concatenation of the q words, wtilde = wbar + 1 mod s.
std::vector<int> assemble_W(const WordSelection& theta, int q);

void write_selection(std::ostream& os, const WordSelection& sel);
WordSelection read_selection(std::istream& is);

char base36_digit(int v);
int base36_value(char c);

// Bit-plane form of a word for fast shifted comparisons.
struct BitWord {
    int k = 0;
    std::vector<std::vector<uint64_t>> planes;  // planes[symbol][k/64 + 1]
};
BitWord to_bits(const Word& w, int alphabet);
// Matches between a[t..] and b[..k-t).
int shifted_matches(const BitWord& a, const BitWord& b, int t);

} // namespace abc
