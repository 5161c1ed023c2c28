#pragma once

#include "abc/system.hpp"

#include <cstdint>
#include <vector>

namespace abc {

// Orbit samples for many points: row i holds T^{t_j}(x_i) for the shared sample times t_j.
struct OrbitTable {
    size_t points = 0;
    size_t samples = 0;
    std::vector<Pt> data;
    const Pt* row(size_t i) const { return data.data() + i * samples; }
};

// Coded orbits: row i holds the cell labels along the orbit of point i.
struct CodeTable {
    size_t points = 0;
    size_t length = 0;
    std::vector<uint16_t> data;
    const uint16_t* row(size_t i) const { return data.data() + i * length; }
};

class Partition;

// Rotation offsets t_j * alpha mod 1, computed exactly once per sample time.
std::vector<double> rotation_offsets(const AbCSystem& sys, uint64_t L, uint64_t stride);

// Bowen distance of two table rows; stops early once the running max reaches `stop_at`.
double row_bowen(const OrbitTable& tab, size_t a, size_t b, double stop_at = 2.0);
// Fraction of positions where two coded rows differ; stops early once it reaches `stop_at`.
double row_hamming(const CodeTable& tab, size_t a, size_t b, double stop_at = 2.0);

namespace serial {
OrbitTable orbit_table(const AbCSystem& sys, const std::vector<Pt>& preimages, const std::vector<double>& offsets);
void mark_within(const OrbitTable& tab, size_t center, double eps, std::vector<char>& mark);
bool any_within(const OrbitTable& tab, size_t idx, const std::vector<size_t>& centers, double eps);
CodeTable code_table(const AbCSystem& sys, const Partition& part, const std::vector<Pt>& preimages,
                     const std::vector<double>& offsets);
void hamming_mark(const CodeTable& tab, size_t center, double eps, std::vector<char>& mark);
} // namespace serial

namespace omp {
OrbitTable orbit_table(const AbCSystem& sys, const std::vector<Pt>& preimages, const std::vector<double>& offsets);
void mark_within(const OrbitTable& tab, size_t center, double eps, std::vector<char>& mark);
bool any_within(const OrbitTable& tab, size_t idx, const std::vector<size_t>& centers, double eps);
CodeTable code_table(const AbCSystem& sys, const Partition& part, const std::vector<Pt>& preimages,
                     const std::vector<double>& offsets);
void hamming_mark(const CodeTable& tab, size_t center, double eps, std::vector<char>& mark);
} // namespace omp

enum class Backend { Serial, Parallel };

} // namespace abc
