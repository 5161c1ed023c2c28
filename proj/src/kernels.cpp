#include "abc/kernels.hpp"

#include "abc/complexity.hpp"

#include <atomic>
#include <cmath>

namespace abc {

std::vector<double> rotation_offsets(const AbCSystem& sys, uint64_t L, uint64_t stride) {
    RotationClock clock(sys.alpha_next);
    std::vector<double> off;
    off.reserve(sample_count(L, stride));
    for (uint64_t t = 0; t < L; t += stride) off.push_back(clock.offset(t));
    return off;
}

double row_bowen(const OrbitTable& tab, size_t a, size_t b, double stop_at) {
    const Pt* A = tab.row(a);
    const Pt* B = tab.row(b);
    double d = 0;
    for (size_t s = 0; s < tab.samples; ++s) {
        d = std::max(d, torus_dist(A[s], B[s]));
        if (d >= stop_at) break;
    }
    return d;
}

double row_hamming(const CodeTable& tab, size_t a, size_t b, double stop_at) {
    const uint16_t* A = tab.row(a);
    const uint16_t* B = tab.row(b);
    const size_t n = tab.length;
    const double lim = stop_at * double(n);
    size_t diff = 0;
    constexpr size_t chunk = 256;
    for (size_t s = 0; s < n; s += chunk) {
        const size_t e = std::min(n, s + chunk);
        for (size_t i = s; i < e; ++i) diff += (A[i] != B[i]);
        if (double(diff) >= lim) break;
    }
    return double(diff) / double(n);
}

namespace {

void fill_row(const AbCSystem& sys, Pt u, const std::vector<double>& off, Pt* out) {
    for (size_t s = 0; s < off.size(); ++s) out[s] = sys.H->forward({wrap01(u.x + off[s]), u.y});
}

void fill_code(const AbCSystem& sys, const Partition& part, Pt u, const std::vector<double>& off, uint16_t* out) {
    for (size_t s = 0; s < off.size(); ++s) out[s] = uint16_t(part.label(sys.H->forward({wrap01(u.x + off[s]), u.y})));
}

OrbitTable alloc_table(size_t n, size_t m) {
    OrbitTable t;
    t.points = n;
    t.samples = m;
    t.data.resize(n * m);
    return t;
}

CodeTable alloc_codes(size_t n, size_t m) {
    CodeTable t;
    t.points = n;
    t.length = m;
    t.data.resize(n * m);
    return t;
}

} // namespace

namespace serial {

OrbitTable orbit_table(const AbCSystem& sys, const std::vector<Pt>& pre, const std::vector<double>& off) {
    OrbitTable t = alloc_table(pre.size(), off.size());
    for (size_t i = 0; i < pre.size(); ++i) fill_row(sys, pre[i], off, t.data.data() + i * off.size());
    return t;
}

void mark_within(const OrbitTable& tab, size_t c, double eps, std::vector<char>& mark) {
    for (size_t i = 0; i < tab.points; ++i)
        if (!mark[i] && row_bowen(tab, i, c, eps) < eps) mark[i] = 1;
}

bool any_within(const OrbitTable& tab, size_t idx, const std::vector<size_t>& centers, double eps) {
    for (size_t c : centers)
        if (row_bowen(tab, idx, c, eps) < eps) return true;
    return false;
}

CodeTable code_table(const AbCSystem& sys, const Partition& part, const std::vector<Pt>& pre,
                     const std::vector<double>& off) {
    CodeTable t = alloc_codes(pre.size(), off.size());
    for (size_t i = 0; i < pre.size(); ++i) fill_code(sys, part, pre[i], off, t.data.data() + i * off.size());
    return t;
}

void hamming_mark(const CodeTable& tab, size_t c, double eps, std::vector<char>& mark) {
    for (size_t i = 0; i < tab.points; ++i)
        if (!mark[i] && row_hamming(tab, i, c, eps) < eps) mark[i] = 1;
}

} // namespace serial

namespace omp {

OrbitTable orbit_table(const AbCSystem& sys, const std::vector<Pt>& pre, const std::vector<double>& off) {
    OrbitTable t = alloc_table(pre.size(), off.size());
    const long n = long(pre.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) fill_row(sys, pre[size_t(i)], off, t.data.data() + size_t(i) * off.size());
    return t;
}

void mark_within(const OrbitTable& tab, size_t c, double eps, std::vector<char>& mark) {
    const long n = long(tab.points);
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i)
        if (!mark[size_t(i)] && row_bowen(tab, size_t(i), c, eps) < eps) mark[size_t(i)] = 1;
}

bool any_within(const OrbitTable& tab, size_t idx, const std::vector<size_t>& centers, double eps) {
    std::atomic<bool> found{false};
    const long n = long(centers.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
        if (found.load(std::memory_order_relaxed)) continue;
        if (row_bowen(tab, idx, centers[size_t(i)], eps) < eps) found.store(true, std::memory_order_relaxed);
    }
    return found.load();
}

CodeTable code_table(const AbCSystem& sys, const Partition& part, const std::vector<Pt>& pre,
                     const std::vector<double>& off) {
    CodeTable t = alloc_codes(pre.size(), off.size());
    const long n = long(pre.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) fill_code(sys, part, pre[size_t(i)], off, t.data.data() + size_t(i) * off.size());
    return t;
}

void hamming_mark(const CodeTable& tab, size_t c, double eps, std::vector<char>& mark) {
    const long n = long(tab.points);
#pragma omp parallel for schedule(dynamic, 32)
    for (long i = 0; i < n; ++i)
        if (!mark[size_t(i)] && row_hamming(tab, size_t(i), c, eps) < eps) mark[size_t(i)] = 1;
}

} // namespace omp

} // namespace abc
