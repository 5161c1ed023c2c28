// Serial reference kernels against their OpenMP counterparts.
#include "abc/complexity.hpp"
#include "abc/kernels.hpp"
#include "abc/normest.hpp"

#include <benchmark/benchmark.h>

using namespace abc;

namespace {

AbCSystem desk() {
    StageParams s;
    s.n = 1;
    s.q = 8;
    s.l = 64;
    s.alpha = BigRational(1, 8);
    s.eps = BigRational(1, 8);
    return make_system(build_untwisted_h(s), s);
}

Backend backend(const benchmark::State& st) { return st.range(0) ? Backend::Parallel : Backend::Serial; }

void BM_OrbitTable(benchmark::State& st) {
    auto sys = desk();
    BowenConfig c{4096, 0.125, 24, {}, 1, 0};
    for (auto _ : st) benchmark::DoNotOptimize(bowen_table(sys, c, backend(st)).data.data());
}

void BM_GreedyCover(benchmark::State& st) {
    auto sys = desk();
    auto tab = bowen_table(sys, {512, 0.125, 32, {}, 1, 0});
    for (auto _ : st) benchmark::DoNotOptimize(greedy_cover(tab, 0.125, backend(st)));
}

void BM_GreedySeparated(benchmark::State& st) {
    auto sys = desk();
    auto tab = bowen_table(sys, {512, 0.125, 32, {}, 1, 0});
    for (auto _ : st) benchmark::DoNotOptimize(greedy_separated(tab, 0.125, backend(st)).count);
}

void BM_HammingCover(benchmark::State& st) {
    auto sys = desk();
    for (auto _ : st)
        benchmark::DoNotOptimize(hamming_cover(sys, Partition::grid(4, 4), 1024, 0.125, 2000, 3, backend(st)).count);
}

} // namespace

BENCHMARK(BM_OrbitTable)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreedyCover)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreedySeparated)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HammingCover)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
