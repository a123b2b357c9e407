// Stage timings on a synthetic 450x375 pair (the Cones/Teddy size) with d in [0, 60].

#include "fbs/fbs.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

struct Pair {
    fbs::GrayImage left;
    fbs::GrayImage right;
};

const Pair& pair() {
    static const Pair p = [] {
        constexpr int w = 450;
        constexpr int h = 375;
        constexpr int shift = 17;
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> level(0, 255);
        fbs::GrayImage left(w, h), right(w, h);
        std::vector<double> tex(static_cast<std::size_t>(w + shift) * h);
        for (auto& t : tex) t = level(rng);
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                left(u, v) = tex[static_cast<std::size_t>(v) * (w + shift) + u];
                right(u, v) = tex[static_cast<std::size_t>(v) * (w + shift) + u + shift];
            }
        }
        return Pair{left, right};
    }();
    return p;
}

fbs::CostVolumePair volumes(int workers) {
    const fbs::FbsParams p;
    const auto& in = pair();
    return fbs::compute_cost_volumes(in.left, in.right, fbs::compute_block_stats(in.left, p.rho_ncc),
                                     fbs::compute_block_stats(in.right, p.rho_ncc), p, workers);
}

void BM_Cost(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(volumes(workers));
    }
}
BENCHMARK(BM_Cost)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Aggregation(benchmark::State& state) {
    fbs::FbsParams p;
    p.rho_agg = static_cast<int>(state.range(0));
    const auto vols = volumes(1);
    const auto spatial = fbs::build_spatial_weights(p.rho_agg, p.gamma_d);
    const auto range = fbs::build_range_weights(p.gamma_r);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fbs::bilateral_aggregate(vols.left, pair().left, spatial, range, 1));
    }
}
BENCHMARK(BM_Aggregation)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Wta(benchmark::State& state) {
    const auto vols = volumes(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fbs::wta_disparity(vols.left, 1));
    }
}
BENCHMARK(BM_Wta)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
    const fbs::FbsParams p;
    const int workers = static_cast<int>(state.range(0));
    const auto& in = pair();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fbs::estimate_disparity(in.left, in.right, p, {}, workers));
    }
    state.counters["Mde/s"] = benchmark::Counter(450.0 * 375.0 * p.d_max * 1e-6 * static_cast<double>(state.iterations()),
                                                 benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
