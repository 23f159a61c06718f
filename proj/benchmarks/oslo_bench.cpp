#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "oslo/level_select.hpp"
#include "oslo/pipeline.hpp"
#include "oslo/saliency.hpp"
#include "oslo/segment.hpp"
#include "oslo/synthetic.hpp"

namespace {

using namespace oslo;

const SynthSample& sample(int size) {
    static std::map<int, SynthSample> cache;
    auto it = cache.find(size);
    if (it == cache.end()) {
        SynthConfig c = suite_configs(SuiteKind::Hard, 1)[0];
        c.width = size;
        c.height = size;
        c.cell_count = std::max(4, 20 * size / 1024);
        c.close_pairs = 2;
        c.distractor_nuclei = 2;
        c.distractors_on_processes = 1;
        it = cache.emplace(size, generate(c)).first;
    }
    return it->second;
}

void BM_Saliency(benchmark::State& state) {
    const SynthSample& s = sample(static_cast<int>(state.range(0)));
    const GaussianKernel kernel = GaussianKernel::binomial(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(normalize(ft_saliency(s.green, kernel)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.green.size()));
}
BENCHMARK(BM_Saliency)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_RatioTable(benchmark::State& state) {
    const SynthSample& s = sample(static_cast<int>(state.range(0)));
    const FrontEnd front = compute_front_end(s.green, s.white, PipelineConfig{});
    const std::vector<double> levels = uniform_grid(256);
    const bool direct = state.range(1) != 0;
    for (auto _ : state) {
        if (direct) {
            benchmark::DoNotOptimize(build_ratio_table_direct(front.s_g, front.white_set, levels));
        } else {
            benchmark::DoNotOptimize(build_ratio_table(front.s_g, front.white_set, levels));
        }
    }
}
BENCHMARK(BM_RatioTable)
    ->ArgsProduct({{512, 1024}, {0, 1}})
    ->ArgNames({"size", "direct"})
    ->Unit(benchmark::kMillisecond);

void BM_Watershed(benchmark::State& state) {
    const SynthSample& s = sample(static_cast<int>(state.range(0)));
    const PipelineRun run = run_detailed(s.green, s.white, PipelineConfig{});
    for (auto _ : state) {
        Grid<double> surface = squared_distance_transform(run.b_c);
        for (double& v : surface.values()) {
            v = -std::sqrt(v);
        }
        benchmark::DoNotOptimize(watershed(surface, run.markers, run.b_c));
    }
}
BENCHMARK(BM_Watershed)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
    const SynthSample& s = sample(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(s.green, s.white, PipelineConfig{}));
    }
}
BENCHMARK(BM_Pipeline)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
