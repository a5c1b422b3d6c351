#include "bri/evaluation.hpp"
#include "bri/ingest.hpp"
#include "bri/ranking.hpp"
#include "bri/synth.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace bri;

namespace {

struct Workload {
    Dataset dataset;
    LabelSet labels;
};

// synthetic data scaled up by country count; the 190 default is tiny
const Workload& workload(std::size_t countries) {
    static std::map<std::size_t, Workload> cache;
    auto it = cache.find(countries);
    if (it == cache.end()) {
        SynthConfig cfg;
        cfg.n_countries = countries;
        cfg.seed = 17;
        SynthData d = generate(cfg);
        it = cache.emplace(countries, Workload{normalize(d.data), std::move(d.labels)}).first;
    }
    return it->second;
}

Execution exec_of(const benchmark::State& state) {
    return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_Impute(benchmark::State& state) {
    const Workload& w = workload(static_cast<std::size_t>(state.range(0)));
    const ImputationConfig cfg{10, Metric::Cosine};
    for (auto _ : state) benchmark::DoNotOptimize(impute(w.dataset, cfg, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Rank(benchmark::State& state) {
    const Workload& w = workload(static_cast<std::size_t>(state.range(0)));
    const ImputationConfig cfg{10, Metric::Cosine};
    const WeightingScheme scheme = WeightingScheme::sigmoid(0.7);
    for (auto _ : state) benchmark::DoNotOptimize(rank(w.dataset, scheme, cfg, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CrossValidate(benchmark::State& state) {
    const Workload& w = workload(static_cast<std::size_t>(state.range(0)));
    const auto points = featurize(w.dataset, w.labels, WeightingScheme::linear(), {10, Metric::Cosine});
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cross_validate(points, ClassifierKind::Svm, 10, Granularity::ThreeClass, 1, exec_of(state)));
    }
}

// second argument: 0 serial, 1 OpenMP
void sizes(benchmark::internal::Benchmark* b) {
    for (long n : {190L, 1000L, 4000L}) {
        b->Args({n, 0});
        b->Args({n, 1});
    }
    b->ArgNames({"countries", "omp"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

} // namespace

BENCHMARK(BM_Impute)->Apply(sizes);
BENCHMARK(BM_Rank)->Apply(sizes);
BENCHMARK(BM_CrossValidate)->Apply(sizes);

BENCHMARK_MAIN();
