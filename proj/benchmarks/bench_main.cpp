#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "styledisp/cluster.hpp"
#include "styledisp/reducer.hpp"
#include "styledisp/rng.hpp"
#include "styledisp/stylometry.hpp"

using namespace styledisp;

namespace {

Matrix random_rows(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal() + static_cast<double>(i % 4) * 3.0 * (j == i % 4);
    return m;
}

void BM_Umap(benchmark::State& state) {
    const Matrix m = random_rows(state.range(0), 64, 1);
    for (auto _ : state) benchmark::DoNotOptimize(umap_reduce(m, 2, UmapParams{}, 7));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Umap)->Arg(80)->Arg(292)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Pca(benchmark::State& state) {
    const Matrix m = random_rows(state.range(0), 768, 2);
    for (auto _ : state) benchmark::DoNotOptimize(pca_reduce(m, 10));
}
BENCHMARK(BM_Pca)->Arg(146)->Arg(292)->Unit(benchmark::kMillisecond);

void BM_Kmeans(benchmark::State& state) {
    const Matrix m = random_rows(state.range(0), static_cast<Eigen::Index>(state.range(1)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(kmeans(m, 4, 11));
}
BENCHMARK(BM_Kmeans)->Args({292, 2})->Args({292, 768})->Unit(benchmark::kMillisecond);

void BM_Stylometry(benchmark::State& state) {
    std::string text;
    for (int i = 0; i < state.range(0); ++i)
        text += "The bus was crowded at noon, and a young man with a long neck complained loudly. ";
    const auto words = FunctionWords::builtin("en");
    Document doc{"d", "en", text, cells::kQueneauRef, "bus", "s", Origin::Reference};
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(doc, "en", words));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Stylometry)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
