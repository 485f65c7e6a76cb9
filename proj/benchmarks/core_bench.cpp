#include <vector>

#include <benchmark/benchmark.h>

#include "procgeo/dimension.hpp"
#include "procgeo/graph.hpp"
#include "procgeo/iterator.hpp"
#include "procgeo/likelihood.hpp"
#include "procgeo/noise.hpp"
#include "procgeo/relational.hpp"

namespace {

using namespace procgeo;

void BM_SafeInverse(benchmark::State& state) {
  const auto b = init_matrix(state.range(0), 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(safe_inverse(b, 1e-8));
}
BENCHMARK(BM_SafeInverse)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_IterateStepWithNoise(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  auto b = init_matrix(n, 1.0, 4);
  Rng rng(9);
  const NoiseSpec noise{0.01, 1e-3, 1.0, 2.0};
  for (auto _ : state) {
    b = iterate_step(b, 0.1, draw_noise(n, noise, rng), 1e-8);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_IterateStepWithNoise)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// Census cost per recorded step: threshold, components, largest-gebit dimension.
void BM_Census(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(1);
  const auto w = draw_noise(n, NoiseSpec{0.05, 4.0 / static_cast<double>(n), 2.0, 3.0}, rng);
  for (auto _ : state) {
    const auto g = extract_links(w, AbsoluteThreshold{1.0});
    const auto parts = connected_components(g);
    if (parts.front().size() >= 10) {
      try {
        benchmark::DoNotOptimize(empirical_dimension(parts.front()));
      } catch (const std::exception&) {
      }
    }
  }
}
BENCHMARK(BM_Census)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LogLikelihood(benchmark::State& state) {
  std::vector<double> d(static_cast<std::size_t>(state.range(0)), 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(d, 1e-6));
}
BENCHMARK(BM_LogLikelihood)->Arg(10)->Arg(40)->Arg(120);

void BM_RelaxProfile(benchmark::State& state) {
  const LikelihoodQuery q{5000, 1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(relax_profile(q, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_RelaxProfile)->Arg(10)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_MaximizeProfile(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximize_profile(LikelihoodQuery{n, 1e-6}, DepthRange::defaults_for(n)));
  }
}
BENCHMARK(BM_MaximizeProfile)->Arg(500)->Arg(5000)->Iterations(1)->Unit(benchmark::kSecond);

void BM_BruteForce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_profile(LikelihoodQuery{n, 0.1}));
}
BENCHMARK(BM_BruteForce)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
