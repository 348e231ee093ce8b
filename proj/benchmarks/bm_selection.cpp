#include <benchmark/benchmark.h>

#include "ccffs/correlation.hpp"
#include "ccffs/dataset.hpp"
#include "ccffs/selector.hpp"

namespace {

ccffs::SelectorOptions engine(ccffs::SelectionMode mode) {
  ccffs::SelectorOptions opts;
  opts.mode_override = mode;
  return opts;
}

void BM_select_theta(benchmark::State& state) {
  const auto data = ccffs::synthetic_uniform(400, 60, 8, 99);
  for (auto _ : state) {
    auto report = ccffs::run(data, 30, engine(ccffs::SelectionMode::theta_angle));
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_select_theta)->Unit(benchmark::kMillisecond);

void BM_select_h(benchmark::State& state) {
  const auto data = ccffs::synthetic_uniform(400, 60, 8, 99);
  for (auto _ : state) {
    auto report = ccffs::run(data, 30, engine(ccffs::SelectionMode::h_correlation));
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_select_h)->Unit(benchmark::kMillisecond);

void BM_select_definition(benchmark::State& state) {
  // smaller instance: the definition engine recomputes the criterion from scratch
  const auto data = ccffs::synthetic_uniform(150, 25, 4, 99);
  for (auto _ : state) {
    auto report = ccffs::run(data, 12, engine(ccffs::SelectionMode::definition));
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_select_definition)->Unit(benchmark::kMillisecond);

void BM_evaluate_candidates_theta(benchmark::State& state) {
  const auto data = ccffs::synthetic_uniform(1000, 100, 10, 7);
  auto st = ccffs::init(data, engine(ccffs::SelectionMode::theta_angle));
  for (auto _ : state) {
    auto br = ccffs::evaluate_candidates(st);
    benchmark::DoNotOptimize(br);
  }
}
BENCHMARK(BM_evaluate_candidates_theta)->Unit(benchmark::kMicrosecond);

void BM_evaluate_candidates_h(benchmark::State& state) {
  const auto data = ccffs::synthetic_uniform(1000, 100, 10, 7);
  auto st = ccffs::init(data, engine(ccffs::SelectionMode::h_correlation));
  for (auto _ : state) {
    auto br = ccffs::evaluate_candidates(st);
    benchmark::DoNotOptimize(br);
  }
}
BENCHMARK(BM_evaluate_candidates_h)->Unit(benchmark::kMicrosecond);

void BM_gram_schmidt(benchmark::State& state) {
  const auto data = ccffs::synthetic_uniform(512, static_cast<Eigen::Index>(state.range(0)), 1, 3);
  for (auto _ : state) {
    auto w = ccffs::gram_schmidt(data.x.values);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_gram_schmidt)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_cca(benchmark::State& state) {
  const auto data = ccffs::synthetic_uniform(static_cast<Eigen::Index>(state.range(0)), 20, 5, 5);
  for (auto _ : state) {
    auto res = ccffs::cca(data.x.values, data.y.values);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_cca)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
