#include <benchmark/benchmark.h>

#include <chandef/bottleneck.hpp>
#include <chandef/pid.hpp>
#include <chandef/projection.hpp>

#include <random>

namespace {

using namespace chandef;

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ProbVector random_prob(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = -std::log(std::max(u01(rng), 1e-300));
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return ProbVector(v);
}

Channel random_channel(std::mt19937_64& rng, std::size_t in, std::size_t out) {
  std::vector<double> rows;
  for (std::size_t i = 0; i < in; ++i) {
    auto r = random_prob(rng, out);
    rows.insert(rows.end(), r.probs().begin(), r.probs().end());
  }
  return Channel(in, out, rows);
}

void bm_deficiency(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto d = random_channel(rng, n, n);
  auto kappa = random_channel(rng, n, n);
  auto pi = random_prob(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(deficiency(d, kappa, pi).value);
}
BENCHMARK(bm_deficiency)->Arg(3)->Arg(5)->Arg(8);

void bm_unique_information(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  ProbVector flat = random_prob(rng, n * n * n);
  Joint3 p(n, n, n, flat.probs());
  for (auto _ : state) benchmark::DoNotOptimize(unique_information(p).ui_bits);
}
BENCHMARK(bm_unique_information)->Arg(2)->Arg(3);

void bm_ib_solve(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  ProbVector flat = random_prob(rng, n * n);
  Matrix pxy(n, n, flat.probs());
  BottleneckConfig cfg;
  cfg.beta = 0.2;
  cfg.z_cardinality = 2;
  for (auto _ : state) benchmark::DoNotOptimize(ib_solve(pxy, cfg).objective_bits);
}
BENCHMARK(bm_ib_solve)->Arg(2)->Arg(4);

void bm_db_solve(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto pi = random_prob(rng, n);
  auto kappa = random_channel(rng, n, n);
  BottleneckConfig cfg;
  cfg.beta = 0.2;
  cfg.z_cardinality = 2;
  for (auto _ : state) benchmark::DoNotOptimize(db_solve(pi, kappa, cfg).objective_bits);
}
BENCHMARK(bm_db_solve)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
