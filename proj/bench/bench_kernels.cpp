// Serial reference loops against their OpenMP counterparts, plus one full
// integrator step on the default critical configuration.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "gbq/evolution.hpp"
#include "gbq/kernels.hpp"

namespace k = gbq::kernels;

namespace {

std::vector<double> wave(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.37 * static_cast<double>(i)) * std::exp(-1e-5 * i);
  return v;
}

template <double (*F)(std::span<const double>, std::span<const double>)>
void BM_dot(benchmark::State& st) {
  const auto a = wave(st.range(0)), b = wave(st.range(0) + 1);
  for (auto _ : st) benchmark::DoNotOptimize(F(a, std::span(b).first(a.size())));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <void (*F)(std::span<const double>, double, std::span<double>)>
void BM_power(benchmark::State& st) {
  const auto u = wave(st.range(0));
  std::vector<double> out(u.size());
  for (auto _ : st) {
    F(u, 2.5, out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <double (*F)(std::span<const double>, double)>
void BM_abs_power_sum(benchmark::State& st) {
  const auto u = wave(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(F(u, 4.5));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <void (*F)(std::span<const double>, double*)>
void BM_circulant(benchmark::State& st) {
  const auto c = wave(st.range(0));
  std::vector<double> out(c.size() * c.size());
  for (auto _ : st) {
    F(c, out.data());
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}

void BM_integrator_step(benchmark::State& st) {
  const double p = 2.0, w = 1.0 / std::sqrt(2.0);
  const gbq::Grid g = gbq::make_grid(40.0, st.range(0));
  const gbq::Integrator in(g, p, 5e-3);
  gbq::FieldPair u = gbq::soliton_profile({p, w}, g).pair;
  for (auto _ : st) in.step(u, 1e3, 0.0);
}

}  // namespace

BENCHMARK(BM_dot<k::serial::dot>)->Name("dot/serial")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_dot<k::parallel::dot>)->Name("dot/parallel")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_power<k::serial::power_nonlinearity>)->Name("power/serial")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_power<k::parallel::power_nonlinearity>)->Name("power/parallel")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_abs_power_sum<k::serial::abs_power_sum>)->Name("abs_power_sum/serial")->Range(1 << 10, 1 << 22);
BENCHMARK(BM_abs_power_sum<k::parallel::abs_power_sum>)->Name("abs_power_sum/parallel")->Range(1 << 10, 1 << 22);
BENCHMARK(BM_circulant<k::serial::fill_circulant>)->Name("circulant/serial")->Arg(512)->Arg(2048);
BENCHMARK(BM_circulant<k::parallel::fill_circulant>)->Name("circulant/parallel")->Arg(512)->Arg(2048);
BENCHMARK(BM_integrator_step)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
