#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "support/random_circuits.hpp"
#include "tspower/oracle.hpp"
#include "tspower/power.hpp"

using namespace tspower;

namespace {

LineSpectrum flicker_voltage() {
  const double a = 10.0 * std::numbers::sqrt2;
  return LineSpectrum({{0.8, 0.05 * a}, {1.0, a}, {1.2, 0.05 * a}}, Unit::volt);
}

Netlist flicker_load() {
  return Netlist({{"R1", BranchKind::resistor, 10.0, "p", "0"}, {"C1", BranchKind::capacitor, 0.3, "p", "0"}},
                 {"p", "0"});
}

void BM_Multiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  testing::SourceOptions opt;
  opt.max_lines = static_cast<std::size_t>(state.range(0));
  opt.max_harmonic = static_cast<int>(state.range(0));
  const auto f = testing::random_source(rng, opt);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(f, f));
}
BENCHMARK(BM_Multiply)->Arg(4)->Arg(16)->Arg(64);

void BM_SolveRandomNetlist(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto net = testing::random_netlist(rng);
  const auto u = testing::random_source(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve(net, u));
}
BENCHMARK(BM_SolveRandomNetlist);

void BM_ScaledFlicker(benchmark::State& state) {
  const auto sol = solve(flicker_load(), flicker_voltage());
  const auto grid = TimeScaleGrid::defaults_for(sol.source());
  for (auto _ : state) benchmark::DoNotOptimize(scaled(sol, grid));
}
BENCHMARK(BM_ScaledFlicker)->Unit(benchmark::kMicrosecond);

void BM_BudeanuFlicker(benchmark::State& state) {
  const auto sol = solve(flicker_load(), flicker_voltage());
  for (auto _ : state) benchmark::DoNotOptimize(budeanu(sol));
}
BENCHMARK(BM_BudeanuFlicker);

void BM_FftHilbert(benchmark::State& state) {
  const auto f = flicker_voltage();
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = sample(f, 0.0, f.common_period() / static_cast<double>(n), n);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::fft_hilbert(x));
}
BENCHMARK(BM_FftHilbert)->Arg(1024)->Arg(4096);

void BM_OdeSteadyState(benchmark::State& state) {
  const Netlist net({{"R1", BranchKind::resistor, 1.0, "p", "m"}, {"L1", BranchKind::inductor, 0.5, "m", "0"}},
                    {"p", "0"});
  const auto u = LineSpectrum::cosine(1.0, 1.0, 0.0, Unit::volt);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::ode_steady_state(net, u, 10));
}
BENCHMARK(BM_OdeSteadyState)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
