#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vlcrelay/analysis.hpp"
#include "vlcrelay/monte_carlo.hpp"
#include "vlcrelay/scenario.hpp"
#include "vlcrelay/signal.hpp"

using namespace vlcrelay;

namespace {

SampledSignal random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(n);
  for (auto& x : v) x = g(rng);
  return SampledSignal(std::move(v), 5e-9);
}

const LinkModel& office() {
  static const LinkModel model(
      RelayLink(synthesize_relay_channels(default_office_room(), {}, OfdmConfig{}.sample_interval()), OfdmConfig{}));
  return model;
}

void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampledSignal a = random_signal(n, 1);
  const SampledSignal b = random_signal(n / 4 + 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(64, 65536);

void BM_Dft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampledSignal x = random_signal(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dft(x, n));
}
BENCHMARK(BM_Dft)->Arg(256)->Arg(4096)->Arg(16384);

void BM_FdRelayCir(benchmark::State& state) {
  const RelayChannelSet ch = office().link().channels();
  const LinkBudget b = LinkBudget{}.with_power(LinkBudget::dbm_to_watts(10.0), 0.5);
  const double g_a = office().link().g_a(b);
  for (auto _ : state) benchmark::DoNotOptimize(fd_relay_cir(ch, b, g_a, LedModel{}));
}
BENCHMARK(BM_FdRelayCir)->Unit(benchmark::kMillisecond);

void BM_AverageBer(benchmark::State& state) {
  const LinkBudget b = LinkBudget{}.with_power(LinkBudget::dbm_to_watts(10.0), 0.6);
  const auto mode = static_cast<RelayMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(office().average_ber(mode, ModulationScheme::psk2(), b));
}
BENCHMARK(BM_AverageBer)->DenseRange(0, 2);

void BM_OptimizeKp(benchmark::State& state) {
  const LinkBudget b = LinkBudget{}.with_power(LinkBudget::dbm_to_watts(10.0), 0.5);
  const KpGrid grid{0.01, 0.99, 1e-3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_kp(office(), RelayMode::full_duplex, ModulationScheme::bpsk_sim(), b, grid));
  }
}
BENCHMARK(BM_OptimizeKp)->Unit(benchmark::kMillisecond);

void BM_MonteCarloFrames(benchmark::State& state) {
  const auto mode = static_cast<RelayMode>(state.range(0));
  const std::vector<McPoint> grid{{10.0, 0.5, std::nullopt}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_monte_carlo(office().link(), ModulationScheme::qam(4), mode, LinkBudget{}, grid, {10160, 1, 1}));
  }
  // 40 frames of 254 bits
  state.SetItemsProcessed(state.iterations() * 40);
}
BENCHMARK(BM_MonteCarloFrames)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
