#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sibmm/copula.hpp"
#include "sibmm/default_profile.hpp"
#include "sibmm/model.hpp"
#include "sibmm/normal.hpp"
#include "sibmm/portfolio.hpp"
#include "sibmm/risk.hpp"
#include "sibmm/simulate.hpp"

using namespace sibmm;

namespace {

void bm_bivariate_norm_cdf(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) / 100.0;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> h(1024), k(1024);
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = z(rng);
    k[i] = z(rng);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bivariate_norm_cdf(h[i], k[i], r));
    i = (i + 1) & 1023;
  }
}
BENCHMARK(bm_bivariate_norm_cdf)->Arg(-40)->Arg(40)->Arg(95);

void bm_conditional_pd(benchmark::State& state) {
  const std::vector<DefaultProfile> profiles{
      gaussian_profile(0.164, 0.02), clayton_profile(0.723, 0.02),
      survival_clayton_profile(0.723, 0.02)};
  const auto& p = profiles[static_cast<std::size_t>(state.range(0))];
  double t = 0.0;
  for (auto _ : state) {
    t += 0.000977;
    if (t >= 1.0) t -= 1.0;
    benchmark::DoNotOptimize(p.conditional_pd(t));
  }
  state.SetLabel(p.describe());
}
BENCHMARK(bm_conditional_pd)->DenseRange(0, 2);

void bm_envelope(benchmark::State& state) {
  const std::vector<DefaultProfile> members{gaussian_profile(0.114, 0.02),
                                            gaussian_profile(0.214, 0.02),
                                            clayton_profile(0.723, 0.02)};
  for (auto _ : state) benchmark::DoNotOptimize(envelope(members));
}
BENCHMARK(bm_envelope);

void bm_simulate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto borrowers = homogeneous_portfolio(n, 0.02, LgdSpec::deterministic(0.1));
  const auto model = portfolio_model(ModelSpec{ModelFamily::GaussianInterval}, borrowers);
  const McSettings mc{50'000, 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_losses(model.upper, borrowers, mc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc.samples));
}
BENCHMARK(bm_simulate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_avar(benchmark::State& state) {
  const auto borrowers = homogeneous_portfolio(1000, 0.02, LgdSpec::deterministic(0.1));
  const auto model = portfolio_model(ModelSpec{ModelFamily::ClaytonInterval}, borrowers);
  const auto sample = simulate_losses(model.upper, borrowers, McSettings{static_cast<std::uint64_t>(state.range(0)), 1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(avar(sample, 0.99));
}
BENCHMARK(bm_avar)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void bm_exact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto borrowers = homogeneous_portfolio(n, 0.05, LgdSpec::deterministic(0.4));
  const auto model = portfolio_model(ModelSpec{ModelFamily::GaussClaytonHybrid}, borrowers);
  for (auto _ : state) benchmark::DoNotOptimize(exact_loss_distribution(model.upper, borrowers));
}
BENCHMARK(bm_exact)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
