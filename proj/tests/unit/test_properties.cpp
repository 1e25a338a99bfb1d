#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "sibmm/copula.hpp"
#include "sibmm/default_profile.hpp"
#include "sibmm/portfolio.hpp"
#include "sibmm/risk.hpp"
#include "sibmm/simulate.hpp"

namespace sibmm {
namespace {

// Randomized checks over parameter space with fixed seeds.

TEST(PropertyTest, ProfilesStayInClass) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_pd(-9.0, -0.05);
  std::uniform_real_distribution<double> rho(0.001, 0.95);
  std::uniform_real_distribution<double> theta(0.01, 20.0);
  for (int i = 0; i < 60; ++i) {
    const double pd = std::exp(log_pd(rng));
    for (const auto& p : {gaussian_profile(rho(rng), pd), clayton_profile(theta(rng), pd),
                          survival_clayton_profile(theta(rng), pd)}) {
      const auto c = check_profile(p);
      EXPECT_TRUE(c.passes()) << p.describe() << " d2 " << c.min_second_diff << " end " << c.terminal_error;
    }
  }
}

TEST(PropertyTest, ParameterMonotonicity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double a = unit(rng);
    const double b = unit(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_TRUE(is_pointwise_leq(CopulaFamily::gaussian(lo), CopulaFamily::gaussian(hi), 15));
    EXPECT_TRUE(is_pointwise_leq(CopulaFamily::clayton(0.05 + 5 * lo), CopulaFamily::clayton(0.05 + 5 * hi), 15));
    EXPECT_TRUE(is_pointwise_leq(CopulaFamily::survival_clayton(0.05 + 5 * lo),
                                 CopulaFamily::survival_clayton(0.05 + 5 * hi), 15));
  }
}

TEST(PropertyTest, EnvelopeBracketsMembers) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rho(0.02, 0.5);
  for (int i = 0; i < 10; ++i) {
    const double pd = 0.001 + 0.3 * std::uniform_real_distribution<double>()(rng);
    std::vector<DefaultProfile> family;
    for (int k = 0; k < 3; ++k) {
      const double r = rho(rng);
      family.push_back(gaussian_profile(r, pd));
      family.push_back(clayton_profile(clayton_theta_matching_gaussian(r), pd));
    }
    const auto env = envelope(family);
    EXPECT_TRUE(check_profile(env.lower).passes());
    EXPECT_TRUE(check_profile(env.upper).passes());
    for (const auto& p : family) EXPECT_TRUE(check_membership(p, env));
  }
}

TEST(PropertyTest, IrbMapsIntoBounds) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(1e-6, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double a = unit(rng), b = unit(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (hi - lo < 1e-12) continue;
    const double r1 = irb_correlation(lo, 0.12, 0.24);
    const double r2 = irb_correlation(hi, 0.12, 0.24);
    EXPECT_GT(r1, r2);
    EXPECT_GT(r2, 0.12);
    EXPECT_LT(r1, 0.24);
  }
}

TEST(PropertyTest, AvarMonotoneAndAboveVar) {
  std::mt19937_64 rng(12);
  std::gamma_distribution<double> g(0.5, 1.0);
  std::vector<double> v(5000);
  for (auto& x : v) x = g(rng);
  const LossSample s{v, {}, false};
  double prev = -1.0;
  for (int k = 1; k < 100; ++k) {
    const double c = k / 100.0;
    const double a = avar(s, c);
    EXPECT_GE(a, prev);
    EXPECT_GE(a, var(s, c));
    prev = a;
  }
}

TEST(PropertyTest, StopLossDecreasingConvex) {
  const auto borrowers = homogeneous_portfolio(50, 0.05, LgdSpec::beta(0.3, 0.2));
  const auto s = simulate_losses(std::vector<DefaultProfile>(50, clayton_profile(1.5, 0.05)), borrowers, {20'000, 6, 1});
  std::vector<double> k;
  for (int i = 0; i <= 60; ++i) k.push_back(i * 0.005);
  const auto sl = stop_loss_curve(s, k);
  for (std::size_t i = 1; i < sl.size(); ++i) EXPECT_LE(sl[i], sl[i - 1] + 1e-15);
  for (std::size_t i = 1; i + 1 < sl.size(); ++i) EXPECT_GE(sl[i + 1] - 2 * sl[i] + sl[i - 1], -1e-14);
}

TEST(PropertyTest, ComonotoneDominatesSimulatedModels) {
  const auto borrowers = homogeneous_portfolio(100, 0.03, LgdSpec::deterministic(0.2));
  const McSettings mc{50'000, 31, 1};
  const auto comon = simulate_comonotone(borrowers, mc);
  for (const auto& p : {gaussian_profile(0.3, 0.03), clayton_profile(2.0, 0.03), survival_clayton_profile(2.0, 0.03)}) {
    const auto s = simulate_losses(std::vector<DefaultProfile>(100, p), borrowers, mc);
    EXPECT_EQ(check_cx_dominance(s, comon, default_thresholds(s, comon)), CxVerdict::Dominates) << p.describe();
  }
}

}  // namespace
}  // namespace sibmm
