#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sibmm/copula.hpp"
#include "sibmm/default_profile.hpp"
#include "sibmm/error.hpp"
#include "sibmm/normal.hpp"
#include "sibmm/quadrature.hpp"

namespace sibmm {
namespace {

// One-factor Gaussian conditional default probability at factor quantile t.
double vasicek_pd(double rho, double pd, double t) {
  return norm_cdf((norm_quantile(pd) + std::sqrt(rho) * norm_quantile(t)) / std::sqrt(1.0 - rho));
}

// ∫₀ˢ f with Gauss–Legendre panels graded toward both ends and split at `breaks`.
template <class F>
double integrate_to(F f, double s, const std::vector<double>& breaks = {}) {
  std::vector<double> edges{0.0};
  for (double x : {1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95,
                   0.99, 0.999, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8}) {
    if (x < s) edges.push_back(x);
  }
  for (double b : breaks) {
    if (b > 0.0 && b < s) edges.push_back(b);
  }
  edges.push_back(s);
  std::sort(edges.begin(), edges.end());
  const auto rule = composite_gauss_legendre(20, edges);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

std::vector<DefaultProfile> sample_profiles() {
  std::vector<DefaultProfile> out{DefaultProfile::independent(0.02), DefaultProfile::comonotone(0.02)};
  for (double pd : {0.0004, 0.02, 0.3, 0.848}) {
    for (double rho : {0.06, 0.165, 0.31}) {
      out.push_back(gaussian_profile(rho, pd));
      out.push_back(clayton_profile(clayton_theta_matching_gaussian(rho), pd));
      out.push_back(survival_clayton_profile(clayton_theta_matching_gaussian(rho), pd));
    }
  }
  return out;
}

TEST(DefaultProfileTest, FromCopulaExtremes) {
  const auto indep = profile_from_copula(CopulaFamily::independence(), 0.2);
  const auto comon = profile_from_copula(CopulaFamily::comonotone(), 0.2);
  for (double s : {0.0, 0.1, 0.5, 0.8, 0.9, 1.0}) {
    EXPECT_NEAR(indep(s), 0.2 * s, 1e-15);
    EXPECT_NEAR(comon(s), std::max(0.0, s - 0.8), 1e-15);
  }
}

TEST(DefaultProfileTest, GaussianMatchesVasicekIntegral) {
  const double rho = 0.165;
  const double pd = 0.02;
  const auto g = gaussian_profile(rho, pd);
  for (int k = 0; k <= 100; ++k) {
    const double s = k / 100.0;
    const double oracle = s == 0.0 ? 0.0 : integrate_to([&](double t) { return vasicek_pd(rho, pd, t); }, s);
    EXPECT_NEAR(g(s), oracle, 1e-10) << "s = " << s;
  }
}

TEST(DefaultProfileTest, TwoGaussianRoutesAgree) {
  for (double pd : {0.0001, 0.02, 0.5, 0.95}) {
    for (double rho : {0.01, 0.165, 0.5, 0.9}) {
      const auto closed = gaussian_profile(rho, pd);
      const auto via_copula = profile_from_copula(CopulaFamily::gaussian(std::sqrt(rho)), pd);
      for (int k = 0; k <= 1000; ++k) {
        const double s = k / 1000.0;
        ASSERT_NEAR(closed(s), via_copula(s), 1e-9) << "pd=" << pd << " rho=" << rho << " s=" << s;
      }
    }
  }
}

TEST(DefaultProfileTest, ClaytonRoutesAgree) {
  for (double theta : {0.2, 0.723, 3.0}) {
    const auto closed = clayton_profile(theta, 0.02);
    const auto via_copula = profile_from_copula(CopulaFamily::clayton(theta), 0.02);
    const auto s_closed = survival_clayton_profile(theta, 0.02);
    const auto s_via = profile_from_copula(CopulaFamily::survival_clayton(theta), 0.02);
    for (int k = 0; k <= 1000; ++k) {
      const double s = k / 1000.0;
      ASSERT_NEAR(closed(s), via_copula(s), 1e-10);
      ASSERT_NEAR(s_closed(s), s_via(s), 1e-10);
    }
  }
}

TEST(DefaultProfileTest, WeakDependenceLimits) {
  const auto g = gaussian_profile(1e-10, 0.02);
  const auto c = clayton_profile(1e-8, 0.02);
  const auto sc = survival_clayton_profile(1e-8, 0.02);
  for (int k = 0; k <= 20; ++k) {
    const double s = k / 20.0;
    EXPECT_NEAR(g(s), 0.02 * s, 1e-6);
    EXPECT_NEAR(c(s), 0.02 * s, 1e-6);
    EXPECT_NEAR(sc(s), 0.02 * s, 1e-6);
  }
}

TEST(DefaultProfileTest, StrongClaytonApproachesComonotone) {
  const auto c = clayton_profile(1e3, 0.02);
  const auto m = DefaultProfile::comonotone(0.02);
  for (int k = 0; k <= 1000; ++k) EXPECT_NEAR(c(k / 1000.0), m(k / 1000.0), 1e-2);
}

TEST(DefaultProfileTest, GaussianOrderInCorrelation) {
  const auto strong = gaussian_profile(0.24, 0.02);
  const auto weak = gaussian_profile(0.12, 0.02);
  const auto mid = gaussian_profile(0.165, 0.02);
  for (int k = 0; k <= 1000; ++k) {
    const double s = k / 1000.0;
    EXPECT_LE(strong(s), mid(s) + 1e-15);
    EXPECT_LE(mid(s), weak(s) + 1e-15);
  }
}

TEST(DefaultProfileTest, LargerCopulaGivesSmallerProfile) {
  // Pointwise larger copula means stronger dependence on the factor.
  const std::vector<std::pair<CopulaFamily, CopulaFamily>> ordered{
      {CopulaFamily::gaussian(0.2), CopulaFamily::gaussian(0.5)},
      {CopulaFamily::clayton(0.5), CopulaFamily::clayton(1.0)},
      {CopulaFamily::survival_clayton(0.5), CopulaFamily::survival_clayton(1.0)},
      {CopulaFamily::independence(), CopulaFamily::comonotone()}};
  for (const auto& [a, b] : ordered) {
    ASSERT_TRUE(is_pointwise_leq(a, b, 25));
    const auto ga = profile_from_copula(a, 0.05);
    const auto gb = profile_from_copula(b, 0.05);
    for (int k = 0; k <= 200; ++k) EXPECT_GE(ga(k / 200.0), gb(k / 200.0) - 1e-12);
  }
}

TEST(DefaultProfileTest, InvariantsHold) {
  for (const auto& p : sample_profiles()) {
    const auto check = check_profile(p);
    EXPECT_TRUE(check.passes()) << p.describe() << " origin " << check.origin_error << " terminal "
                                << check.terminal_error << " d1 " << check.min_first_diff << " d2 "
                                << check.min_second_diff << " lip " << check.max_slope_excess;
  }
}

TEST(DefaultProfileTest, ConditionalPdIsDerivative) {
  for (const auto& p : sample_profiles()) {
    const auto breaks = p.breakpoints();
    for (double s : {0.1, 0.5, 0.9, 0.99, 1.0}) {
      const double integral = integrate_to([&](double t) { return p.conditional_pd(t); }, s, breaks);
      EXPECT_NEAR(integral, p(s), 1e-6) << p.describe() << " s=" << s;
    }
  }
}

TEST(DefaultProfileTest, ConditionalPdExamples) {
  const auto indep = DefaultProfile::independent(0.2);
  const auto comon = DefaultProfile::comonotone(0.2);
  for (double t : {0.01, 0.3, 0.79, 0.8, 0.81, 0.99}) {
    EXPECT_DOUBLE_EQ(indep.conditional_pd(t), 0.2);
    EXPECT_DOUBLE_EQ(comon.conditional_pd(t), t >= 0.8 ? 1.0 : 0.0) << t;
  }
  const auto g = gaussian_profile(0.165, 0.02);
  EXPECT_NEAR(integrate_to([&](double t) { return g.conditional_pd(t); }, 1.0), 0.02, 1e-6);
  EXPECT_NEAR(g.conditional_pd(0.3), vasicek_pd(0.165, 0.02, 0.3), 1e-14);
  double prev = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double cur = g.conditional_pd(k / 1000.0);
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(DefaultProfileTest, EnvelopeExamples) {
  const auto indep = DefaultProfile::independent(0.02);
  const auto comon = DefaultProfile::comonotone(0.02);
  const std::vector<DefaultProfile> extremes{indep, comon};
  const auto e1 = envelope(extremes);
  EXPECT_EQ(e1.lower, indep);
  EXPECT_EQ(e1.upper, comon);
  EXPECT_FALSE(e1.upper_repaired);

  const auto g12 = gaussian_profile(0.12, 0.02);
  const auto g24 = gaussian_profile(0.24, 0.02);
  const std::vector<DefaultProfile> gauss{g12, g24};
  const auto e2 = envelope(gauss);
  EXPECT_EQ(e2.lower, g12);
  EXPECT_EQ(e2.upper, g24);

  const std::vector<DefaultProfile> single{g12};
  const auto e3 = envelope(single);
  EXPECT_EQ(e3.lower, g12);
  EXPECT_EQ(e3.upper, g12);
}

TEST(DefaultProfileTest, EnvelopeIsIdempotent) {
  const double rho = 0.165;
  const std::vector<DefaultProfile> hybrid{gaussian_profile(rho, 0.02),
                                           clayton_profile(clayton_theta_matching_gaussian(rho), 0.02)};
  const auto env = envelope(hybrid);
  const std::vector<DefaultProfile> again{env.lower, env.upper};
  const auto env2 = envelope(again);
  EXPECT_EQ(env2.lower, env.lower);
  EXPECT_EQ(env2.upper, env.upper);
}

TEST(DefaultProfileTest, HybridEnvelopeStaysInClass) {
  const double rho = 0.165;
  const auto gauss = gaussian_profile(rho, 0.02);
  const auto clay = clayton_profile(clayton_theta_matching_gaussian(rho), 0.02);
  const std::vector<DefaultProfile> hybrid{gauss, clay};
  const auto env = envelope(hybrid);
  EXPECT_TRUE(check_profile(env.lower).passes());
  EXPECT_TRUE(check_profile(env.upper).passes());
  for (int k = 0; k <= 1000; ++k) {
    const double s = k / 1000.0;
    EXPECT_NEAR(env.lower(s), std::max(gauss(s), clay(s)), 1e-12);
    EXPECT_LE(env.upper(s), std::min(gauss(s), clay(s)) + 1e-12);
  }
  EXPECT_TRUE(check_membership(gauss, env));
  EXPECT_TRUE(check_membership(clay, env));
}

TEST(DefaultProfileTest, MembershipExamples) {
  const std::vector<DefaultProfile> gauss{gaussian_profile(0.12, 0.02), gaussian_profile(0.24, 0.02)};
  const auto env = envelope(gauss);
  EXPECT_TRUE(check_membership(gaussian_profile(0.165, 0.02), env));
  EXPECT_FALSE(check_membership(DefaultProfile::comonotone(0.02), env));

  const std::vector<DefaultProfile> extremes{DefaultProfile::independent(0.02), DefaultProfile::comonotone(0.02)};
  const auto full = envelope(extremes);
  for (const auto& p : sample_profiles()) {
    if (std::abs(p.pd() - 0.02) < 1e-15) EXPECT_TRUE(check_membership(p, full)) << p.describe();
  }
  EXPECT_THROW(check_membership(gaussian_profile(0.165, 0.03), env), DomainError);
}

TEST(DefaultProfileTest, EnvelopeRejectsBadFamilies) {
  const std::vector<DefaultProfile> none;
  EXPECT_THROW(envelope(none), DomainError);
  const std::vector<DefaultProfile> mixed{DefaultProfile::independent(0.02), DefaultProfile::independent(0.03)};
  EXPECT_THROW(envelope(mixed), DomainError);
}

TEST(DefaultProfileTest, IncreasingRearrangement) {
  const std::vector<double> a{0.3, 0.1, 0.2};
  EXPECT_EQ(increasing_rearrangement(a), (std::vector<double>{0.1, 0.2, 0.3}));
  const std::vector<double> sorted{0.0, 0.1, 0.1, 0.7};
  EXPECT_EQ(increasing_rearrangement(sorted), sorted);

  const int n = 1000;
  std::vector<double> curve(n);
  for (int i = 0; i < n; ++i) curve[i] = 0.02 * (1.0 + std::sin(2.0 * std::numbers::pi * (i + 0.5) / n));
  const auto star = increasing_rearrangement(curve);
  EXPECT_TRUE(std::is_sorted(star.begin(), star.end()));
  double tail = 0.0;
  double tail_star = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    tail += curve[i];
    tail_star += star[i];
    EXPECT_LE(tail, tail_star + 1e-12);
  }
  EXPECT_NEAR(tail, tail_star, 1e-12);
}

TEST(DefaultProfileTest, GreatestConvexMinorant) {
  const std::vector<double> values{0.0, 0.05, 0.06, 0.2, 0.25, 0.5};
  const auto hull = greatest_convex_minorant(values);
  ASSERT_EQ(hull.size(), values.size());
  EXPECT_DOUBLE_EQ(hull.front(), values.front());
  EXPECT_DOUBLE_EQ(hull.back(), values.back());
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_LE(hull[i], values[i] + 1e-15);
  for (std::size_t i = 1; i + 1 < hull.size(); ++i) EXPECT_GE(hull[i + 1] - 2 * hull[i] + hull[i - 1], -1e-15);
  const std::vector<double> convex{0.0, 0.01, 0.03, 0.06, 0.1};
  EXPECT_EQ(greatest_convex_minorant(convex), convex);
}

TEST(DefaultProfileTest, GridProfiles) {
  const std::vector<double> good{0.0, 0.0, 0.01, 0.03};
  const auto p = DefaultProfile::from_grid(good);
  EXPECT_DOUBLE_EQ(p.pd(), 0.03);
  EXPECT_NEAR(p(0.5), 0.005, 1e-15);
  EXPECT_THROW(DefaultProfile::from_grid(std::vector<double>{0.0, 0.02, 0.02, 0.03}), DomainError);
  EXPECT_THROW(DefaultProfile::from_grid(std::vector<double>{0.1, 0.2, 0.3}), DomainError);

  const std::vector<double> cells{0.4, 0.0, 0.2, 0.2};
  const auto bmm = DefaultProfile::from_conditional_pd(cells);
  EXPECT_NEAR(bmm.pd(), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(bmm.conditional_pd(0.1), 0.4);
  EXPECT_DOUBLE_EQ(bmm.conditional_pd(0.3), 0.0);
  EXPECT_TRUE(bmm.piecewise_constant_pd());
}

TEST(DefaultProfileTest, RejectsDegeneratePd) {
  EXPECT_THROW(DefaultProfile::independent(0.0), DomainError);
  EXPECT_THROW(DefaultProfile::comonotone(1.0), DomainError);
  EXPECT_THROW(gaussian_profile(0.1, 1.2), DomainError);
  EXPECT_THROW(gaussian_profile(0.1, 0.02).value(1.5), DomainError);
  EXPECT_THROW(gaussian_profile(0.1, 0.02).conditional_pd(0.0), DomainError);
}

TEST(DefaultProfileTest, CurvesCsvEndpoints) {
  const auto lower = gaussian_profile(0.12, 0.02);
  const auto point = gaussian_profile(0.165, 0.02);
  const auto upper = gaussian_profile(0.24, 0.02);
  const std::vector<NamedProfile> curves{{"lower", &lower}, {"point", &point}, {"upper", &upper}};
  std::ostringstream out;
  write_curves_csv(out, curves);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,G_lower,G_point,G_upper,pd_lower,pd_point,pd_upper");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 1001u);
  for (int j = 1; j <= 3; ++j) {
    EXPECT_EQ(rows.front()[j], 0.0);
    EXPECT_NEAR(rows.back()[j], 0.02, 1e-12);
  }
  for (const auto& r : rows) {
    EXPECT_LE(r[3], r[2] + 1e-12);
    EXPECT_LE(r[2], r[1] + 1e-12);
  }
}

}  // namespace
}  // namespace sibmm
