#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "sibmm/error.hpp"
#include "sibmm/model.hpp"
#include "sibmm/scenario.hpp"
#include "test_support.hpp"

namespace sibmm {
namespace {

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in, SIBMM_FIXTURE_DIR);
}

std::string config_error_field(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

const char* kMinimal = R"({
  "portfolio": {"homogeneous": {"n": 10, "pd": 0.02}, "lgd": {"kind": "deterministic", "value": 0.1}},
  "models": ["gaussian"]
})";

TEST(ScenarioTest, LoadsShippedFixtures) {
  const auto s1 = load_scenario(testing::fixture("scenario1.json"));
  EXPECT_EQ(s1.borrowers.size(), 1000u);
  EXPECT_EQ(s1.models.size(), 4u);
  EXPECT_EQ(s1.alphas, (std::vector<double>{0.95, 0.99}));
  EXPECT_EQ(s1.borrowers[0].lgd, LgdSpec::deterministic(0.1));
  const auto s2 = load_scenario(testing::fixture("scenario2.json"));
  EXPECT_EQ(s2.borrowers[0].lgd, LgdSpec::beta(0.1, 0.15));
  const auto i1 = load_scenario(testing::fixture("idb_scenario1.json"));
  EXPECT_EQ(i1.borrowers.size(), 26u);
  EXPECT_DOUBLE_EQ(i1.irb.lo, 0.11);
  EXPECT_EQ(i1.warnings.size(), 1u);
  const auto i2 = load_scenario(testing::fixture("idb_scenario2.json"));
  for (const auto& b : i2.borrowers) EXPECT_EQ(b.lgd, LgdSpec::beta(0.1, 0.15));
  EXPECT_NO_THROW(load_scenario(testing::fixture("scenario.sample.jsonc")));
}

TEST(ScenarioTest, Defaults) {
  const auto s = parse(kMinimal);
  EXPECT_EQ(s.mc.samples, 1'000'000u);
  EXPECT_EQ(s.mc.workers, 0u);
  EXPECT_EQ(s.alphas.size(), 2u);
  EXPECT_EQ(s.borrowers[0].corr_interval, (Interval{0.12, 0.24}));
}

TEST(ScenarioTest, ModelForms) {
  const auto s = parse(R"({
    "portfolio": {"homogeneous": {"n": 3, "pd": 0.02}, "lgd": {"kind": "deterministic", "value": 0.1}},
    "models": ["clayton", {"family": "single_point", "copula": "gaussian", "param": 0.447},
               {"family": "single_point", "copula": "survival_clayton"}, {"family": "comonotone"}]
  })");
  ASSERT_EQ(s.models.size(), 4u);
  EXPECT_EQ(s.models[0].family, ModelFamily::ClaytonInterval);
  EXPECT_EQ(s.models[1].family, ModelFamily::SinglePoint);
  EXPECT_EQ(s.models[1].point_copula, CopulaKind::Gaussian);
  EXPECT_DOUBLE_EQ(*s.models[1].point_param, 0.447);
  EXPECT_FALSE(s.models[2].point_param.has_value());
  EXPECT_EQ(s.models[3].family, ModelFamily::Comonotone);
  const auto single = parse(R"({
    "portfolio": {"homogeneous": {"n": 3, "pd": 0.02}, "lgd": {"kind": "deterministic", "value": 0.1}},
    "model": "gauss_clayton"})");
  EXPECT_EQ(single.models.at(0).family, ModelFamily::GaussClaytonHybrid);
}

TEST(ScenarioTest, ValidationNamesTheField) {
  const std::string base = R"("portfolio": {"homogeneous": {"n": 10, "pd": 0.02}, "lgd": {"kind": "deterministic", "value": 0.1}})";
  EXPECT_EQ(config_error_field("{" + base + R"(, "models": ["gaussian"], "mc": {"samples": 0}})"), "mc.samples");
  EXPECT_EQ(config_error_field("{" + base + R"(, "models": ["gaussian"], "alphas": [0.95, 1.0]})"), "alphas[1]");
  EXPECT_EQ(config_error_field("{" + base + R"(, "models": ["gaussain"]})"), "models[0]");
  EXPECT_EQ(config_error_field("{" + base + R"(, "models": []})"), "models");
  EXPECT_EQ(config_error_field("{" + base + "}"), "models");
  EXPECT_EQ(config_error_field("{" + base + R"(, "models": ["gaussian"], "mc": {"seed": -1}})"), "mc.seed");
  EXPECT_EQ(config_error_field(R"({"portfolio": {"homogeneous": {"n": 0, "pd": 0.02}, "lgd": {"kind": "deterministic", "value": 0.1}}, "models": ["gaussian"]})"),
            "portfolio.homogeneous.n");
  EXPECT_EQ(config_error_field(R"({"portfolio": {"homogeneous": {"n": 5, "pd": 0.02}}, "models": ["gaussian"]})"),
            "portfolio.lgd");
  EXPECT_EQ(config_error_field(R"({"portfolio": {"homogeneous": {"n": 5, "pd": 0.02}, "lgd": {"kind": "beta", "mean": 0.1, "vol": 0.5}}, "models": ["gaussian"]})"),
            "portfolio.lgd");
  EXPECT_EQ(config_error_field(R"({"portfolio": {"csv": "missing.csv"}, "models": ["gaussian"]})"), "portfolio.csv");
  EXPECT_EQ(config_error_field(R"({"portfolio": {}, "models": ["gaussian"]})"), "portfolio");
  EXPECT_EQ(config_error_field("{" + base + R"(, "models": ["gaussian"], "irb": {"lo": 0.3, "hi": 0.2}})"), "irb");
  EXPECT_EQ(config_error_field("{not json"), "scenario");
}

TEST(ScenarioTest, Overrides) {
  auto s = parse(kMinimal);
  apply_overrides(s, McOverrides{5000, 77, 3});
  EXPECT_EQ(s.mc.samples, 5000u);
  EXPECT_EQ(s.mc.seed, 77u);
  EXPECT_EQ(s.mc.workers, 3u);
  try {
    apply_overrides(s, McOverrides{0, std::nullopt, std::nullopt});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "mc.samples");
  }
}

TEST(ScenarioTest, WorkerResolution) {
  EXPECT_EQ(resolve_workers(5), 5u);
  ::setenv("SIBMM_WORKERS", "7", 1);
  EXPECT_EQ(resolve_workers(0), 7u);
  EXPECT_EQ(resolve_workers(2), 2u);
  ::setenv("SIBMM_WORKERS", "garbage", 1);
  EXPECT_GE(resolve_workers(0), 1u);
  ::unsetenv("SIBMM_WORKERS");
  EXPECT_GE(resolve_workers(0), 1u);
}

TEST(ScenarioTest, ConfigHashTracksSettings) {
  auto a = parse(kMinimal);
  auto b = parse(kMinimal);
  EXPECT_EQ(fnv1a64(canonical_config(a)), fnv1a64(canonical_config(b)));
  b.mc.seed = 2;
  EXPECT_NE(fnv1a64(canonical_config(a)), fnv1a64(canonical_config(b)));
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(ModelTest, BorrowerBounds) {
  const auto b = homogeneous_portfolio(1, 0.02, LgdSpec::deterministic(0.1)).front();
  const auto g = borrower_model(ModelSpec{ModelFamily::GaussianInterval}, b);
  EXPECT_EQ(g.bounds.lower, gaussian_profile(0.12, 0.02));
  EXPECT_EQ(g.bounds.upper, gaussian_profile(0.24, 0.02));
  EXPECT_EQ(g.point, gaussian_profile(b.corr_point, 0.02));
  const auto c = borrower_model(ModelSpec{ModelFamily::ClaytonInterval}, b);
  EXPECT_EQ(c.bounds.lower, clayton_profile(b.theta_interval.lo, 0.02));
  EXPECT_EQ(c.bounds.upper, clayton_profile(b.theta_interval.hi, 0.02));
  const auto i = borrower_model(ModelSpec{ModelFamily::Independent}, b);
  EXPECT_EQ(i.bounds.lower, DefaultProfile::independent(0.02));
  EXPECT_EQ(i.bounds.upper, DefaultProfile::independent(0.02));
  const auto h = borrower_model(ModelSpec{ModelFamily::GaussClaytonHybrid}, b);
  EXPECT_TRUE(check_membership(gaussian_profile(b.corr_point, 0.02), h.bounds));
  EXPECT_TRUE(check_membership(clayton_profile(clayton_theta_matching_gaussian(b.corr_point), 0.02), h.bounds));
  ModelSpec sp{ModelFamily::SinglePoint, CopulaKind::Clayton, 0.5};
  const auto p = borrower_model(sp, b);
  EXPECT_EQ(p.bounds.lower, clayton_profile(0.5, 0.02));
  EXPECT_EQ(sp.label(), "single_point:clayton(0.5)");
}

TEST(ModelTest, PortfolioModelAligned) {
  const auto load = load_portfolio_csv(testing::fixture("idb_portfolio.csv"), IrbBounds{0.11, 0.27, 0.05});
  const auto m = portfolio_model(ModelSpec{ModelFamily::SurvivalClaytonInterval}, load.borrowers);
  ASSERT_EQ(m.lower.size(), load.borrowers.size());
  for (std::size_t i = 0; i < m.lower.size(); ++i) {
    EXPECT_DOUBLE_EQ(m.lower[i].pd(), load.borrowers[i].pd);
    EXPECT_DOUBLE_EQ(m.upper[i].pd(), load.borrowers[i].pd);
  }
  EXPECT_EQ(parse_model_family("gauss_clayton"), ModelFamily::GaussClaytonHybrid);
  EXPECT_FALSE(parse_model_family("vine").has_value());
}

}  // namespace
}  // namespace sibmm
