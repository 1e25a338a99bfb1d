#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sibmm/model.hpp"
#include "sibmm/scenario.hpp"

namespace sibmm {

// AVaR at one confidence level, as fractions of total exposure, for the
// lower and upper loss bounds of a model and the two benchmarks.
struct RiskRow {
  double alpha = 0.0;
  double avar_lower = 0.0;
  double avar_upper = 0.0;
  double avar_indep = 0.0;
  double avar_comon = 0.0;
  double var_lower = 0.0;
  double var_upper = 0.0;
  double se_lower = 0.0;
  double se_upper = 0.0;
  double se_indep = 0.0;
  double se_comon = 0.0;
};

struct RiskReport {
  std::string scenario_label;
  std::string model;
  std::vector<RiskRow> rows;
  std::size_t repaired_borrowers = 0;
};

struct ScenarioReport {
  std::string label;
  std::vector<RiskReport> models;
  McSettings mc;
  double wall_seconds = 0.0;
};

// Simulates the lower and upper bound portfolios of every model in the
// scenario plus the shared independent and comonotone benchmarks, all with
// the same seed, and evaluates AVaR at each confidence level.
ScenarioReport scenario_report(const Scenario& scenario);

// Single-model report.
RiskReport risk_report(const Scenario& scenario, const ModelSpec& model);

struct ChainCheck {
  bool holds = true;
  std::vector<std::string> violations;
};

// AVaR_indep ≤ AVaR_lower ≤ AVaR_upper ≤ AVaR_comon per row, each step
// allowed to fail by n_se pooled standard errors.
ChainCheck check_chain(const RiskReport& report, double n_se = 3.0);
ChainCheck check_chain(const ScenarioReport& report, double n_se = 3.0);

// One line per (model, alpha); values in percent.
void write_report_csv(std::ostream& out, const ScenarioReport& report);

// Aligned table with a row per confidence level and, per model, the lower
// and upper AVaR followed by the two benchmarks, in percent to 2 decimals.
void write_report_table(std::ostream& out, const ScenarioReport& report);

}  // namespace sibmm
