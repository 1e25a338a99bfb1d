#include "sibmm/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "sibmm/risk.hpp"

namespace sibmm {

namespace {

struct Benchmarks {
  LossSample indep;
  LossSample comon;
};

Benchmarks simulate_benchmarks(const Scenario& s, const McSettings& mc) {
  return Benchmarks{simulate_independent(s.borrowers, mc), simulate_comonotone(s.borrowers, mc)};
}

RiskReport model_report(const Scenario& s, const ModelSpec& spec, const McSettings& mc,
                        const Benchmarks& bench) {
  const PortfolioModel model = portfolio_model(spec, s.borrowers);
  const LossSample lower = simulate_losses(model.lower, s.borrowers, mc);
  const bool same = model.lower == model.upper;
  const LossSample upper = same ? lower : simulate_losses(model.upper, s.borrowers, mc);

  RiskReport report;
  report.scenario_label = s.label;
  report.model = spec.label();
  report.repaired_borrowers = model.repaired;
  for (const double a : s.alphas) {
    RiskRow row;
    row.alpha = a;
    row.avar_lower = avar(lower, a);
    row.avar_upper = avar(upper, a);
    row.avar_indep = avar(bench.indep, a);
    row.avar_comon = avar(bench.comon, a);
    row.var_lower = var(lower, a);
    row.var_upper = var(upper, a);
    row.se_lower = avar_standard_error(lower, a);
    row.se_upper = avar_standard_error(upper, a);
    row.se_indep = avar_standard_error(bench.indep, a);
    row.se_comon = avar_standard_error(bench.comon, a);
    report.rows.push_back(row);
  }
  return report;
}

std::string pct(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, 100.0 * v);
  return buf;
}

void check_step(ChainCheck& out, const std::string& where, const char* a_name, double a, double se_a,
                const char* b_name, double b, double se_b, double n_se) {
  const double band = n_se * std::hypot(se_a, se_b) + 1e-12;
  if (a <= b + band) return;
  out.holds = false;
  out.violations.push_back(where + ": " + a_name + " " + pct(a, 4) + "% > " + b_name + " " + pct(b, 4) +
                           "% beyond " + pct(band, 4) + "%");
}

}  // namespace

ScenarioReport scenario_report(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport out;
  out.label = s.label;
  out.mc = mc_settings(s);
  const Benchmarks bench = simulate_benchmarks(s, out.mc);
  for (const auto& spec : s.models) out.models.push_back(model_report(s, spec, out.mc, bench));
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RiskReport risk_report(const Scenario& s, const ModelSpec& model) {
  const McSettings mc = mc_settings(s);
  return model_report(s, model, mc, simulate_benchmarks(s, mc));
}

ChainCheck check_chain(const RiskReport& report, double n_se) {
  ChainCheck out;
  for (const auto& r : report.rows) {
    const std::string where = report.model + " @ " + pct(r.alpha, 1) + "%";
    check_step(out, where, "indep", r.avar_indep, r.se_indep, "lower", r.avar_lower, r.se_lower, n_se);
    check_step(out, where, "lower", r.avar_lower, r.se_lower, "upper", r.avar_upper, r.se_upper, n_se);
    check_step(out, where, "upper", r.avar_upper, r.se_upper, "comon", r.avar_comon, r.se_comon, n_se);
  }
  return out;
}

ChainCheck check_chain(const ScenarioReport& report, double n_se) {
  ChainCheck out;
  for (const auto& m : report.models) {
    auto c = check_chain(m, n_se);
    if (!c.holds) out.holds = false;
    for (auto& v : c.violations) out.violations.push_back(std::move(v));
  }
  return out;
}

void write_report_csv(std::ostream& out, const ScenarioReport& report) {
  out << "scenario,model,alpha,avar_lower_pct,avar_upper_pct,avar_indep_pct,avar_comon_pct,"
         "var_lower_pct,var_upper_pct,se_lower_pct,se_upper_pct,se_indep_pct,se_comon_pct\n";
  for (const auto& m : report.models) {
    for (const auto& r : m.rows) {
      char alpha[32];
      std::snprintf(alpha, sizeof alpha, "%.6g", r.alpha);
      out << report.label << ',' << m.model << ',' << alpha;
      for (const double v : {r.avar_lower, r.avar_upper, r.avar_indep, r.avar_comon, r.var_lower, r.var_upper,
                             r.se_lower, r.se_upper, r.se_indep, r.se_comon})
        out << ',' << pct(v, 6);
      out << '\n';
    }
  }
}

void write_report_table(std::ostream& out, const ScenarioReport& report) {
  // Column groups: the alpha column, one pair per model, the benchmark pair.
  std::vector<std::string> groups;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"alpha"};
  for (const auto& m : report.models) {
    groups.push_back(m.model);
    head.push_back("AVaR_lower");
    head.push_back("AVaR_upper");
  }
  groups.push_back("benchmarks");
  head.push_back("AVaR_indep");
  head.push_back("AVaR_comon");
  cells.push_back(head);

  const std::size_t n_rows = report.models.empty() ? 0 : report.models.front().rows.size();
  for (std::size_t i = 0; i < n_rows; ++i) {
    const auto& first = report.models.front().rows[i];
    std::vector<std::string> line{pct(first.alpha, 1) + "%"};
    for (const auto& m : report.models) {
      line.push_back(pct(m.rows[i].avar_lower, 2) + "%");
      line.push_back(pct(m.rows[i].avar_upper, 2) + "%");
    }
    line.push_back(pct(first.avar_indep, 2) + "%");
    line.push_back(pct(first.avar_comon, 2) + "%");
    cells.push_back(line);
  }

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::size_t a = 1 + 2 * g;
    const std::size_t span = width[a] + 2 + width[a + 1];
    if (groups[g].size() > span) width[a + 1] += groups[g].size() - span;
  }

  auto emit = [&out](std::string line) {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  if (!report.label.empty()) out << report.label << '\n';
  std::string top(width[0], ' ');
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::size_t a = 1 + 2 * g;
    const std::size_t span = width[a] + 2 + width[a + 1];
    top += "  " + std::string(span - groups[g].size(), ' ') + groups[g];
  }
  emit(top);
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) line += "  ";
      line += std::string(width[j] - row[j].size(), ' ') + row[j];
    }
    emit(line);
  }
}

}  // namespace sibmm
