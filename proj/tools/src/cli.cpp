#include "sibmm_cli/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sibmm/error.hpp"
#include "sibmm/report.hpp"
#include "sibmm/risk.hpp"
#include "sibmm/scenario.hpp"
#include "sibmm/simulate.hpp"

#ifndef SIBMM_VERSION
#define SIBMM_VERSION "unknown"
#endif

namespace sibmm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string scenario;
  std::string out_dir = ".";
  McOverrides overrides;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_token(const std::string& s) {
  std::string out;
  for (const char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

Scenario load(const RunConfig& rc) {
  Scenario s = load_scenario(rc.scenario);
  apply_overrides(s, rc.overrides);
  return s;
}

fs::path prepare_out_dir(const RunConfig& rc) {
  fs::path dir = rc.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("--out", "cannot create directory '" + dir.string() + "'");
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("--out", "cannot write '" + path.string() + "'");
  return f;
}

void print_warnings(const Scenario& s, std::ostream& err) {
  for (const auto& w : s.warnings) err << "warning: " << w << '\n';
}

std::string lgd_text(const LgdSpec& lgd) {
  if (lgd.kind == LgdSpec::Kind::Deterministic) return "deterministic " + fmt("%g", lgd.mean);
  const auto p = beta_params(lgd.mean, lgd.vol);
  return "beta mean " + fmt("%g", lgd.mean) + " vol " + fmt("%g", lgd.vol) + " -> B(" + fmt("%.6g", p.a) + ", " +
         fmt("%.6g", p.b) + ")";
}

int cmd_bounds(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Scenario s = load(rc);
  print_warnings(s, err);
  const fs::path dir = prepare_out_dir(rc);
  const ScenarioReport report = scenario_report(s);

  {
    auto f = open_out(dir / "report.csv");
    write_report_csv(f, report);
  }
  std::ostringstream table;
  write_report_table(table, report);
  {
    auto f = open_out(dir / "report.txt");
    f << table.str();
  }
  out << table.str();

  const ChainCheck chain = check_chain(report);
  const std::string config = canonical_config(s);
  json meta;
  meta["version"] = SIBMM_VERSION;
  meta["label"] = s.label;
  meta["config_hash"] = hex64(fnv1a64(config));
  meta["config"] = json::parse(config);
  meta["seed"] = report.mc.seed;
  meta["samples"] = report.mc.samples;
  meta["workers"] = report.mc.workers;
  meta["wall_seconds"] = report.wall_seconds;
  meta["chain_holds"] = chain.holds;
  meta["chain_violations"] = chain.violations;
  meta["warnings"] = s.warnings;
  json models = json::array();
  for (const auto& m : report.models) {
    json rows = json::array();
    for (const auto& r : m.rows) {
      rows.push_back({{"alpha", r.alpha},
                      {"se_lower_pct", 100.0 * r.se_lower},
                      {"se_upper_pct", 100.0 * r.se_upper},
                      {"se_indep_pct", 100.0 * r.se_indep},
                      {"se_comon_pct", 100.0 * r.se_comon}});
    }
    models.push_back({{"model", m.model}, {"repaired_borrowers", m.repaired_borrowers}, {"standard_errors", rows}});
  }
  meta["models"] = models;
  {
    auto f = open_out(dir / "meta.json");
    f << meta.dump(2) << '\n';
  }

  if (!chain.holds) {
    for (const auto& v : chain.violations) err << "chain violation: " << v << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_curves(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Scenario s = load(rc);
  print_warnings(s, err);
  const fs::path dir = prepare_out_dir(rc);

  // One curve set per distinct borrower parameterization.
  using Key = std::tuple<double, double, double, double>;
  std::map<Key, std::size_t> first_of;
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < s.borrowers.size(); ++i) {
    const auto& b = s.borrowers[i];
    if (first_of.emplace(Key{b.pd, b.corr_point, b.corr_interval.lo, b.corr_interval.hi}, i).second)
      reps.push_back(i);
  }

  for (const auto& spec : s.models) {
    for (const std::size_t i : reps) {
      const BorrowerModel m = borrower_model(spec, s.borrowers[i]);
      const std::vector<NamedProfile> curves{
          {"lower", &m.bounds.lower}, {"point", &m.point}, {"upper", &m.bounds.upper}};
      std::string name = "curves_" + file_token(spec.label());
      if (reps.size() > 1) name += "_" + file_token(s.borrowers[i].name);
      name += ".csv";
      auto f = open_out(dir / name);
      write_curves_csv(f, curves);
      out << (dir / name).string() << '\n';
    }
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Scenario s = load(rc);
  print_warnings(s, err);
  const McSettings mc = mc_settings(s);
  out << "label: " << s.label << '\n';
  out << "borrowers: " << s.borrowers.size() << '\n';
  out << "irb bounds: [" << s.irb.lo << ", " << s.irb.hi << "], shift " << s.irb.shift << '\n';
  out << "models:";
  for (const auto& m : s.models) out << ' ' << m.label();
  out << "\nalphas:";
  for (const double a : s.alphas) out << ' ' << a;
  out << "\nmc: samples " << mc.samples << ", seed " << mc.seed << ", workers " << mc.workers << '\n';
  out << "config hash: " << hex64(fnv1a64(canonical_config(s))) << '\n';

  const bool homogeneous = s.source.kind == PortfolioSource::Kind::Homogeneous;
  const std::size_t shown = homogeneous ? 1 : s.borrowers.size();
  out << "name,weight_pct,pd_pct,rho_pct,rho_lo_pct,rho_hi_pct,theta_lo,theta_hi,lgd\n";
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& b = s.borrowers[i];
    out << b.name << (homogeneous ? " (x" + std::to_string(s.borrowers.size()) + ")" : "") << ','
        << fmt("%.2f", 100.0 * b.exposure_weight) << ',' << fmt("%.2f", 100.0 * b.pd) << ','
        << fmt("%.2f", 100.0 * b.corr_point) << ',' << fmt("%.2f", 100.0 * b.corr_interval.lo) << ','
        << fmt("%.2f", 100.0 * b.corr_interval.hi) << ',' << fmt("%.4f", b.theta_interval.lo) << ','
        << fmt("%.4f", b.theta_interval.hi) << ',' << lgd_text(b.lgd) << '\n';
  }
  return kExitOk;
}

void write_exact_csv(std::ostream& f, const LossSample& exact) {
  f << "loss,probability,cdf\n";
  double cdf = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    cdf += exact.weights[j];
    f << fmt("%.15g", exact.losses[j]) << ',' << fmt("%.15g", exact.weights[j]) << ',' << fmt("%.15g", cdf) << '\n';
  }
}

int cmd_oracle(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Scenario s = load(rc);
  print_warnings(s, err);
  if (s.borrowers.size() > kExactMaxBorrowers)
    throw ScopeError("exact enumeration supports at most " + std::to_string(kExactMaxBorrowers) +
                     " borrowers, scenario has " + std::to_string(s.borrowers.size()));
  const fs::path dir = prepare_out_dir(rc);
  const McSettings mc = mc_settings(s);

  auto summary = open_out(dir / "oracle.csv");
  summary << "model,bound,samples,sup_cdf_distance,dkw_epsilon,pass\n";
  bool all_pass = true;
  for (const auto& spec : s.models) {
    const PortfolioModel model = portfolio_model(spec, s.borrowers);
    std::vector<std::pair<std::string, const std::vector<DefaultProfile>*>> bounds;
    if (model.lower == model.upper) {
      bounds.emplace_back("point", &model.lower);
    } else {
      bounds.emplace_back("lower", &model.lower);
      bounds.emplace_back("upper", &model.upper);
    }
    for (const auto& [which, profiles] : bounds) {
      const LossSample exact = exact_loss_distribution(*profiles, s.borrowers);
      const LossSample sample = simulate_losses(*profiles, s.borrowers, mc);
      const ExactComparison cmp = compare_to_exact(sample, exact);
      all_pass = all_pass && cmp.within_band;
      const std::string stem = "exact_" + file_token(spec.label()) + "_" + which + ".csv";
      {
        auto f = open_out(dir / stem);
        write_exact_csv(f, exact);
      }
      summary << spec.label() << ',' << which << ',' << mc.samples << ',' << fmt("%.6g", cmp.sup_distance) << ','
              << fmt("%.6g", cmp.epsilon) << ',' << (cmp.within_band ? "pass" : "fail") << '\n';
      out << spec.label() << ' ' << which << ": sup|F_mc - F_exact| = " << fmt("%.3g", cmp.sup_distance)
          << ", band " << fmt("%.3g", cmp.epsilon) << " -> " << (cmp.within_band ? "pass" : "FAIL") << '\n';
    }
  }
  return all_pass ? kExitOk : kExitViolation;
}

void add_common_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--scenario", rc.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", rc.out_dir, "Output directory");
  sub->add_option("--samples", rc.overrides.samples, "Override mc.samples");
  sub->add_option("--seed", rc.overrides.seed, "Override mc.seed");
  sub->add_option("--workers", rc.overrides.workers, "Override mc.workers (0: SIBMM_WORKERS or all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loss bounds for credit portfolios under dependence uncertainty"};
  app.set_version_flag("--version", SIBMM_VERSION);
  app.require_subcommand(1);

  RunConfig rc;
  auto* bounds = app.add_subcommand("bounds", "AVaR bounds report (report.csv, report.txt, meta.json)");
  auto* curves = app.add_subcommand("curves", "Default integral function curves per model");
  auto* validate = app.add_subcommand("validate", "Check scenario and portfolio, print resolved parameters");
  auto* oracle = app.add_subcommand("oracle", "Exact loss law and Monte Carlo comparison for small portfolios");
  for (auto* sub : {bounds, curves, validate, oracle}) add_common_options(sub, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SIBMM_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(rc, out, err);
    if (curves->parsed()) return cmd_curves(rc, out, err);
    if (validate->parsed()) return cmd_validate(rc, out, err);
    return cmd_oracle(rc, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "portfolio error: " << e.what() << '\n';
  } catch (const ScopeError& e) {
    err << "scope error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace sibmm::cli
