#include "sibmm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <thread>

#include "json.hpp"
#include "sibmm/error.hpp"

namespace sibmm {

namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const char* key, const std::string& path) {
  const json* v = find(obj, key);
  if (v == nullptr) throw ConfigError(path, "missing required number");
  if (!v->is_number()) throw ConfigError(path, "expected a number");
  return v->get<double>();
}

std::uint64_t get_unsigned(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(path, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(path, "expected a non-negative integer");
}

LgdSpec parse_lgd(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  const json* kind = find(v, "kind");
  if (kind == nullptr || !kind->is_string()) throw ConfigError(path + ".kind", "expected \"deterministic\" or \"beta\"");
  const auto k = kind->get<std::string>();
  try {
    if (k == "deterministic") return LgdSpec::deterministic(get_number(v, "value", path + ".value"));
    if (k == "beta")
      return LgdSpec::beta(get_number(v, "mean", path + ".mean"), get_number(v, "vol", path + ".vol"));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".kind", "unknown LGD kind '" + k + "'");
}

Interval parse_interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(path, "expected [lo, hi]");
  return Interval{v[0].get<double>(), v[1].get<double>()};
}

CopulaKind parse_copula_kind(const std::string& name, const std::string& path) {
  for (const auto k : {CopulaKind::Independence, CopulaKind::Comonotone, CopulaKind::Gaussian,
                       CopulaKind::Clayton, CopulaKind::SurvivalClayton}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(path, "unknown copula '" + name + "'");
}

ModelSpec parse_model(const json& v, const std::string& path) {
  ModelSpec spec;
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    const auto family = parse_model_family(name);
    if (!family) throw ConfigError(path, "unknown model '" + name + "'");
    if (*family == ModelFamily::SinglePoint) throw ConfigError(path, "single_point needs a copula");
    spec.family = *family;
    return spec;
  }
  if (!v.is_object()) throw ConfigError(path, "expected a model name or object");
  const json* family = find(v, "family");
  if (family == nullptr || !family->is_string()) throw ConfigError(path + ".family", "expected a model name");
  const auto name = family->get<std::string>();
  const auto parsed = parse_model_family(name);
  if (!parsed) throw ConfigError(path + ".family", "unknown model '" + name + "'");
  spec.family = *parsed;
  if (spec.family == ModelFamily::SinglePoint) {
    const json* copula = find(v, "copula");
    if (copula == nullptr || !copula->is_string()) throw ConfigError(path + ".copula", "expected a copula name");
    spec.point_copula = parse_copula_kind(copula->get<std::string>(), path + ".copula");
    if (const json* p = find(v, "param")) {
      if (!p->is_number()) throw ConfigError(path + ".param", "expected a number");
      spec.point_param = p->get<double>();
    }
  }
  return spec;
}

void build_portfolio(Scenario& s) {
  auto& src = s.source;
  if (src.kind == PortfolioSource::Kind::Homogeneous) {
    if (src.n < 1) throw ConfigError("portfolio.homogeneous.n", "must be at least 1");
    if (!(src.pd > 0.0 && src.pd < 1.0)) throw ConfigError("portfolio.homogeneous.pd", "must lie in (0,1)");
    if (!src.lgd) throw ConfigError("portfolio.lgd", "required for a homogeneous portfolio");
    const Interval corr = src.corr_interval.value_or(Interval{s.irb.lo, s.irb.hi});
    try {
      s.borrowers = homogeneous_portfolio(src.n, src.pd, *src.lgd, s.irb, corr);
    } catch (const DomainError& e) {
      throw ConfigError("portfolio.corr_interval", e.what());
    }
    return;
  }
  std::ifstream in(src.csv);
  if (!in) throw ConfigError("portfolio.csv", "cannot open '" + src.csv.string() + "'");
  auto load = read_portfolio_csv(in, s.irb);
  s.borrowers = std::move(load.borrowers);
  for (auto& w : load.warnings) s.warnings.push_back(std::move(w));
  if (src.lgd) {
    for (auto& b : s.borrowers) b.lgd = *src.lgd;
  }
}

json lgd_json(const LgdSpec& lgd) {
  if (lgd.kind == LgdSpec::Kind::Deterministic) return {{"kind", "deterministic"}, {"value", lgd.mean}};
  return {{"kind", "beta"}, {"mean", lgd.mean}, {"vol", lgd.vol}};
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scenario", "expected a JSON object");

  Scenario s;
  if (const json* label = find(doc, "label")) {
    if (!label->is_string()) throw ConfigError("label", "expected a string");
    s.label = label->get<std::string>();
  }

  if (const json* irb = find(doc, "irb")) {
    if (!irb->is_object()) throw ConfigError("irb", "expected an object");
    if (find(*irb, "lo")) s.irb.lo = get_number(*irb, "lo", "irb.lo");
    if (find(*irb, "hi")) s.irb.hi = get_number(*irb, "hi", "irb.hi");
    if (find(*irb, "shift")) s.irb.shift = get_number(*irb, "shift", "irb.shift");
  }
  if (!(s.irb.lo > 0.0 && s.irb.lo < s.irb.hi && s.irb.hi < 1.0))
    throw ConfigError("irb", "bounds must satisfy 0 < lo < hi < 1");
  if (!(s.irb.shift >= 0.0)) throw ConfigError("irb.shift", "must be non-negative");

  const json* portfolio = find(doc, "portfolio");
  if (portfolio == nullptr || !portfolio->is_object()) throw ConfigError("portfolio", "missing portfolio object");
  if (const json* lgd = find(*portfolio, "lgd")) s.source.lgd = parse_lgd(*lgd, "portfolio.lgd");
  const json* hom = find(*portfolio, "homogeneous");
  const json* csv = find(*portfolio, "csv");
  if ((hom != nullptr) == (csv != nullptr))
    throw ConfigError("portfolio", "exactly one of 'homogeneous' and 'csv' is required");
  if (hom != nullptr) {
    if (!hom->is_object()) throw ConfigError("portfolio.homogeneous", "expected an object");
    s.source.kind = PortfolioSource::Kind::Homogeneous;
    const json* n = find(*hom, "n");
    if (n == nullptr || !n->is_number_integer()) throw ConfigError("portfolio.homogeneous.n", "expected an integer");
    s.source.n = n->get<int>();
    s.source.pd = get_number(*hom, "pd", "portfolio.homogeneous.pd");
    if (const json* corr = find(*portfolio, "corr_interval"))
      s.source.corr_interval = parse_interval(*corr, "portfolio.corr_interval");
  } else {
    if (!csv->is_string()) throw ConfigError("portfolio.csv", "expected a path");
    s.source.kind = PortfolioSource::Kind::Csv;
    std::filesystem::path p = csv->get<std::string>();
    s.source.csv = p.is_absolute() ? p : base_dir / p;
  }

  const json* models = find(doc, "models");
  if (models == nullptr) models = find(doc, "model");
  if (models == nullptr) throw ConfigError("models", "missing model list");
  if (models->is_array()) {
    for (std::size_t i = 0; i < models->size(); ++i)
      s.models.push_back(parse_model((*models)[i], "models[" + std::to_string(i) + "]"));
  } else {
    s.models.push_back(parse_model(*models, "models"));
  }

  if (const json* alphas = find(doc, "alphas")) {
    if (!alphas->is_array()) throw ConfigError("alphas", "expected an array");
    s.alphas.clear();
    for (std::size_t i = 0; i < alphas->size(); ++i) {
      if (!(*alphas)[i].is_number()) throw ConfigError("alphas[" + std::to_string(i) + "]", "expected a number");
      s.alphas.push_back((*alphas)[i].get<double>());
    }
  }

  if (const json* mc = find(doc, "mc")) {
    if (!mc->is_object()) throw ConfigError("mc", "expected an object");
    if (const json* v = find(*mc, "samples")) s.mc.samples = get_unsigned(*v, "mc.samples");
    if (const json* v = find(*mc, "seed")) s.mc.seed = get_unsigned(*v, "mc.seed");
    if (const json* v = find(*mc, "workers")) {
      const auto w = get_unsigned(*v, "mc.workers");
      if (w > 4096) throw ConfigError("mc.workers", "at most 4096");
      s.mc.workers = static_cast<unsigned>(w);
    }
  }

  validate_scenario(s);
  build_portfolio(s);
  if (s.borrowers.empty()) throw ConfigError("portfolio", "no borrowers");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario", "cannot open '" + path.string() + "'");
  return parse_scenario(in, path.parent_path());
}

void apply_overrides(Scenario& scenario, const McOverrides& overrides) {
  if (overrides.samples) scenario.mc.samples = *overrides.samples;
  if (overrides.seed) scenario.mc.seed = *overrides.seed;
  if (overrides.workers) scenario.mc.workers = *overrides.workers;
  validate_scenario(scenario);
}

void validate_scenario(const Scenario& s) {
  if (s.mc.samples < 1) throw ConfigError("mc.samples", "must be at least 1");
  if (s.models.empty()) throw ConfigError("models", "at least one model is required");
  if (s.alphas.empty()) throw ConfigError("alphas", "at least one confidence level is required");
  for (std::size_t i = 0; i < s.alphas.size(); ++i) {
    const double a = s.alphas[i];
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas[" + std::to_string(i) + "]", "must lie in (0,1)");
  }
  for (std::size_t i = 0; i < s.models.size(); ++i) {
    const auto& m = s.models[i];
    if (m.family != ModelFamily::SinglePoint || !m.point_param) continue;
    const double p = *m.point_param;
    const std::string path = "models[" + std::to_string(i) + "].param";
    if (m.point_copula == CopulaKind::Gaussian && !(p >= 0.0 && p <= 1.0))
      throw ConfigError(path, "Gaussian parameter must lie in [0,1]");
    if ((m.point_copula == CopulaKind::Clayton || m.point_copula == CopulaKind::SurvivalClayton) && !(p > 0.0))
      throw ConfigError(path, "Clayton parameter must be positive");
  }
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SIBMM_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

McSettings mc_settings(const Scenario& scenario) {
  return McSettings{scenario.mc.samples, scenario.mc.seed, resolve_workers(scenario.mc.workers)};
}

std::string canonical_config(const Scenario& s) {
  json doc;
  doc["label"] = s.label;
  json portfolio;
  if (s.source.kind == PortfolioSource::Kind::Homogeneous) {
    portfolio["homogeneous"] = {{"n", s.source.n}, {"pd", s.source.pd}};
    if (s.source.corr_interval)
      portfolio["corr_interval"] = {s.source.corr_interval->lo, s.source.corr_interval->hi};
  } else {
    portfolio["csv"] = s.source.csv.filename().string();
    json rows = json::array();
    for (const auto& b : s.borrowers) rows.push_back({b.name, b.amount, b.pd});
    portfolio["rows"] = rows;
  }
  if (s.source.lgd) portfolio["lgd"] = lgd_json(*s.source.lgd);
  doc["portfolio"] = portfolio;
  doc["irb"] = {{"lo", s.irb.lo}, {"hi", s.irb.hi}, {"shift", s.irb.shift}};
  json models = json::array();
  for (const auto& m : s.models) models.push_back(m.label());
  doc["models"] = models;
  doc["alphas"] = s.alphas;
  doc["mc"] = {{"samples", s.mc.samples}, {"seed", s.mc.seed}};
  return doc.dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sibmm
