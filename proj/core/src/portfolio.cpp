#include "sibmm/portfolio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "sibmm/copula.hpp"
#include "sibmm/error.hpp"

namespace sibmm {

namespace {

constexpr double kPdCeiling = 1.0 - 1e-9;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Comma split honouring double-quoted fields ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw std::invalid_argument(text);
  }
  return value;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void require_corr(const Interval& corr) {
  if (!(corr.lo > 0.0 && corr.hi < 1.0 && corr.lo <= corr.hi)) {
    throw DomainError("correlation interval must satisfy 0 < lo <= hi < 1");
  }
}

}  // namespace

LgdSpec LgdSpec::deterministic(double value) {
  if (!(value > 0.0 && value <= 1.0)) throw DomainError("deterministic LGD must lie in (0, 1]");
  return LgdSpec{Kind::Deterministic, value, 0.0};
}

LgdSpec LgdSpec::beta(double mean, double vol) {
  beta_params(mean, vol);
  return LgdSpec{Kind::Beta, mean, vol};
}

BetaParams beta_params(double mean, double vol) {
  if (!(mean > 0.0 && mean < 1.0)) throw DomainError("beta LGD mean must lie in (0, 1)");
  if (!(vol > 0.0)) throw DomainError("beta LGD volatility must be positive");
  const double var = vol * vol;
  if (!(var < mean * (1.0 - mean))) {
    throw DomainError("infeasible beta moments: vol^2 must be below mean*(1-mean)");
  }
  const double k = mean * (1.0 - mean) / var - 1.0;
  return {mean * k, (1.0 - mean) * k};
}

double irb_correlation(double pd, double lo_bound, double hi_bound) {
  if (!(pd > 0.0 && pd <= 1.0)) throw DomainError("irb_correlation: pd must lie in (0, 1]");
  if (!(lo_bound > 0.0 && lo_bound < hi_bound && hi_bound < 1.0)) {
    throw DomainError("irb_correlation: bounds must satisfy 0 < lo < hi < 1");
  }
  const double w = -std::expm1(-50.0 * pd) / -std::expm1(-50.0);
  return lo_bound * w + hi_bound * (1.0 - w);
}

Borrower make_borrower(std::string name, double amount, double pd, double exposure_weight,
                       const LgdSpec& lgd, double corr_point, const Interval& corr_interval) {
  if (!(pd > 0.0 && pd < 1.0)) throw DomainError("borrower pd must lie in (0, 1)");
  if (!(amount >= 0.0) || !(exposure_weight >= 0.0)) {
    throw DomainError("borrower amount and exposure weight must be non-negative");
  }
  if (!(corr_point > 0.0 && corr_point < 1.0)) {
    throw DomainError("point asset correlation must lie in (0, 1)");
  }
  require_corr(corr_interval);
  Borrower b;
  b.name = std::move(name);
  b.amount = amount;
  b.pd = pd;
  b.exposure_weight = exposure_weight;
  b.lgd = lgd;
  b.corr_point = corr_point;
  b.corr_interval = corr_interval;
  b.theta_interval = {clayton_theta_matching_gaussian(corr_interval.lo),
                      clayton_theta_matching_gaussian(corr_interval.hi)};
  return b;
}

std::vector<Borrower> homogeneous_portfolio(int n, double pd, const LgdSpec& lgd,
                                            const IrbBounds& irb) {
  return homogeneous_portfolio(n, pd, lgd, irb, Interval{irb.lo, irb.hi});
}

std::vector<Borrower> homogeneous_portfolio(int n, double pd, const LgdSpec& lgd,
                                            const IrbBounds& irb, const Interval& corr_interval) {
  if (n < 1) throw DomainError("homogeneous_portfolio: n must be at least 1");
  const double weight = 1.0 / n;
  const Borrower proto = make_borrower("loan", weight, pd, weight, lgd,
                                       irb_correlation(pd, irb.lo, irb.hi), corr_interval);
  std::vector<Borrower> out(static_cast<std::size_t>(n), proto);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)].name = "loan" + std::to_string(i + 1);
  return out;
}

void normalize_exposures(std::vector<Borrower>& borrowers) {
  double total = 0.0;
  for (const auto& b : borrowers) total += b.amount;
  if (!(total > 0.0)) throw DomainError("portfolio total amount must be positive");
  for (auto& b : borrowers) b.exposure_weight = b.amount / total;
}

PortfolioLoad read_portfolio_csv(std::istream& in, const IrbBounds& irb) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) header = split_csv_line(line);
  }
  if (header.empty()) throw ParseError(row, "", "missing header row");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  for (const char* required : {"name", "amount", "pd", "lgd_kind", "lgd_mean", "lgd_vol"}) {
    if (!index.contains(required)) throw ParseError(row, required, "required column missing from header");
  }
  const bool has_corr = index.contains("corr_lo") && index.contains("corr_hi");

  PortfolioLoad result;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(row, "", "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    auto field = [&](const std::string& col) -> const std::string& { return fields[index.at(col)]; };
    auto number = [&](const std::string& col) -> std::optional<double> {
      try {
        return parse_number(field(col));
      } catch (const std::invalid_argument&) {
        throw ParseError(row, col, "not a number: '" + field(col) + "'");
      }
    };
    auto required_number = [&](const std::string& col) {
      const auto v = number(col);
      if (!v) throw ParseError(row, col, "value required");
      return *v;
    };

    const std::string name = field("name");
    if (name.empty()) throw ParseError(row, "name", "value required");
    const double amount = required_number("amount");
    if (amount < 0.0) throw ParseError(row, "amount", "negative amount");

    double pd = required_number("pd");
    if (!(pd > 0.0)) throw ParseError(row, "pd", "pd must be positive");
    if (pd >= 1.0) {
      result.warnings.push_back("row " + std::to_string(row) + " (" + name + "): pd " +
                                field("pd") + " clamped to 1 - 1e-9");
      pd = kPdCeiling;
    }

    LgdSpec lgd;
    const std::string kind = field("lgd_kind");
    try {
      if (kind == "deterministic") {
        lgd = LgdSpec::deterministic(required_number("lgd_mean"));
      } else if (kind == "beta") {
        lgd = LgdSpec::beta(required_number("lgd_mean"), required_number("lgd_vol"));
      } else {
        throw ParseError(row, "lgd_kind", "expected 'deterministic' or 'beta', found '" + kind + "'");
      }
    } catch (const DomainError& e) {
      throw ParseError(row, "lgd_mean", e.what());
    }

    const double corr_point = irb_correlation(pd, irb.lo, irb.hi);
    Interval corr{corr_point - irb.shift, corr_point + irb.shift};
    if (has_corr) {
      const auto lo = number("corr_lo");
      const auto hi = number("corr_hi");
      if (lo.has_value() != hi.has_value()) {
        throw ParseError(row, lo ? "corr_hi" : "corr_lo", "corr_lo and corr_hi must be given together");
      }
      if (lo) corr = Interval{*lo, *hi};
    }
    try {
      result.borrowers.push_back(make_borrower(name, amount, pd, 0.0, lgd, corr_point, corr));
    } catch (const DomainError& e) {
      throw ParseError(row, "corr_lo", e.what());
    }
  }
  if (result.borrowers.empty()) throw ParseError(row, "", "portfolio has no borrowers");
  try {
    normalize_exposures(result.borrowers);
  } catch (const DomainError& e) {
    throw ParseError(row, "amount", e.what());
  }
  return result;
}

PortfolioLoad load_portfolio_csv(const std::filesystem::path& path, const IrbBounds& irb) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open portfolio file " + path.string());
  return read_portfolio_csv(in, irb);
}

void write_portfolio_csv(std::ostream& out, std::span<const Borrower> borrowers) {
  const auto old_precision = out.precision(17);
  out << "name,amount,pd,lgd_kind,lgd_mean,lgd_vol,corr_lo,corr_hi\n";
  for (const auto& b : borrowers) {
    const bool beta = b.lgd.kind == LgdSpec::Kind::Beta;
    out << quote_if_needed(b.name) << ',' << b.amount << ',' << b.pd << ','
        << (beta ? "beta" : "deterministic") << ',' << b.lgd.mean << ',';
    if (beta) out << b.lgd.vol;
    out << ',' << b.corr_interval.lo << ',' << b.corr_interval.hi << '\n';
  }
  out.precision(old_precision);
}

}  // namespace sibmm
