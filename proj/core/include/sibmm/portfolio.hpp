#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sibmm {

// Loss given default: a constant fraction or a beta law given by mean and
// volatility.
struct LgdSpec {
  enum class Kind { Deterministic, Beta };

  Kind kind = Kind::Deterministic;
  double mean = 1.0;  // the constant value for Deterministic
  double vol = 0.0;

  static LgdSpec deterministic(double value);
  static LgdSpec beta(double mean, double vol);

  bool operator==(const LgdSpec&) const = default;
};

struct BetaParams {
  double a;
  double b;
};

// Moment matching: a = m·k, b = (1 − m)·k with k = m(1 − m)/vol² − 1.
BetaParams beta_params(double mean, double vol);

struct Interval {
  double lo;
  double hi;
  bool operator==(const Interval&) const = default;
};

// Bounds of the IRB interpolation and the half-width of the per-borrower
// correlation uncertainty interval used when a portfolio omits it.
struct IrbBounds {
  double lo = 0.12;
  double hi = 0.24;
  double shift = 0.05;
};

// lo·w + hi·(1 − w) with w = (1 − e^{−50·pd}) / (1 − e^{−50}).
double irb_correlation(double pd, double lo_bound, double hi_bound);

struct Borrower {
  std::string name;
  double amount = 0.0;           // as given in the source, any currency unit
  double pd = 0.0;               // unconditional default probability
  double exposure_weight = 0.0;  // share of total amount, sums to 1 over a portfolio
  LgdSpec lgd;
  double corr_point = 0.0;       // IRB asset correlation
  Interval corr_interval{};      // Gaussian asset-correlation uncertainty
  Interval theta_interval{};     // Clayton θ matched to corr_interval by Kendall's tau

  bool operator==(const Borrower&) const = default;
};

// Fills theta_interval from corr_interval and validates every field.
Borrower make_borrower(std::string name, double amount, double pd, double exposure_weight,
                       const LgdSpec& lgd, double corr_point, const Interval& corr_interval);

// n identical borrowers with weight 1/n. The correlation interval defaults
// to the IRB bounds themselves and the point correlation to irb_correlation(pd).
std::vector<Borrower> homogeneous_portfolio(int n, double pd, const LgdSpec& lgd,
                                            const IrbBounds& irb = {});
std::vector<Borrower> homogeneous_portfolio(int n, double pd, const LgdSpec& lgd,
                                            const IrbBounds& irb, const Interval& corr_interval);

struct PortfolioLoad {
  std::vector<Borrower> borrowers;
  std::vector<std::string> warnings;
};

// CSV with header `name,amount,pd,lgd_kind,lgd_mean,lgd_vol[,corr_lo,corr_hi]`.
// pd is a probability (0.0146 for 1.46%); values ≥ 1 are clamped to 1 − 1e−9
// with a warning. Missing correlation columns or empty cells fall back to
// irb_correlation(pd) ± irb.shift.
PortfolioLoad read_portfolio_csv(std::istream& in, const IrbBounds& irb = {});
PortfolioLoad load_portfolio_csv(const std::filesystem::path& path, const IrbBounds& irb = {});

void write_portfolio_csv(std::ostream& out, std::span<const Borrower> borrowers);

// exposure_weight = amount / Σ amount.
void normalize_exposures(std::vector<Borrower>& borrowers);

}  // namespace sibmm
