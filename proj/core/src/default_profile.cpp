#include "sibmm/default_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "sibmm/error.hpp"
#include "sibmm/normal.hpp"

namespace sibmm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Tolerance for recognising a member that attains an envelope everywhere.
constexpr double kAttainTol = 1e-14;

void require_pd(double pd) {
  if (!(pd > 0.0 && pd < 1.0)) throw DomainError("default probability must lie in (0, 1)");
}

void require_grid(int grid_n) {
  if (grid_n < 3) throw DomainError("profile grid needs at least 3 knots");
}

double comonotone_value(double s, double pd) { return s >= 1.0 - pd ? s - (1.0 - pd) : 0.0; }

double closed_form_value(const CopulaFamily& c, double pd, double s) {
  switch (c.kind()) {
    case CopulaKind::Independence:
      return pd * s;
    case CopulaKind::Comonotone:
      return comonotone_value(s, pd);
    case CopulaKind::Gaussian: {
      const double r = c.param();
      if (r == 0.0) return pd * s;
      if (r == 1.0) return comonotone_value(s, pd);
      // s − Φ₂(Φ⁻¹(1−π), Φ⁻¹(s); r) = P(X ≤ Φ⁻¹(π), Y ≤ Φ⁻¹(s)) with corr −r.
      return bivariate_norm_cdf(norm_quantile(pd), norm_quantile(s), -r);
    }
    case CopulaKind::Clayton:
      return pd - c.cdf(pd, 1.0 - s);
    case CopulaKind::SurvivalClayton:
      return s - CopulaFamily::clayton(c.param()).cdf(1.0 - pd, s);
  }
  return 0.0;
}

double closed_form_pd(const CopulaFamily& c, double pd, double t) {
  switch (c.kind()) {
    case CopulaKind::Independence:
      return pd;
    case CopulaKind::Comonotone:
      return t >= 1.0 - pd ? 1.0 : 0.0;
    case CopulaKind::Gaussian: {
      const double r = c.param();
      if (r == 0.0) return pd;
      if (r == 1.0) return t >= 1.0 - pd ? 1.0 : 0.0;
      return norm_cdf((norm_quantile(pd) + r * norm_quantile(t)) / std::sqrt(1.0 - r * r));
    }
    case CopulaKind::Clayton:
      return c.conditional(pd, 1.0 - t);
    case CopulaKind::SurvivalClayton:
      return 1.0 - CopulaFamily::clayton(c.param()).conditional(1.0 - pd, t);
  }
  return 0.0;
}

double grid_value(const std::vector<double>& v, double s) {
  const auto cells = static_cast<double>(v.size() - 1);
  const double x = s * cells;
  const auto k = std::min(static_cast<std::size_t>(x), v.size() - 2);
  const double w = x - static_cast<double>(k);
  return v[k] + w * (v[k + 1] - v[k]);
}

double grid_slope(const std::vector<double>& v, double t) {
  const auto cells = static_cast<double>(v.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(t * cells), v.size() - 2);
  return (v[k + 1] - v[k]) * cells;
}

ProfileCheck check_values(std::span<const double> g, double pd) {
  ProfileCheck check;
  const std::size_t n = g.size();
  const double step = 1.0 / static_cast<double>(n - 1);
  check.origin_error = std::abs(g.front());
  check.terminal_error = std::abs(g.back() - pd);
  check.min_first_diff = std::numeric_limits<double>::infinity();
  check.min_second_diff = std::numeric_limits<double>::infinity();
  check.max_slope_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    const double d = g[k] - g[k - 1];
    check.min_first_diff = std::min(check.min_first_diff, d);
    check.max_slope_excess = std::max(check.max_slope_excess, d - step);
    if (k + 1 < n) check.min_second_diff = std::min(check.min_second_diff, g[k + 1] - 2 * g[k] + g[k - 1]);
  }
  if (n < 3) check.min_second_diff = 0.0;
  return check;
}

double min_second_difference(std::span<const double> g) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < g.size(); ++k) {
    worst = std::min(worst, g[k + 1] - 2 * g[k] + g[k - 1]);
  }
  return worst;
}

}  // namespace

DefaultProfile DefaultProfile::independent(double pd) {
  require_pd(pd);
  return {pd, Independent{}};
}

DefaultProfile DefaultProfile::comonotone(double pd) {
  require_pd(pd);
  return {pd, Comonotone{}};
}

DefaultProfile DefaultProfile::analytic(const CopulaFamily& copula, double pd, AnalyticRoute route) {
  require_pd(pd);
  return {pd, Analytic{copula, route}};
}

DefaultProfile DefaultProfile::from_grid(std::vector<double> values) {
  if (values.size() < 3) throw DomainError("grid profile needs at least 3 knots");
  const double pd = values.back();
  require_pd(pd);
  const ProfileCheck check = check_values(values, pd);
  if (!check.passes()) {
    throw DomainError("grid values are not an increasing convex 1-Lipschitz function from 0 to pd");
  }
  return {pd, Grid{std::move(values)}};
}

DefaultProfile DefaultProfile::from_conditional_pd(std::span<const double> cell_pd) {
  if (cell_pd.size() < 2) throw DomainError("need at least 2 conditional-pd cells");
  std::vector<double> values(cell_pd.size() + 1, 0.0);
  const double width = 1.0 / static_cast<double>(cell_pd.size());
  for (std::size_t k = 0; k < cell_pd.size(); ++k) {
    if (!(cell_pd[k] >= 0.0 && cell_pd[k] <= 1.0)) {
      throw DomainError("conditional default probabilities must lie in [0, 1]");
    }
    values[k + 1] = values[k] + cell_pd[k] * width;
  }
  require_pd(values.back());
  const double pd = values.back();
  return {pd, Grid{std::move(values)}};
}

double DefaultProfile::value(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("profile argument must lie in [0, 1]");
  return std::visit(
      Overloaded{
          [&](const Independent&) { return pd_ * s; },
          [&](const Comonotone&) { return comonotone_value(s, pd_); },
          [&](const Analytic& a) {
            if (s == 0.0) return 0.0;
            if (s == 1.0) return pd_;
            if (a.route == AnalyticRoute::ClosedForm) return closed_form_value(a.copula, pd_, s);
            return s - a.copula.survival().cdf(1.0 - pd_, s);
          },
          [&](const Grid& g) { return grid_value(g.values, s); },
      },
      form_);
}

double DefaultProfile::conditional_pd(double t) const {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("conditional_pd argument must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [&](const Independent&) { return pd_; },
          [&](const Comonotone&) { return t >= 1.0 - pd_ ? 1.0 : 0.0; },
          [&](const Analytic& a) {
            if (a.route == AnalyticRoute::ClosedForm) return closed_form_pd(a.copula, pd_, t);
            return 1.0 - a.copula.survival().conditional(1.0 - pd_, t);
          },
          [&](const Grid& g) { return grid_slope(g.values, t); },
      },
      form_);
}

std::vector<double> DefaultProfile::sample(int grid_n) const {
  require_grid(grid_n);
  std::vector<double> out(static_cast<std::size_t>(grid_n));
  for (int k = 0; k < grid_n; ++k) {
    out[static_cast<std::size_t>(k)] = value(k == grid_n - 1 ? 1.0 : static_cast<double>(k) / (grid_n - 1));
  }
  return out;
}

bool DefaultProfile::piecewise_constant_pd() const {
  return std::visit(Overloaded{
                        [](const Independent&) { return true; },
                        [](const Comonotone&) { return true; },
                        [](const Analytic& a) {
                          return a.copula.kind() == CopulaKind::Independence ||
                                 a.copula.kind() == CopulaKind::Comonotone;
                        },
                        [](const Grid&) { return true; },
                    },
                    form_);
}

std::vector<double> DefaultProfile::breakpoints() const {
  return std::visit(
      Overloaded{
          [](const Independent&) { return std::vector<double>{}; },
          [&](const Comonotone&) { return std::vector<double>{1.0 - pd_}; },
          [&](const Analytic& a) {
            const bool kink = a.copula.kind() == CopulaKind::Comonotone ||
                              (a.copula.kind() == CopulaKind::Gaussian && a.copula.param() == 1.0);
            return kink ? std::vector<double>{1.0 - pd_} : std::vector<double>{};
          },
          [](const Grid& g) {
            std::vector<double> out;
            const auto cells = static_cast<double>(g.values.size() - 1);
            for (std::size_t k = 1; k + 1 < g.values.size(); ++k) out.push_back(static_cast<double>(k) / cells);
            return out;
          },
      },
      form_);
}

std::string DefaultProfile::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Independent&) { out << "independent"; },
                 [&](const Comonotone&) { out << "comonotone"; },
                 [&](const Analytic& a) { out << a.copula.describe(); },
                 [&](const Grid& g) { out << "grid[" << g.values.size() << ']'; },
             },
             form_);
  out << " pd=" << pd_;
  return out.str();
}

DefaultProfile profile_from_copula(const CopulaFamily& copula, double pd) {
  if (!check_si(copula, 15)) throw DomainError("profile_from_copula: copula is not SI");
  return DefaultProfile::analytic(copula, pd, AnalyticRoute::SurvivalCopula);
}

DefaultProfile gaussian_profile(double asset_corr, double pd) {
  if (!(asset_corr > 0.0 && asset_corr < 1.0)) throw DomainError("asset correlation must lie in (0, 1)");
  return DefaultProfile::analytic(CopulaFamily::gaussian(std::sqrt(asset_corr)), pd,
                                  AnalyticRoute::ClosedForm);
}

DefaultProfile clayton_profile(double theta, double pd) {
  return DefaultProfile::analytic(CopulaFamily::clayton(theta), pd, AnalyticRoute::ClosedForm);
}

DefaultProfile survival_clayton_profile(double theta, double pd) {
  return DefaultProfile::analytic(CopulaFamily::survival_clayton(theta), pd,
                                  AnalyticRoute::ClosedForm);
}

ProfileEnvelope envelope(std::span<const DefaultProfile> profiles, int grid_n) {
  if (profiles.empty()) throw DomainError("envelope of an empty family");
  require_grid(grid_n);
  const double pd = profiles.front().pd();
  for (const auto& p : profiles) {
    if (std::abs(p.pd() - pd) > 1e-12) throw DomainError("envelope: profiles have different pd");
  }

  std::vector<std::vector<double>> sampled;
  sampled.reserve(profiles.size());
  for (const auto& p : profiles) sampled.push_back(p.sample(grid_n));

  const auto n = static_cast<std::size_t>(grid_n);
  std::vector<double> hi(sampled.front());
  std::vector<double> lo(sampled.front());
  for (const auto& s : sampled) {
    for (std::size_t k = 0; k < n; ++k) {
      hi[k] = std::max(hi[k], s[k]);
      lo[k] = std::min(lo[k], s[k]);
    }
  }

  auto attaining = [&](const std::vector<double>& bound) -> const DefaultProfile* {
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      bool all = true;
      for (std::size_t k = 0; k < n && all; ++k) all = std::abs(sampled[i][k] - bound[k]) <= kAttainTol;
      if (all) return &profiles[i];
    }
    return nullptr;
  };

  const DefaultProfile* lower_member = attaining(hi);
  const DefaultProfile* upper_member = attaining(lo);
  bool repaired = false;
  if (upper_member == nullptr && min_second_difference(lo) < -kTolerances.convex_repair) {
    lo = greatest_convex_minorant(lo);
    repaired = true;
  }
  hi.back() = pd;
  lo.back() = pd;
  hi.front() = 0.0;
  lo.front() = 0.0;
  return ProfileEnvelope{
      lower_member ? *lower_member : DefaultProfile::from_grid(std::move(hi)),
      upper_member ? *upper_member : DefaultProfile::from_grid(std::move(lo)),
      repaired,
  };
}

bool check_membership(const DefaultProfile& p, const ProfileEnvelope& env, int grid_n) {
  if (std::abs(p.pd() - env.lower.pd()) > 1e-12 || std::abs(p.pd() - env.upper.pd()) > 1e-12) {
    throw DomainError("check_membership: pd mismatch");
  }
  const double tol = kTolerances.profile_shape;
  const auto g = p.sample(grid_n);
  const auto lower = env.lower.sample(grid_n);
  const auto upper = env.upper.sample(grid_n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] < upper[k] - tol || g[k] > lower[k] + tol) return false;
  }
  return true;
}

std::vector<double> increasing_rearrangement(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> greatest_convex_minorant(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) return {values.begin(), values.end()};
  // Lower hull by monotone chain on x = index.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (values[b] - values[a]) * static_cast<double>(i - a) -
                           (values[i] - values[a]) * static_cast<double>(b - a);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> out(n);
  for (std::size_t h = 1; h < hull.size(); ++h) {
    const std::size_t a = hull[h - 1];
    const std::size_t b = hull[h];
    for (std::size_t i = a; i <= b; ++i) {
      const double w = static_cast<double>(i - a) / static_cast<double>(b - a);
      out[i] = values[a] + w * (values[b] - values[a]);
    }
  }
  return out;
}

ProfileCheck check_profile(const DefaultProfile& p, int grid_n) {
  const auto g = p.sample(grid_n);
  return check_values(g, p.pd());
}

void write_curves_csv(std::ostream& out, std::span<const NamedProfile> profiles, int grid_n) {
  require_grid(grid_n);
  constexpr double eps = 1e-9;
  out << 's';
  for (const auto& p : profiles) out << ",G_" << p.name;
  for (const auto& p : profiles) out << ",pd_" << p.name;
  out << '\n';
  const auto old_precision = out.precision(12);
  for (int k = 0; k < grid_n; ++k) {
    const double s = k == grid_n - 1 ? 1.0 : static_cast<double>(k) / (grid_n - 1);
    out << s;
    for (const auto& p : profiles) out << ',' << p.profile->value(s);
    const double t = std::clamp(s, eps, 1.0 - eps);
    for (const auto& p : profiles) out << ',' << p.profile->conditional_pd(t);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace sibmm
