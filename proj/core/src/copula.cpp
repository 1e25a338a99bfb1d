#include "sibmm/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sibmm/error.hpp"
#include "sibmm/normal.hpp"
#include "sibmm/tolerances.hpp"

namespace sibmm {

namespace {

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1]");
  }
}

void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0, 1)");
  }
}

// log(1 + e^x) without overflow.
double log1p_exp(double x) { return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log(u^-θ + v^-θ - 1) for u, v ∈ (0, 1].
double clayton_log_a(double u, double v, double theta) {
  const double a = -theta * std::log(u);
  const double b = -theta * std::log(v);
  const double m = std::max(a, b);
  if (m < 700.0) return std::log1p(std::expm1(a) + std::expm1(b));
  return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

double clayton_cdf(double u, double v, double theta) {
  if (u == 0.0 || v == 0.0) return 0.0;
  return std::exp(-clayton_log_a(u, v, theta) / theta);
}

double clayton_conditional(double u, double v, double theta) {
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  const double log_a = clayton_log_a(u, v, theta);
  return std::exp((-theta - 1.0) * std::log(v) - (1.0 / theta + 1.0) * log_a);
}

double clayton_inverse_conditional(double t, double v, double theta) {
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  // u = [v^-θ (t^(-θ/(θ+1)) - 1) + 1]^(-1/θ)
  const double inner = std::expm1(-theta / (theta + 1.0) * std::log(t));
  const double log_b_minus_1 = -theta * std::log(v) + std::log(inner);
  return std::exp(-log1p_exp(log_b_minus_1) / theta);
}

double clayton_density(double u, double v, double theta) {
  const double log_a = clayton_log_a(u, v, theta);
  return (1.0 + theta) *
         std::exp((-theta - 1.0) * (std::log(u) + std::log(v)) - (1.0 / theta + 2.0) * log_a);
}

// Safeguarded Newton on a monotone increasing f with f(lo) < 0 < f(hi).
template <typename F, typename DF>
double bracketed_newton(F f, DF df, double lo, double hi, double tol) {
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    const double fx = f(x);
    if (std::abs(fx) <= tol) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) return x;
    const double slope = df(x);
    double next = x - fx / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw std::runtime_error("inverse_conditional: root finder did not converge");
}

}  // namespace

std::string_view to_string(CopulaKind kind) {
  switch (kind) {
    case CopulaKind::Independence:
      return "independence";
    case CopulaKind::Comonotone:
      return "comonotone";
    case CopulaKind::Gaussian:
      return "gaussian";
    case CopulaKind::Clayton:
      return "clayton";
    case CopulaKind::SurvivalClayton:
      return "survival_clayton";
  }
  return "unknown";
}

CopulaFamily CopulaFamily::independence() { return {CopulaKind::Independence, 0.0}; }

CopulaFamily CopulaFamily::comonotone() { return {CopulaKind::Comonotone, 0.0}; }

CopulaFamily CopulaFamily::gaussian(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw DomainError("Gaussian copula parameter must lie in [0, 1] for SI models");
  }
  return {CopulaKind::Gaussian, r};
}

CopulaFamily CopulaFamily::clayton(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("Clayton parameter must be positive and finite");
  }
  return {CopulaKind::Clayton, theta};
}

CopulaFamily CopulaFamily::survival_clayton(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("survival Clayton parameter must be positive and finite");
  }
  return {CopulaKind::SurvivalClayton, theta};
}

double CopulaFamily::cdf(double u, double v) const {
  require_unit(u, "u");
  require_unit(v, "v");
  switch (kind_) {
    case CopulaKind::Independence:
      return u * v;
    case CopulaKind::Comonotone:
      return std::min(u, v);
    case CopulaKind::Gaussian:
      if (u == 0.0 || v == 0.0) return 0.0;
      if (u == 1.0) return v;
      if (v == 1.0) return u;
      if (param_ == 0.0) return u * v;
      if (param_ == 1.0) return std::min(u, v);
      return bivariate_norm_cdf(norm_quantile(u), norm_quantile(v), param_);
    case CopulaKind::Clayton:
      return clayton_cdf(u, v, param_);
    case CopulaKind::SurvivalClayton:
      if (u == 0.0 || v == 0.0) return 0.0;
      return std::clamp(u + v - 1.0 + clayton_cdf(1.0 - u, 1.0 - v, param_), 0.0, std::min(u, v));
  }
  return 0.0;
}

double CopulaFamily::conditional(double u, double v) const {
  require_unit(u, "u");
  require_open_unit(v, "v");
  switch (kind_) {
    case CopulaKind::Independence:
      return u;
    case CopulaKind::Comonotone:
      return v <= u ? 1.0 : 0.0;
    case CopulaKind::Gaussian:
      if (u == 0.0) return 0.0;
      if (u == 1.0) return 1.0;
      if (param_ == 1.0) return v <= u ? 1.0 : 0.0;
      return norm_cdf((norm_quantile(u) - param_ * norm_quantile(v)) /
                      std::sqrt(1.0 - param_ * param_));
    case CopulaKind::Clayton:
      return clayton_conditional(u, v, param_);
    case CopulaKind::SurvivalClayton:
      return 1.0 - clayton_conditional(1.0 - u, 1.0 - v, param_);
  }
  return 0.0;
}

double CopulaFamily::inverse_conditional(double t, double v) const {
  require_unit(t, "t");
  require_open_unit(v, "v");
  switch (kind_) {
    case CopulaKind::Independence:
      return t;
    case CopulaKind::Comonotone:
      return t == 0.0 ? 0.0 : v;
    case CopulaKind::Gaussian:
      if (t == 0.0) return 0.0;
      if (t == 1.0) return 1.0;
      if (param_ == 1.0) return v;
      return norm_cdf(param_ * norm_quantile(v) +
                      std::sqrt(1.0 - param_ * param_) * norm_quantile(t));
    case CopulaKind::Clayton:
      return clayton_inverse_conditional(t, v, param_);
    case CopulaKind::SurvivalClayton: {
      if (t == 0.0) return 0.0;
      if (t == 1.0) return 1.0;
      const auto& tol = kTolerances;
      auto f = [&](double u) { return conditional(u, v) - t; };
      auto df = [&](double u) { return density(u, v); };
      if (f(tol.root_lo) >= 0.0) return tol.root_lo;
      if (f(tol.root_hi) <= 0.0) return tol.root_hi;
      return bracketed_newton(f, df, tol.root_lo, tol.root_hi, tol.root);
    }
  }
  return 0.0;
}

double CopulaFamily::density(double u, double v) const {
  require_open_unit(u, "u");
  require_open_unit(v, "v");
  switch (kind_) {
    case CopulaKind::Independence:
      return 1.0;
    case CopulaKind::Comonotone:
      return u == v ? std::numeric_limits<double>::infinity() : 0.0;
    case CopulaKind::Gaussian: {
      if (param_ == 0.0) return 1.0;
      if (param_ == 1.0) return u == v ? std::numeric_limits<double>::infinity() : 0.0;
      const double x = norm_quantile(u);
      const double y = norm_quantile(v);
      const double r2 = param_ * param_;
      return std::exp(-(r2 * (x * x + y * y) - 2.0 * param_ * x * y) / (2.0 * (1.0 - r2))) /
             std::sqrt(1.0 - r2);
    }
    case CopulaKind::Clayton:
      return clayton_density(u, v, param_);
    case CopulaKind::SurvivalClayton:
      return clayton_density(1.0 - u, 1.0 - v, param_);
  }
  return 0.0;
}

CopulaFamily CopulaFamily::survival() const {
  switch (kind_) {
    case CopulaKind::Clayton:
      return {CopulaKind::SurvivalClayton, param_};
    case CopulaKind::SurvivalClayton:
      return {CopulaKind::Clayton, param_};
    default:
      // Π, M and the Gaussian family are radially symmetric.
      return *this;
  }
}

double CopulaFamily::kendall_tau() const {
  switch (kind_) {
    case CopulaKind::Independence:
      return 0.0;
    case CopulaKind::Comonotone:
      return 1.0;
    case CopulaKind::Gaussian:
      return 2.0 / std::numbers::pi * std::asin(param_);
    case CopulaKind::Clayton:
    case CopulaKind::SurvivalClayton:
      return param_ / (param_ + 2.0);
  }
  return 0.0;
}

std::string CopulaFamily::describe() const {
  std::ostringstream out;
  out << to_string(kind_);
  if (kind_ != CopulaKind::Independence && kind_ != CopulaKind::Comonotone) {
    out << '(' << param_ << ')';
  }
  return out.str();
}

double clayton_theta_matching_gaussian(double asset_corr) {
  require_open_unit(asset_corr, "asset correlation");
  const double tau = 2.0 / std::numbers::pi * std::asin(std::sqrt(asset_corr));
  return 2.0 * tau / (1.0 - tau);
}

bool is_pointwise_leq(const CopulaFamily& a, const CopulaFamily& b, int grid_n) {
  if (grid_n < 2) throw DomainError("is_pointwise_leq: grid_n must be at least 2");
  const double tol = kTolerances.axiom + kTolerances.grid_slack;
  const double step = 1.0 / (grid_n + 1);
  for (int i = 1; i <= grid_n; ++i) {
    for (int j = 1; j <= grid_n; ++j) {
      const double u = i * step;
      const double v = j * step;
      if (a.cdf(u, v) > b.cdf(u, v) + tol) return false;
    }
  }
  return true;
}

bool check_si(const CopulaFamily& c, int grid_n) {
  if (grid_n < 3) throw DomainError("check_si: grid_n must be at least 3");
  const double tol = kTolerances.axiom + kTolerances.grid_slack;
  const double step = 1.0 / (grid_n + 1);
  for (int i = 1; i <= grid_n; ++i) {
    const double u = i * step;
    double prev = c.cdf(u, step);
    double curr = c.cdf(u, 2 * step);
    for (int j = 3; j <= grid_n; ++j) {
      const double next = c.cdf(u, j * step);
      if (prev - 2.0 * curr + next > tol) return false;
      prev = curr;
      curr = next;
    }
  }
  return true;
}

}  // namespace sibmm
