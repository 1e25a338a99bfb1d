#pragma once

#include <string>
#include <string_view>

namespace sibmm {

enum class CopulaKind { Independence, Comonotone, Gaussian, Clayton, SurvivalClayton };

std::string_view to_string(CopulaKind kind);

// A bivariate copula from the families used to build threshold models.
// Gaussian parameter r ∈ [0, 1] (the SI range); Clayton / survival Clayton
// θ > 0. Values are immutable and every member function is pure.
class CopulaFamily {
 public:
  static CopulaFamily independence();
  static CopulaFamily comonotone();
  static CopulaFamily gaussian(double r);
  static CopulaFamily clayton(double theta);
  static CopulaFamily survival_clayton(double theta);

  CopulaKind kind() const noexcept { return kind_; }
  // Gaussian correlation or Clayton θ; 0 for Π and M.
  double param() const noexcept { return param_; }

  // C(u, v) for u, v ∈ [0, 1].
  double cdf(double u, double v) const;

  // C(u | v) = ∂₂C(u, v) = P(U ≤ u | V = v), u ∈ [0, 1], v ∈ (0, 1).
  double conditional(double u, double v) const;

  // inf{u : C(u | v) ≥ t}, t ∈ [0, 1], v ∈ (0, 1).
  double inverse_conditional(double t, double v) const;

  // Copula density c(u, v) on the open square; infinite for M.
  double density(double u, double v) const;

  // Ĉ(u, v) = u + v − 1 + C(1 − u, 1 − v). Every family here is closed under it.
  CopulaFamily survival() const;

  double kendall_tau() const;

  std::string describe() const;

  bool operator==(const CopulaFamily&) const = default;

 private:
  CopulaFamily(CopulaKind kind, double param) : kind_(kind), param_(param) {}

  CopulaKind kind_;
  double param_;
};

// Clayton θ with the same Kendall's tau as the Gaussian copula with
// parameter √asset_corr: τ = (2/π)·asin(√ρ), θ = 2τ / (1 − τ).
double clayton_theta_matching_gaussian(double asset_corr);

// a(u, v) ≤ b(u, v) + tol on the interior grid {i / (grid_n + 1)}².
bool is_pointwise_leq(const CopulaFamily& a, const CopulaFamily& b, int grid_n);

// Concavity of v ↦ C(u, v) on the interior grid, for every grid u.
bool check_si(const CopulaFamily& c, int grid_n);

}  // namespace sibmm
