#pragma once

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "sibmm/copula.hpp"
#include "sibmm/tolerances.hpp"

namespace sibmm {

// How an analytic profile is evaluated. `SurvivalCopula` goes through
// G(s) = s − Ĉ(1 − π, s); `ClosedForm` uses the family-specific expression
// (bivariate normal with negative correlation for Gaussian, π − C(π, 1 − s)
// for Clayton, s − C_Cl(1 − π, s) for survival Clayton).
enum class AnalyticRoute { SurvivalCopula, ClosedForm };

// Default integral function G(s) = ∫₀ˢ p(t) dt of one borrower, with the
// common factor standardized to uniform on (0, 1) and p the conditional
// default probability. For siBMMs G is increasing, convex, 1-Lipschitz,
// G(0) = 0 and G(1) = pd.
class DefaultProfile {
 public:
  struct Independent {
    bool operator==(const Independent&) const = default;
  };
  struct Comonotone {
    bool operator==(const Comonotone&) const = default;
  };
  struct Analytic {
    CopulaFamily copula;
    AnalyticRoute route;
    bool operator==(const Analytic&) const = default;
  };
  // G at uniform knots s_k = k / (n − 1), linearly interpolated.
  struct Grid {
    std::vector<double> values;
    bool operator==(const Grid&) const = default;
  };
  using Form = std::variant<Independent, Comonotone, Analytic, Grid>;

  static DefaultProfile independent(double pd);
  static DefaultProfile comonotone(double pd);
  static DefaultProfile analytic(const CopulaFamily& copula, double pd, AnalyticRoute route);
  // Grid-backed siBMM profile; rejects knots violating the profile invariants.
  static DefaultProfile from_grid(std::vector<double> values);
  // Grid profile of a general BMM, built from conditional default
  // probabilities on the cells of a uniform partition of (0, 1). Only
  // G(0) = 0, monotonicity and the Lipschitz bound are required, so
  // non-monotone conditional probabilities are allowed.
  static DefaultProfile from_conditional_pd(std::span<const double> cell_pd);

  double pd() const noexcept { return pd_; }
  const Form& form() const noexcept { return form_; }

  // G(s), s ∈ [0, 1].
  double value(double s) const;
  double operator()(double s) const { return value(s); }

  // Right derivative G'(t) = P(D = 1 | factor at quantile t), t ∈ (0, 1).
  double conditional_pd(double t) const;

  // G on `grid_n` uniform knots of [0, 1].
  std::vector<double> sample(int grid_n = kProfileGridSize) const;

  // True if the conditional default probability is piecewise constant
  // between breakpoints(); exact integration then needs one point per piece.
  bool piecewise_constant_pd() const;
  // Points in (0, 1) where conditional_pd may jump.
  std::vector<double> breakpoints() const;

  std::string describe() const;

  bool operator==(const DefaultProfile&) const = default;

 private:
  DefaultProfile(double pd, Form form) : pd_(pd), form_(std::move(form)) {}

  double pd_;
  Form form_;
};

// G(s) = s − Ĉ(1 − pd, s) for an SI copula.
DefaultProfile profile_from_copula(const CopulaFamily& copula, double pd);

// Closed-form profiles of the Gaussian (asset correlation ρ, copula
// parameter √ρ), Clayton and survival Clayton threshold models.
DefaultProfile gaussian_profile(double asset_corr, double pd);
DefaultProfile clayton_profile(double theta, double pd);
DefaultProfile survival_clayton_profile(double theta, double pd);

// Pointwise max (`lower`, least risky) and min (`upper`, most risky) of a
// family of profiles sharing one pd. When one member attains the bound at
// every knot that member is returned as is; otherwise the bound is a grid
// profile. A non-convex pointwise min is replaced by its greatest convex
// minorant and `upper_repaired` is set.
struct ProfileEnvelope {
  DefaultProfile lower;
  DefaultProfile upper;
  bool upper_repaired = false;
};

ProfileEnvelope envelope(std::span<const DefaultProfile> profiles, int grid_n = kProfileGridSize);

// upper.G ≤ p.G ≤ lower.G on `grid_n` knots.
bool check_membership(const DefaultProfile& p, const ProfileEnvelope& env,
                      int grid_n = kProfileGridSize);

// Sorted ascending copy.
std::vector<double> increasing_rearrangement(std::span<const double> values);

// Greatest convex minorant of knot values on a uniform grid.
std::vector<double> greatest_convex_minorant(std::span<const double> values);

struct ProfileCheck {
  double origin_error = 0.0;     // |G(0)|
  double terminal_error = 0.0;   // |G(1) − pd|
  double min_first_diff = 0.0;   // monotonicity: ≥ −tol
  double min_second_diff = 0.0;  // convexity: ≥ −tol
  double max_slope_excess = 0.0; // first diff − step: ≤ tol

  bool monotone() const { return min_first_diff >= -kTolerances.profile_shape; }
  bool convex() const { return min_second_diff >= -kTolerances.profile_shape; }
  bool lipschitz() const { return max_slope_excess <= kTolerances.profile_shape; }
  bool passes() const {
    return origin_error <= kTolerances.profile_origin &&
           terminal_error <= kTolerances.profile_terminal && monotone() && convex() &&
           lipschitz();
  }
};

ProfileCheck check_profile(const DefaultProfile& p, int grid_n = kProfileGridSize);

// One named curve for CSV export.
struct NamedProfile {
  std::string name;
  const DefaultProfile* profile;
};

// CSV with column s, then G_<name> for each profile, then pd_<name> holding
// conditional_pd (left-limit at s = 1, right-limit elsewhere).
void write_curves_csv(std::ostream& out, std::span<const NamedProfile> profiles,
                      int grid_n = kProfileGridSize);

}  // namespace sibmm
