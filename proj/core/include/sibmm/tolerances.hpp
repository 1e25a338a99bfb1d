#pragma once

namespace sibmm {

// Numerical tolerances shared by the copula and profile checks.
struct NumericTolerances {
  // Copula axioms, pointwise order and SI second differences.
  double axiom = 1e-9;
  // Extra allowance for evaluating axioms on a finite grid.
  double grid_slack = 1e-12;
  // Profile invariants: |G(0)|, convexity and Lipschitz checks.
  double profile_origin = 1e-12;
  double profile_terminal = 1e-9;
  double profile_shape = 1e-9;
  // Second differences below -convex_repair trigger the convex-minorant repair.
  double convex_repair = 1e-14;
  // Survival-Clayton inverse conditional root finding.
  double root = 1e-12;
  double root_lo = 1e-14;
  double root_hi = 1.0 - 1e-14;
};

inline constexpr NumericTolerances kTolerances{};

// Uniform knots used by grid-backed profiles and envelopes.
inline constexpr int kProfileGridSize = 1001;

}  // namespace sibmm
