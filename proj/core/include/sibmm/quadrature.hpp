#pragma once

#include <vector>

namespace sibmm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss–Legendre rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = 0.0, double hi = 1.0);

// Composite rule: one n-point Gauss–Legendre panel per consecutive pair of
// `edges` (sorted, duplicates skipped).
QuadratureRule composite_gauss_legendre(int n, const std::vector<double>& edges);

}  // namespace sibmm
