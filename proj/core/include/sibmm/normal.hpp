#pragma once

namespace sibmm {

// Standard normal CDF, Φ(x).
double norm_cdf(double x);

// Standard normal quantile, Φ⁻¹(p). Returns ∓inf at p = 0 / 1.
double norm_quantile(double p);

// Standard normal density.
double norm_pdf(double x);

// Bivariate standard normal CDF Φ₂(h, k; r) = P(X ≤ h, Y ≤ k) with
// corr(X, Y) = r ∈ [-1, 1]. Drezner–Wesolowsky / Genz Gauss–Legendre scheme,
// absolute error well below 1e-14 for finite arguments.
double bivariate_norm_cdf(double h, double k, double r);

}  // namespace sibmm
