#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sibmm/simulate.hpp"

namespace sibmm {

// Average value-at-risk at a confidence level: the mean of the worst
// (1 − confidence) probability mass of the loss law, i.e. the integral of the
// empirical quantile function over (confidence, 1) divided by its length.
// The boundary order statistic enters with its fractional weight.
double avar(const LossSample& sample, double confidence);

// Left-continuous empirical quantile inf{x : F(x) ≥ confidence}.
double var(const LossSample& sample, double confidence);

// E[(L − k)₊] for each threshold.
std::vector<double> stop_loss_curve(const LossSample& sample, std::span<const double> thresholds);

// Standard error of E[(L − k)₊]; zero for weighted (exact) samples.
std::vector<double> stop_loss_standard_errors(const LossSample& sample,
                                              std::span<const double> thresholds);

// Batch-means standard error of `statistic` over contiguous batches of a
// Monte Carlo sample in draw order. Zero for weighted samples.
double batch_standard_error(const LossSample& sample,
                            const std::function<double(const LossSample&)>& statistic,
                            int batches = 20);

double avar_standard_error(const LossSample& sample, double confidence, int batches = 20);

enum class CxVerdict { Dominates, Indistinguishable, Violates };

std::string_view to_string(CxVerdict verdict);

// `count` thresholds from 0 to the pooled 99.99% quantile of a and b.
std::vector<double> default_thresholds(const LossSample& a, const LossSample& b, int count = 101);

// Statistical evidence for a ≤_cx b. Dominates: the stop-loss curve of a
// stays below b's plus slack·SE at every threshold and the means agree within
// slack·SE. Violates: some threshold exceeds that band. Indistinguishable:
// no violation but the means differ.
CxVerdict check_cx_dominance(const LossSample& a, const LossSample& b,
                             std::span<const double> thresholds, double slack_multiplier = 3.0);

struct ExactComparison {
  double sup_distance = 0.0;  // sup_x |F_mc(x) − F_exact(x)|
  double epsilon = 0.0;       // DKW band half-width
  bool within_band = false;
};

// Kolmogorov distance between an unweighted Monte Carlo sample and an exact
// loss law, against the two-sided DKW band sqrt(ln(2/miss)/(2n)). Both CDFs
// are compared just left and right of every exact support point.
ExactComparison compare_to_exact(const LossSample& mc, const LossSample& exact,
                                 double miss_probability = 1e-3);

}  // namespace sibmm
