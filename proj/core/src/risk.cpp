#include "sibmm/risk.hpp"

#include <algorithm>
#include <cmath>

#include "sibmm/error.hpp"

namespace sibmm {

namespace {

void require_confidence(const LossSample& sample, double confidence) {
  if (sample.empty()) throw DomainError("risk measure of an empty sample");
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0, 1)");
}

// Snap x to the nearest integer when it is within rounding noise of it.
double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

double total_weight(const LossSample& s) {
  double w = 0.0;
  for (const double x : s.weights) w += x;
  return w;
}

// Suffix sums over a sorted sample: Σ_{i ≥ j} w_i, Σ w_i x_i, Σ w_i x_i².
struct TailSums {
  std::vector<double> mass;
  std::vector<double> first;
  std::vector<double> second;
  double total = 0.0;
};

TailSums tail_sums(const LossSample& sorted) {
  const std::size_t n = sorted.size();
  TailSums t;
  t.mass.assign(n + 1, 0.0);
  t.first.assign(n + 1, 0.0);
  t.second.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const double w = sorted.weighted() ? sorted.weights[i] : 1.0;
    const double x = sorted.losses[i];
    t.mass[i] = t.mass[i + 1] + w;
    t.first[i] = t.first[i + 1] + w * x;
    t.second[i] = t.second[i + 1] + w * x * x;
  }
  t.total = t.mass[0];
  return t;
}

struct StopLoss {
  std::vector<double> value;
  std::vector<double> se;
};

StopLoss stop_loss(const LossSample& sample, std::span<const double> thresholds) {
  const LossSample sorted = sample.sorted_copy();
  const TailSums t = tail_sums(sorted);
  StopLoss out;
  out.value.reserve(thresholds.size());
  out.se.reserve(thresholds.size());
  for (const double k : thresholds) {
    const auto j = static_cast<std::size_t>(
        std::upper_bound(sorted.losses.begin(), sorted.losses.end(), k) - sorted.losses.begin());
    const double m1 = std::max(0.0, (t.first[j] - k * t.mass[j]) / t.total);
    const double m2 =
        std::max(0.0, (t.second[j] - 2.0 * k * t.first[j] + k * k * t.mass[j]) / t.total);
    out.value.push_back(m1);
    if (sample.weighted()) {
      out.se.push_back(0.0);
    } else {
      const auto n = static_cast<double>(sample.size());
      const double variance = std::max(0.0, m2 - m1 * m1) * n / std::max(1.0, n - 1.0);
      out.se.push_back(std::sqrt(variance / n));
    }
  }
  return out;
}

}  // namespace

double avar(const LossSample& sample, double confidence) {
  require_confidence(sample, confidence);
  const LossSample sorted = sample.sorted_copy();
  const std::size_t n = sorted.size();
  const double tail = 1.0 - confidence;

  if (!sorted.weighted()) {
    const double count = snap(tail * static_cast<double>(n));
    const auto whole = static_cast<std::size_t>(std::floor(count));
    const double frac = count - static_cast<double>(whole);
    double sum = 0.0;
    for (std::size_t i = 0; i < whole; ++i) sum += sorted.losses[n - 1 - i];
    if (frac > 0.0 && whole < n) sum += frac * sorted.losses[n - 1 - whole];
    return sum / count;
  }

  const double mass = tail * total_weight(sorted);
  double taken = 0.0;
  double sum = 0.0;
  for (std::size_t i = n; i-- > 0 && taken < mass;) {
    const double take = std::min(sorted.weights[i], mass - taken);
    sum += take * sorted.losses[i];
    taken += take;
  }
  return sum / mass;
}

double var(const LossSample& sample, double confidence) {
  require_confidence(sample, confidence);
  const LossSample sorted = sample.sorted_copy();
  const std::size_t n = sorted.size();
  if (!sorted.weighted()) {
    const double rank = std::ceil(snap(confidence * static_cast<double>(n)));
    const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(n))) - 1;
    return sorted.losses[idx];
  }
  const double target = confidence * total_weight(sorted);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += sorted.weights[i];
    if (cumulative >= target - 1e-12) return sorted.losses[i];
  }
  return sorted.losses.back();
}

std::vector<double> stop_loss_curve(const LossSample& sample, std::span<const double> thresholds) {
  if (sample.empty()) throw DomainError("stop-loss transform of an empty sample");
  return stop_loss(sample, thresholds).value;
}

std::vector<double> stop_loss_standard_errors(const LossSample& sample,
                                              std::span<const double> thresholds) {
  if (sample.empty()) throw DomainError("stop-loss transform of an empty sample");
  return stop_loss(sample, thresholds).se;
}

double batch_standard_error(const LossSample& sample,
                            const std::function<double(const LossSample&)>& statistic,
                            int batches) {
  if (sample.weighted()) return 0.0;
  if (batches < 2) throw DomainError("batch means need at least 2 batches");
  const std::size_t n = sample.size();
  const auto b = static_cast<std::size_t>(batches);
  if (n < 2 * b) return 0.0;
  std::vector<double> stats;
  stats.reserve(b);
  for (std::size_t i = 0; i < b; ++i) {
    LossSample batch;
    batch.losses.assign(sample.losses.begin() + static_cast<std::ptrdiff_t>(i * n / b),
                        sample.losses.begin() + static_cast<std::ptrdiff_t>((i + 1) * n / b));
    stats.push_back(statistic(batch));
  }
  double mean = 0.0;
  for (const double s : stats) mean += s;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (const double s : stats) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
}

double avar_standard_error(const LossSample& sample, double confidence, int batches) {
  return batch_standard_error(
      sample, [confidence](const LossSample& s) { return avar(s, confidence); }, batches);
}

std::string_view to_string(CxVerdict verdict) {
  switch (verdict) {
    case CxVerdict::Dominates:
      return "dominates";
    case CxVerdict::Indistinguishable:
      return "indistinguishable";
    case CxVerdict::Violates:
      return "violates";
  }
  return "unknown";
}

std::vector<double> default_thresholds(const LossSample& a, const LossSample& b, int count) {
  if (count < 2) throw DomainError("need at least 2 thresholds");
  LossSample pooled;
  pooled.losses = a.losses;
  pooled.losses.insert(pooled.losses.end(), b.losses.begin(), b.losses.end());
  if (a.weighted() || b.weighted()) {
    pooled.weights = a.weighted() ? a.weights : std::vector<double>(a.size(), 1.0 / a.size());
    const auto wb = b.weighted() ? b.weights : std::vector<double>(b.size(), 1.0 / b.size());
    pooled.weights.insert(pooled.weights.end(), wb.begin(), wb.end());
  }
  const double top = var(pooled, 0.9999);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = top * i / (count - 1);
  return out;
}

CxVerdict check_cx_dominance(const LossSample& a, const LossSample& b,
                             std::span<const double> thresholds, double slack_multiplier) {
  constexpr double floor_tol = 1e-12;
  const StopLoss sa = stop_loss(a, thresholds);
  const StopLoss sb = stop_loss(b, thresholds);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double band = slack_multiplier * std::hypot(sa.se[i], sb.se[i]) + floor_tol;
    if (sa.value[i] > sb.value[i] + band) return CxVerdict::Violates;
  }
  // Stop-loss at a threshold below every loss is the mean shifted by k.
  const std::vector<double> origin{-1.0};
  const StopLoss ma = stop_loss(a, origin);
  const StopLoss mb = stop_loss(b, origin);
  const double band = slack_multiplier * std::hypot(ma.se[0], mb.se[0]) + floor_tol;
  if (std::abs(ma.value[0] - mb.value[0]) > band) return CxVerdict::Indistinguishable;
  return CxVerdict::Dominates;
}

ExactComparison compare_to_exact(const LossSample& mc, const LossSample& exact, double miss_probability) {
  if (mc.empty() || mc.weighted()) throw DomainError("compare_to_exact needs an unweighted sample");
  if (exact.empty()) throw DomainError("compare_to_exact needs a non-empty exact law");
  if (!(miss_probability > 0.0 && miss_probability < 1.0)) throw DomainError("miss probability must lie in (0,1)");
  std::vector<double> draws = mc.losses;
  std::sort(draws.begin(), draws.end());
  const LossSample law = exact.sorted ? exact : exact.sorted_copy();
  const double n = static_cast<double>(draws.size());
  const double total = total_weight(law);
  constexpr double h = 1e-10;

  ExactComparison out;
  out.epsilon = std::sqrt(std::log(2.0 / miss_probability) / (2.0 * n));
  double below = 0.0;  // exact mass strictly left of the current point
  for (std::size_t j = 0; j < law.size(); ++j) {
    const double x = law.losses[j];
    const double w = law.weighted() ? law.weights[j] : 1.0;
    const double f_left = below / total;
    const double f_right = (below + w) / total;
    const auto left = std::upper_bound(draws.begin(), draws.end(), x - h) - draws.begin();
    const auto right = std::upper_bound(draws.begin(), draws.end(), x + h) - draws.begin();
    out.sup_distance = std::max(out.sup_distance, std::abs(static_cast<double>(left) / n - f_left));
    out.sup_distance = std::max(out.sup_distance, std::abs(static_cast<double>(right) / n - f_right));
    below += w;
  }
  out.within_band = out.sup_distance <= out.epsilon;
  return out;
}

}  // namespace sibmm
