#include "sibmm/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "sibmm/error.hpp"
#include "sibmm/quadrature.hpp"

namespace sibmm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Borrowers sharing profile, exposure and LGD: their default count given
// the factor is binomial.
struct Cohort {
  std::uint64_t size = 0;
  double weight = 0.0;
  LgdSpec lgd;
  BetaParams beta{1.0, 1.0};
  double pd = 0.0;
  const DefaultProfile* profile = nullptr;
};

std::vector<Cohort> build_cohorts(std::span<const DefaultProfile> profiles,
                                  std::span<const Borrower> borrowers) {
  std::vector<Cohort> cohorts;
  for (std::size_t i = 0; i < borrowers.size(); ++i) {
    const Borrower& b = borrowers[i];
    if (b.exposure_weight == 0.0) continue;
    const DefaultProfile* profile = profiles.empty() ? nullptr : &profiles[i];
    auto match = std::find_if(cohorts.begin(), cohorts.end(), [&](const Cohort& c) {
      return c.weight == b.exposure_weight && c.pd == b.pd && c.lgd == b.lgd &&
             (profile == nullptr || *c.profile == *profile);
    });
    if (match != cohorts.end()) {
      ++match->size;
      continue;
    }
    Cohort c;
    c.size = 1;
    c.weight = b.exposure_weight;
    c.lgd = b.lgd;
    if (b.lgd.kind == LgdSpec::Kind::Beta) c.beta = beta_params(b.lgd.mean, b.lgd.vol);
    c.pd = b.pd;
    c.profile = profile;
    cohorts.push_back(c);
  }
  return cohorts;
}

enum class Mode { Mixture, Independent, Comonotone };

// Per-stream sampler; distribution objects live for one chunk only so that
// their internal caches never cross stream boundaries.
class CohortSampler {
 public:
  explicit CohortSampler(const Cohort& c) : cohort_(c), gamma_a_(c.beta.a), gamma_b_(c.beta.b) {}

  double loss(std::uint64_t defaults, std::mt19937_64& rng) {
    if (defaults == 0) return 0.0;
    if (cohort_.lgd.kind == LgdSpec::Kind::Deterministic) {
      return static_cast<double>(defaults) * cohort_.weight * cohort_.lgd.mean;
    }
    double total = 0.0;
    for (std::uint64_t i = 0; i < defaults; ++i) {
      const double x = gamma_a_(rng);
      const double y = gamma_b_(rng);
      total += x / (x + y);
    }
    return total * cohort_.weight;
  }

  std::uint64_t defaults(double p, std::mt19937_64& rng) const {
    p = std::clamp(p, 0.0, 1.0);
    if (p == 0.0) return 0;
    if (p == 1.0) return cohort_.size;
    if (cohort_.size == 1) return open_uniform(rng) < p ? 1 : 0;
    std::binomial_distribution<std::uint64_t> binom(cohort_.size, p);
    return binom(rng);
  }

 private:
  const Cohort& cohort_;
  std::gamma_distribution<double> gamma_a_;
  std::gamma_distribution<double> gamma_b_;
};

void run_chunk(std::span<const Cohort> cohorts, Mode mode, std::uint64_t seed, std::uint64_t chunk,
               std::span<double> out) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk + 1)));
  std::vector<CohortSampler> samplers(cohorts.begin(), cohorts.end());
  for (double& loss : out) {
    loss = 0.0;
    double t = 0.0;
    if (mode != Mode::Independent) t = open_uniform(rng);
    for (std::size_t c = 0; c < cohorts.size(); ++c) {
      const Cohort& cohort = cohorts[c];
      std::uint64_t d = 0;
      switch (mode) {
        case Mode::Mixture:
          d = samplers[c].defaults(cohort.profile->conditional_pd(t), rng);
          break;
        case Mode::Independent:
          d = samplers[c].defaults(cohort.pd, rng);
          break;
        case Mode::Comonotone:
          d = t >= 1.0 - cohort.pd ? cohort.size : 0;
          break;
      }
      loss += samplers[c].loss(d, rng);
    }
  }
}

LossSample run(std::span<const Cohort> cohorts, Mode mode, const McSettings& mc) {
  if (mc.samples == 0) throw DomainError("simulation needs at least one sample");
  LossSample sample;
  sample.losses.assign(mc.samples, 0.0);
  const std::uint64_t chunks = (mc.samples + kChunkDraws - 1) / kChunkDraws;
  const auto workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(mc.workers == 0 ? 1 : mc.workers, 1, chunks));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t begin = c * kChunkDraws;
        const std::uint64_t end = std::min(begin + kChunkDraws, mc.samples);
        run_chunk(cohorts, mode, mc.seed, c, std::span(sample.losses).subspan(begin, end - begin));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return sample;
}

// Sorted (loss, probability) support, merged on a 1e-12 lattice.
using Distribution = std::vector<std::pair<double, double>>;

constexpr double kSupportResolution = 1e-12;

bool same_point(double a, double b) {
  return std::llround(a / kSupportResolution) == std::llround(b / kSupportResolution);
}

void merge_into(Distribution& out, const Distribution& a, const Distribution& b) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&](double x, double p) {
    if (!out.empty() && same_point(out.back().first, x)) {
      out.back().second += p;
    } else {
      out.emplace_back(x, p);
    }
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first <= b[j].first)) {
      push(a[i].first, a[i].second);
      ++i;
    } else {
      push(b[j].first, b[j].second);
      ++j;
    }
  }
}

Distribution conditional_distribution(std::span<const Borrower> borrowers,
                                      std::span<const DefaultProfile> profiles, double t) {
  Distribution dist{{0.0, 1.0}};
  Distribution survive;
  Distribution fail;
  Distribution merged;
  for (std::size_t n = 0; n < borrowers.size(); ++n) {
    const double shift = borrowers[n].exposure_weight * borrowers[n].lgd.mean;
    if (shift == 0.0) continue;
    const double p = std::clamp(profiles[n].conditional_pd(t), 0.0, 1.0);
    if (p == 0.0) continue;
    survive.clear();
    fail.clear();
    for (const auto& [x, w] : dist) {
      if (p < 1.0) survive.emplace_back(x, w * (1.0 - p));
      fail.emplace_back(x + shift, w * p);
    }
    merge_into(merged, survive, fail);
    dist.swap(merged);
  }
  return dist;
}

}  // namespace

double LossSample::mean() const {
  if (losses.empty()) return 0.0;
  if (!weighted()) {
    return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
  }
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    total += losses[i] * weights[i];
    mass += weights[i];
  }
  return total / mass;
}

LossSample LossSample::sorted_copy() const {
  LossSample out;
  if (sorted) {
    out = *this;
    return out;
  }
  if (!weighted()) {
    out.losses = losses;
    std::sort(out.losses.begin(), out.losses.end());
  } else {
    std::vector<std::size_t> order(losses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
    out.losses.reserve(order.size());
    out.weights.reserve(order.size());
    for (const auto i : order) {
      out.losses.push_back(losses[i]);
      out.weights.push_back(weights[i]);
    }
  }
  out.sorted = true;
  return out;
}

LossSample simulate_losses(std::span<const DefaultProfile> profiles,
                           std::span<const Borrower> borrowers, const McSettings& mc) {
  if (profiles.size() != borrowers.size()) {
    throw DomainError("simulate_losses: one profile per borrower required");
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (std::abs(profiles[i].pd() - borrowers[i].pd) > 1e-9) {
      throw DomainError("simulate_losses: profile pd does not match borrower '" +
                        borrowers[i].name + "'");
    }
  }
  const auto cohorts = build_cohorts(profiles, borrowers);
  return run(cohorts, Mode::Mixture, mc);
}

LossSample simulate_independent(std::span<const Borrower> borrowers, const McSettings& mc) {
  const auto cohorts = build_cohorts({}, borrowers);
  return run(cohorts, Mode::Independent, mc);
}

LossSample simulate_comonotone(std::span<const Borrower> borrowers, const McSettings& mc) {
  const auto cohorts = build_cohorts({}, borrowers);
  return run(cohorts, Mode::Comonotone, mc);
}

LossSample exact_loss_distribution(std::span<const DefaultProfile> profiles,
                                   std::span<const Borrower> borrowers, int quad_nodes) {
  if (profiles.size() != borrowers.size()) {
    throw DomainError("exact_loss_distribution: one profile per borrower required");
  }
  if (borrowers.size() > kExactMaxBorrowers) {
    throw ScopeError("exact_loss_distribution supports at most " +
                     std::to_string(kExactMaxBorrowers) + " borrowers, got " +
                     std::to_string(borrowers.size()));
  }
  for (const auto& b : borrowers) {
    if (b.lgd.kind != LgdSpec::Kind::Deterministic) {
      throw ScopeError("exact_loss_distribution requires deterministic LGD ('" + b.name + "')");
    }
  }
  if (quad_nodes < 16) throw DomainError("exact_loss_distribution: quad_nodes must be at least 16");

  std::vector<double> cuts;
  bool piecewise = true;
  for (const auto& p : profiles) {
    piecewise = piecewise && p.piecewise_constant_pd();
    const auto bp = p.breakpoints();
    cuts.insert(cuts.end(), bp.begin(), bp.end());
  }

  QuadratureRule rule;
  std::vector<double> edges{0.0, 1.0};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  if (!piecewise) {
    // Grade panels towards both ends, where conditional pds are steepest.
    for (const double e : {1e-10, 1e-8, 1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.03, 0.1}) {
      edges.push_back(e);
      edges.push_back(1.0 - e);
    }
    for (int k = 2; k <= 8; ++k) edges.push_back(0.1 * k);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (piecewise) {
    for (std::size_t i = 1; i < edges.size(); ++i) {
      rule.nodes.push_back(0.5 * (edges[i - 1] + edges[i]));
      rule.weights.push_back(edges[i] - edges[i - 1]);
    }
  } else {
    rule = composite_gauss_legendre(quad_nodes, edges);
  }

  Distribution total;
  Distribution scaled;
  Distribution merged;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto dist = conditional_distribution(borrowers, profiles, rule.nodes[q]);
    scaled.clear();
    for (const auto& [x, w] : dist) scaled.emplace_back(x, w * rule.weights[q]);
    merge_into(merged, total, scaled);
    total.swap(merged);
  }

  LossSample out;
  out.sorted = true;
  for (const auto& [x, w] : total) {
    out.losses.push_back(x);
    out.weights.push_back(w);
  }
  return out;
}

}  // namespace sibmm
