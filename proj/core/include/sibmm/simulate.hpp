#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sibmm/default_profile.hpp"
#include "sibmm/portfolio.hpp"

namespace sibmm {

// Portfolio losses as fractions of total exposure. Monte Carlo samples keep
// draw order (needed for batch-means errors) and carry no weights; exact
// distributions are sorted support points with probabilities.
struct LossSample {
  std::vector<double> losses;
  std::vector<double> weights;  // empty: equally weighted
  bool sorted = false;

  std::size_t size() const noexcept { return losses.size(); }
  bool empty() const noexcept { return losses.empty(); }
  bool weighted() const noexcept { return !weights.empty(); }
  double mean() const;
  // Ascending copy (weights permuted alongside).
  LossSample sorted_copy() const;
};

struct McSettings {
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

// Draws per RNG stream. Stream c is seeded from (seed, c) alone, so results
// do not depend on the number of workers.
inline constexpr std::uint64_t kChunkDraws = 8192;

// Conditionally independent defaults given a uniform factor t, with
// P(D_n = 1 | t) = profiles[n].conditional_pd(t), LGDs drawn independently.
LossSample simulate_losses(std::span<const DefaultProfile> profiles,
                           std::span<const Borrower> borrowers, const McSettings& mc);

// Independent Bernoulli(pd_n) defaults.
LossSample simulate_independent(std::span<const Borrower> borrowers, const McSettings& mc);

// Comonotone defaults: one uniform u per draw, D_n = 1{u ≥ 1 − pd_n}.
LossSample simulate_comonotone(std::span<const Borrower> borrowers, const McSettings& mc);

inline constexpr std::size_t kExactMaxBorrowers = 20;

// Exact loss law for deterministic LGDs: factor integrated by composite
// Gauss–Legendre (or exactly, piece by piece, when every conditional pd is
// piecewise constant), default patterns accumulated by convolution.
LossSample exact_loss_distribution(std::span<const DefaultProfile> profiles,
                                   std::span<const Borrower> borrowers, int quad_nodes = 16);

}  // namespace sibmm
