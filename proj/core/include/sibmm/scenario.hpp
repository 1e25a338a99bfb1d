#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sibmm/model.hpp"
#include "sibmm/portfolio.hpp"
#include "sibmm/simulate.hpp"

namespace sibmm {

// Monte Carlo settings as configured. workers = 0 selects the default
// (environment variable SIBMM_WORKERS, else the hardware concurrency).
struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;

  bool operator==(const McConfig&) const = default;
};

// Where the borrowers came from, kept so a scenario can be described and
// rerun.
struct PortfolioSource {
  enum class Kind { Homogeneous, Csv };

  Kind kind = Kind::Homogeneous;
  int n = 0;                            // Homogeneous
  double pd = 0.0;                      // Homogeneous
  std::filesystem::path csv;            // Csv, resolved against the scenario file
  std::optional<LgdSpec> lgd;           // required for Homogeneous, overrides the CSV otherwise
  std::optional<Interval> corr_interval;  // Homogeneous only
};

struct Scenario {
  std::string label;
  PortfolioSource source;
  std::vector<Borrower> borrowers;
  std::vector<ModelSpec> models;
  std::vector<double> alphas{0.95, 0.99};
  McConfig mc;
  IrbBounds irb;
  std::vector<std::string> warnings;
};

struct McOverrides {
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

// Parses a scenario document (JSON, comments allowed) and builds its
// portfolio. Relative CSV paths resolve against `base_dir`. Throws
// ConfigError naming the offending field, or ParseError from the CSV.
Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Applies command-line overrides, then validates.
void apply_overrides(Scenario& scenario, const McOverrides& overrides);

// Throws ConfigError for the first field violating its invariants.
void validate_scenario(const Scenario& scenario);

// Worker count actually used for `requested` (0 = default).
unsigned resolve_workers(unsigned requested);

McSettings mc_settings(const Scenario& scenario);

// Canonical JSON rendering of the scenario's configuration (not the loaded
// borrowers), used for hashing and for meta output.
std::string canonical_config(const Scenario& scenario);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace sibmm
