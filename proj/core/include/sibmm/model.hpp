#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sibmm/copula.hpp"
#include "sibmm/default_profile.hpp"
#include "sibmm/portfolio.hpp"

namespace sibmm {

// Families of siBMMs whose loss bounds a scenario asks for.
//   GaussianInterval         asset correlation in corr_interval
//   ClaytonInterval          Clayton θ in theta_interval
//   SurvivalClaytonInterval  survival Clayton θ in theta_interval
//   GaussClaytonHybrid       class generated by the Gaussian profile at the
//                            IRB correlation and the tau-matched Clayton one
//   Independent, Comonotone  the two extreme members
//   SinglePoint              one fixed copula per borrower (lower = upper)
enum class ModelFamily {
  GaussianInterval,
  ClaytonInterval,
  SurvivalClaytonInterval,
  GaussClaytonHybrid,
  Independent,
  Comonotone,
  SinglePoint,
};

std::string_view to_string(ModelFamily family);
std::optional<ModelFamily> parse_model_family(std::string_view name);

struct ModelSpec {
  ModelFamily family = ModelFamily::GaussianInterval;
  // SinglePoint only. Without an explicit parameter the borrower's IRB
  // correlation is used (√ρ for Gaussian, the tau-matched θ for Clayton).
  CopulaKind point_copula = CopulaKind::Gaussian;
  std::optional<double> point_param;

  std::string label() const;
  bool operator==(const ModelSpec&) const = default;
};

struct BorrowerModel {
  ProfileEnvelope bounds;
  DefaultProfile point;
};

BorrowerModel borrower_model(const ModelSpec& spec, const Borrower& borrower);

// Per-borrower lower, upper and point profiles, aligned with `borrowers`.
struct PortfolioModel {
  std::vector<DefaultProfile> lower;
  std::vector<DefaultProfile> upper;
  std::vector<DefaultProfile> point;
  std::size_t repaired = 0;  // borrowers whose upper bound needed the convex repair
};

PortfolioModel portfolio_model(const ModelSpec& spec, std::span<const Borrower> borrowers);

}  // namespace sibmm
