#include "sibmm/model.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "sibmm/error.hpp"

namespace sibmm {

namespace {

DefaultProfile single_point_profile(const ModelSpec& spec, const Borrower& b) {
  switch (spec.point_copula) {
    case CopulaKind::Independence:
      return DefaultProfile::independent(b.pd);
    case CopulaKind::Comonotone:
      return DefaultProfile::comonotone(b.pd);
    case CopulaKind::Gaussian: {
      const double r = spec.point_param.value_or(std::sqrt(b.corr_point));
      return DefaultProfile::analytic(CopulaFamily::gaussian(r), b.pd, AnalyticRoute::ClosedForm);
    }
    case CopulaKind::Clayton:
      return clayton_profile(spec.point_param.value_or(clayton_theta_matching_gaussian(b.corr_point)),
                             b.pd);
    case CopulaKind::SurvivalClayton:
      return survival_clayton_profile(
          spec.point_param.value_or(clayton_theta_matching_gaussian(b.corr_point)), b.pd);
  }
  throw DomainError("unknown copula kind");
}

BorrowerModel from_members(const std::vector<DefaultProfile>& members, DefaultProfile point) {
  return BorrowerModel{envelope(members), std::move(point)};
}

}  // namespace

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::GaussianInterval:
      return "gaussian";
    case ModelFamily::ClaytonInterval:
      return "clayton";
    case ModelFamily::SurvivalClaytonInterval:
      return "survival_clayton";
    case ModelFamily::GaussClaytonHybrid:
      return "gauss_clayton";
    case ModelFamily::Independent:
      return "independent";
    case ModelFamily::Comonotone:
      return "comonotone";
    case ModelFamily::SinglePoint:
      return "single_point";
  }
  return "unknown";
}

std::optional<ModelFamily> parse_model_family(std::string_view name) {
  for (const auto f : {ModelFamily::GaussianInterval, ModelFamily::ClaytonInterval,
                       ModelFamily::SurvivalClaytonInterval, ModelFamily::GaussClaytonHybrid,
                       ModelFamily::Independent, ModelFamily::Comonotone, ModelFamily::SinglePoint}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::string ModelSpec::label() const {
  if (family != ModelFamily::SinglePoint) return std::string(to_string(family));
  std::ostringstream out;
  out << "single_point:" << to_string(point_copula);
  if (point_param) out << '(' << *point_param << ')';
  return out.str();
}

BorrowerModel borrower_model(const ModelSpec& spec, const Borrower& b) {
  const double pd = b.pd;
  switch (spec.family) {
    case ModelFamily::GaussianInterval:
      return from_members({gaussian_profile(b.corr_interval.lo, pd), gaussian_profile(b.corr_interval.hi, pd)},
                          gaussian_profile(b.corr_point, pd));
    case ModelFamily::ClaytonInterval:
      return from_members({clayton_profile(b.theta_interval.lo, pd), clayton_profile(b.theta_interval.hi, pd)},
                          clayton_profile(clayton_theta_matching_gaussian(b.corr_point), pd));
    case ModelFamily::SurvivalClaytonInterval:
      return from_members({survival_clayton_profile(b.theta_interval.lo, pd),
                           survival_clayton_profile(b.theta_interval.hi, pd)},
                          survival_clayton_profile(clayton_theta_matching_gaussian(b.corr_point), pd));
    case ModelFamily::GaussClaytonHybrid: {
      auto gauss = gaussian_profile(b.corr_point, pd);
      auto clay = clayton_profile(clayton_theta_matching_gaussian(b.corr_point), pd);
      return from_members({gauss, clay}, gauss);
    }
    case ModelFamily::Independent: {
      auto p = DefaultProfile::independent(pd);
      return BorrowerModel{ProfileEnvelope{p, p, false}, p};
    }
    case ModelFamily::Comonotone: {
      auto p = DefaultProfile::comonotone(pd);
      return BorrowerModel{ProfileEnvelope{p, p, false}, p};
    }
    case ModelFamily::SinglePoint: {
      auto p = single_point_profile(spec, b);
      return BorrowerModel{ProfileEnvelope{p, p, false}, p};
    }
  }
  throw DomainError("unknown model family");
}

PortfolioModel portfolio_model(const ModelSpec& spec, std::span<const Borrower> borrowers) {
  using Key = std::tuple<double, double, double, double>;
  std::map<Key, BorrowerModel> cache;
  PortfolioModel out;
  out.lower.reserve(borrowers.size());
  out.upper.reserve(borrowers.size());
  out.point.reserve(borrowers.size());
  for (const auto& b : borrowers) {
    const Key key{b.pd, b.corr_point, b.corr_interval.lo, b.corr_interval.hi};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, borrower_model(spec, b)).first;
    const BorrowerModel& m = it->second;
    out.lower.push_back(m.bounds.lower);
    out.upper.push_back(m.bounds.upper);
    out.point.push_back(m.point);
    if (m.bounds.upper_repaired) ++out.repaired;
  }
  return out;
}

}  // namespace sibmm
