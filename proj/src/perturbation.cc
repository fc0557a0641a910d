#include "btrank/perturbation.h"

#include <cmath>

#include "btrank/errors.h"
#include "fmt/format.h"

namespace btrank {
namespace {

PerturbedCounts CopyCounts(const Dataset& dataset) {
  const int t = dataset.num_teams();
  const auto& counts = dataset.counts();
  const auto& totals = dataset.totals();
  PerturbedCounts out;
  out.wins = RealMatrix(t);
  out.ties = RealMatrix(t);
  out.has_venues = !dataset.venueless();
  if (out.has_venues) {
    out.wins_home = RealMatrix(t);
    out.wins_away = RealMatrix(t);
    out.ties_home = RealMatrix(t);
  }
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      out.wins(i, j) = static_cast<double>(totals.wins(i, j));
      out.ties(i, j) = static_cast<double>(totals.ties(i, j));
      if (out.has_venues) {
        out.wins_home(i, j) = static_cast<double>(counts.a_home(i, j));
        out.wins_away(i, j) = static_cast<double>(counts.a_away(i, j));
        out.ties_home(i, j) = static_cast<double>(counts.t_home(i, j));
      }
    }
  }
  return out;
}

}  // namespace

PerturbedCounts Unperturbed(const Dataset& dataset) {
  return CopyCounts(dataset);
}

PerturbedCounts Perturb(const Dataset& dataset, const PerturbationSpec& spec) {
  spec.Validate();
  const int t = dataset.num_teams();
  PerturbedCounts out = CopyCounts(dataset);
  const auto& totals = dataset.totals();
  switch (spec.kind) {
    case PerturbationSpec::Kind::kImproved: {
      const double eps = spec.epsilon;
      for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) {
          if (i == j) continue;
          if (totals.games(i, j) > 0) out.wins(i, j) += eps;
          if (out.has_venues) {
            if (totals.hosted(i, j) > 0) out.wins_home(i, j) += eps;
            if (totals.hosted(j, i) > 0) out.wins_away(i, j) += eps;
          }
        }
      }
      break;
    }
    case PerturbationSpec::Kind::kConnerGrant: {
      const double eps = spec.epsilon;
      for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) {
          if (i == j) continue;
          out.wins(i, j) += eps;
          if (out.has_venues) {
            out.wins_home(i, j) += eps;
            out.wins_away(i, j) += eps;
          }
        }
      }
      break;
    }
    case PerturbationSpec::Kind::kMatrix: {
      if (spec.prior.size() != t) {
        throw ShapeError(fmt::format("prior matrix is {}x{}, data has {} teams",
                                     spec.prior.size(), spec.prior.size(), t));
      }
      for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) out.wins(i, j) += spec.prior(i, j);
      }
      out.has_venues = false;
      out.wins_home = out.wins_away = out.ties_home = RealMatrix();
      break;
    }
  }
  return out;
}

double AutoEpsilon(int num_teams) {
  if (num_teams < 2) {
    throw ConfigError(fmt::format("auto epsilon needs t >= 2, got {}",
                                  num_teams));
  }
  const double t = num_teams;
  return std::sqrt(std::log(t) / t);
}

}  // namespace btrank
