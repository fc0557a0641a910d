#include "btrank/types.h"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "btrank/errors.h"
#include "fmt/format.h"

namespace btrank {

DerivedTotals DeriveTotals(const CountMatrices& counts) {
  const int t = counts.size();
  DerivedTotals totals{CountMatrix(t), CountMatrix(t), CountMatrix(t),
                       CountMatrix(t)};
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      totals.wins(i, j) = counts.a_home(i, j) + counts.a_away(i, j);
      totals.ties(i, j) = counts.t_home(i, j) + counts.t_home(j, i);
      totals.hosted(i, j) =
          counts.a_home(i, j) + counts.a_away(j, i) + counts.t_home(i, j);
    }
  }
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      totals.games(i, j) =
          totals.wins(i, j) + totals.wins(j, i) + totals.ties(i, j);
    }
  }
  return totals;
}

namespace {

void ValidateCountMatrix(const CountMatrix& m, int t, const char* name) {
  if (m.size() != t) {
    throw ShapeError(fmt::format("{} is {}x{}, expected {}x{}", name, m.size(),
                                 m.size(), t, t));
  }
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      if (m(i, j) < 0) {
        throw NegativeCountError(
            fmt::format("{}[{}][{}] = {} is negative", name, i, j, m(i, j)));
      }
    }
    if (m(i, i) != 0) {
      throw ShapeError(fmt::format("{}[{}][{}] must be zero", name, i, i));
    }
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::string> teams, CountMatrices counts,
                 bool venueless)
    : teams_(std::move(teams)), counts_(std::move(counts)),
      venueless_(venueless) {
  const int t = num_teams();
  if (t < 2) {
    throw ShapeError(fmt::format("need at least 2 teams, got {}", t));
  }
  std::unordered_set<std::string> seen;
  for (const auto& team : teams_) {
    if (!seen.insert(team).second) {
      throw ShapeError(fmt::format("duplicate team id '{}'", team));
    }
  }
  ValidateCountMatrix(counts_.a_home, t, "a_home");
  ValidateCountMatrix(counts_.a_away, t, "a_away");
  ValidateCountMatrix(counts_.t_home, t, "t_home");
  totals_ = DeriveTotals(counts_);
}

std::optional<int> Dataset::IndexOf(std::string_view team) const {
  for (int i = 0; i < num_teams(); ++i) {
    if (teams_[i] == team) return i;
  }
  return std::nullopt;
}

bool Dataset::HasTies() const {
  const int t = num_teams();
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      if (counts_.t_home(i, j) > 0) return true;
    }
  }
  return false;
}

std::vector<double> Dataset::WinScores() const {
  const int t = num_teams();
  std::vector<double> scores(t, 0.0);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) scores[i] += totals_.wins(i, j);
  }
  return scores;
}

std::int64_t Dataset::TotalGames() const {
  std::int64_t total = 0;
  const int t = num_teams();
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) total += totals_.games(i, j);
  }
  return total;
}

PerturbationSpec PerturbationSpec::Improved(double epsilon) {
  return {Kind::kImproved, epsilon, {}};
}

PerturbationSpec PerturbationSpec::ConnerGrant(double epsilon) {
  return {Kind::kConnerGrant, epsilon, {}};
}

PerturbationSpec PerturbationSpec::Matrix(RealMatrix prior) {
  return {Kind::kMatrix, 0.0, std::move(prior)};
}

void PerturbationSpec::Validate() const {
  if (kind == Kind::kMatrix) {
    const int t = prior.size();
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < t; ++j) {
        if (!std::isfinite(prior(i, j))) {
          throw ConfigError(fmt::format("prior[{}][{}] is not finite", i, j));
        }
        if (i == j && prior(i, j) != 0.0) {
          throw ShapeError(fmt::format("prior[{}][{}] must be zero", i, i));
        }
        if (prior(i, j) <= -1.0) {
          throw ConfigError(fmt::format("prior[{}][{}] = {} must exceed -1", i,
                                        j, prior(i, j)));
        }
      }
    }
    return;
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw NonPositiveEpsilonError(
        fmt::format("epsilon must be positive and finite, got {}", epsilon));
  }
}

bool PerturbedCounts::HasTies() const {
  const int t = size();
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      if (ties(i, j) > 0.0) return true;
    }
  }
  return false;
}

std::string_view ModelName(ModelKind model) {
  switch (model) {
    case ModelKind::kBradleyTerry:
      return "bt";
    case ModelKind::kRaoKupper:
      return "rao-kupper";
    case ModelKind::kDavidson:
      return "davidson";
    case ModelKind::kHomeField:
      return "home-field";
    case ModelKind::kDavid:
      return "david";
  }
  return "unknown";
}

std::optional<ModelKind> ParseModelName(std::string_view name) {
  for (ModelKind m : {ModelKind::kBradleyTerry, ModelKind::kRaoKupper,
                      ModelKind::kDavidson, ModelKind::kHomeField,
                      ModelKind::kDavid}) {
    if (ModelName(m) == name) return m;
  }
  return std::nullopt;
}

bool ModelHasTieParameter(ModelKind model) {
  return model == ModelKind::kRaoKupper || model == ModelKind::kDavidson ||
         model == ModelKind::kDavid;
}

bool ModelHasHomeParameter(ModelKind model) {
  return model == ModelKind::kHomeField || model == ModelKind::kDavid;
}

std::vector<int> Ranking::RankOf() const {
  std::vector<int> rank(order.size(), 0);
  int position = 1;
  for (const auto& group : groups) {
    for (int team : group) rank[team] = position;
    position += static_cast<int>(group.size());
  }
  return rank;
}

std::string_view ConditionName(Condition condition) {
  switch (condition) {
    case Condition::kA:
      return "A";
    case Condition::kB:
      return "B";
    case Condition::kC:
      return "C";
  }
  return "?";
}

}  // namespace btrank
