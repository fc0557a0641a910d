#include "btrank/ranking.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "btrank/errors.h"
#include "btrank/solver.h"
#include "fmt/format.h"
#include "parallel.h"

namespace btrank {

Ranking MakeRanking(std::vector<double> keys, std::vector<double> scores,
                    double tolerance) {
  const int t = static_cast<int>(keys.size());
  Ranking ranking;
  ranking.order.resize(t);
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](int a, int b) { return keys[a] > keys[b]; });
  for (int k = 0; k < t; ++k) {
    const int team = ranking.order[k];
    if (k == 0 ||
        keys[ranking.order[k - 1]] - keys[team] >= tolerance) {
      ranking.groups.emplace_back();
    }
    ranking.groups.back().push_back(team);
  }
  ranking.keys = std::move(keys);
  ranking.scores = std::move(scores);
  return ranking;
}

Ranking ExtractRanking(const FitResult& fit, const Dataset& dataset) {
  if (static_cast<int>(fit.beta.size()) != dataset.num_teams()) {
    throw DimensionError("fit and data set disagree on the number of teams");
  }
  return MakeRanking(fit.beta, dataset.WinScores(), kRankTolerance);
}

Ranking ScoreRanking(const Dataset& dataset) {
  std::vector<double> scores = dataset.WinScores();
  return MakeRanking(scores, scores, 0.5);
}

double KendallDistance(const Ranking& a, const Ranking& b) {
  const std::vector<int> ra = a.RankOf();
  const std::vector<int> rb = b.RankOf();
  if (ra.size() != rb.size()) {
    throw DimensionError("rankings cover different numbers of teams");
  }
  auto sign = [](int x) { return (x > 0) - (x < 0); };
  double distance = 0.0;
  const int t = static_cast<int>(ra.size());
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) {
      const int sa = sign(ra[i] - ra[j]);
      const int sb = sign(rb[i] - rb[j]);
      if (sa == sb) continue;
      distance += (sa == 0 || sb == 0) ? 0.5 : 1.0;
    }
  }
  return distance;
}

bool SameOrdering(const Ranking& a, const Ranking& b) {
  if (a.groups.size() != b.groups.size()) return false;
  for (size_t g = 0; g < a.groups.size(); ++g) {
    std::vector<int> x = a.groups[g];
    std::vector<int> y = b.groups[g];
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  return true;
}

SweepResult SweepEpsilon(const ModelSpec& spec, const Dataset& dataset,
                         std::span<const double> epsilons,
                         const SolverConfig& config, int jobs) {
  if (epsilons.empty()) throw ConfigError("epsilon sweep needs at least one value");
  if (spec.perturbation.kind == PerturbationSpec::Kind::kMatrix) {
    throw ConfigError("a matrix perturbation has no epsilon to sweep");
  }
  const int n = static_cast<int>(epsilons.size());
  SweepResult result;
  result.entries.resize(n);
  std::vector<std::exception_ptr> errors(n);
  internal::ParallelFor(n, jobs, [&](int k) {
    try {
      ModelSpec local = spec;
      local.perturbation.epsilon = epsilons[k];
      SweepEntry& entry = result.entries[k];
      entry.epsilon = epsilons[k];
      entry.fit = Fit(local, dataset, config);
      entry.ranking = ExtractRanking(entry.fit, dataset);
    } catch (Error& e) {
      e.AddContext(fmt::format("epsilon = {}", epsilons[k]));
      errors[k] = std::current_exception();
    } catch (...) {
      errors[k] = std::current_exception();
    }
  });
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  result.kendall.assign(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double d = KendallDistance(result.entries[a].ranking,
                                       result.entries[b].ranking);
      result.kendall[a][b] = result.kendall[b][a] = d;
      if (!SameOrdering(result.entries[a].ranking, result.entries[b].ranking)) {
        result.stable = false;
      }
    }
  }
  return result;
}

MonotoneRatioReport MonotoneRatioCheck(const SweepResult& sweep) {
  if (!sweep.stable) {
    throw ConfigError("ratio monotonicity needs a sweep with a stable ranking");
  }
  MonotoneRatioReport report;
  if (sweep.entries.empty()) return report;
  std::vector<const SweepEntry*> sorted;
  for (const auto& entry : sweep.entries) sorted.push_back(&entry);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepEntry* a, const SweepEntry* b) {
                     return a->epsilon < b->epsilon;
                   });
  for (const SweepEntry* entry : sorted) report.epsilons.push_back(entry->epsilon);
  const std::vector<int>& order = sorted.front()->ranking.order;
  for (size_t k = 0; k + 1 < order.size(); ++k) {
    RatioTrend trend;
    trend.better = order[k];
    trend.worse = order[k + 1];
    for (const SweepEntry* entry : sorted) {
      trend.ratios.push_back(
          std::exp(entry->fit.beta[trend.better] - entry->fit.beta[trend.worse]));
    }
    for (size_t e = 1; e < trend.ratios.size(); ++e) {
      if (trend.ratios[e] > trend.ratios[e - 1] * (1.0 + 1e-9)) {
        trend.non_increasing = false;
      }
    }
    report.all_monotone = report.all_monotone && trend.non_increasing;
    report.pairs.push_back(std::move(trend));
  }
  return report;
}

}  // namespace btrank
