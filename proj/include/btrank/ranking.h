#ifndef BTRANK_RANKING_H_
#define BTRANK_RANKING_H_

#include <span>
#include <vector>

#include "btrank/optimizer.h"
#include "btrank/types.h"

namespace btrank {

// Orders teams by `keys` descending (lower index first among equals);
// consecutive keys closer than `tolerance` share a tie group.
Ranking MakeRanking(std::vector<double> keys, std::vector<double> scores,
                    double tolerance);

// Ranking by fitted merit (beta scale, tie groups per kRankTolerance), with
// the data set's win scores attached.
Ranking ExtractRanking(const FitResult& fit, const Dataset& dataset);

// Ranking by win score a_i = sum_j a_ij; equal scores tie.
Ranking ScoreRanking(const Dataset& dataset);

// Kendall distance: pairs ordered oppositely count 1, pairs tied in one
// ranking and strictly ordered in the other count 1/2.
double KendallDistance(const Ranking& a, const Ranking& b);

bool SameOrdering(const Ranking& a, const Ranking& b);

struct SweepEntry {
  double epsilon = 0.0;
  FitResult fit;
  Ranking ranking;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  bool stable = true;  // every ranking coincides, tie groups included
  // kendall[a][b]: distance between the rankings of entries a and b.
  std::vector<std::vector<double>> kendall;
};

// One fit per epsilon, keeping the perturbation kind of `spec` (improved or
// Conner-Grant). Fit errors are rethrown with the offending epsilon
// prefixed. Runs on up to `jobs` threads; output order follows `epsilons`.
SweepResult SweepEpsilon(const ModelSpec& spec, const Dataset& dataset,
                         std::span<const double> epsilons,
                         const SolverConfig& config = {}, int jobs = 1);

struct RatioTrend {
  int better = 0;  // team ranked directly above `worse`
  int worse = 0;
  std::vector<double> ratios;  // u_better / u_worse per epsilon (ascending)
  bool non_increasing = true;
};

struct MonotoneRatioReport {
  std::vector<double> epsilons;  // ascending
  std::vector<RatioTrend> pairs;
  bool all_monotone = true;
};

// For each pair adjacent in the (common) ranking, whether the merit ratio
// is non-increasing as epsilon grows. Throws ConfigError on an unstable
// sweep.
MonotoneRatioReport MonotoneRatioCheck(const SweepResult& sweep);

}  // namespace btrank

#endif  // BTRANK_RANKING_H_
