#ifndef BTRANK_SIM_H_
#define BTRANK_SIM_H_

#include <cstdint>
#include <vector>

#include "btrank/optimizer.h"

namespace btrank {

// Round-robin consistency experiment for the Bradley-Terry-epsilon fit with
// epsilon = sqrt(log t / t).
struct ConsistencyConfig {
  std::vector<int> t_grid;
  double merit_low = 1.0;  // true merits are drawn uniformly on [low, high]
  double merit_high = 2.0;
  int games_per_pair = 4;  // every pair meets exactly this often
  int replicas = 1;
  std::uint64_t seed = 0;
  SolverConfig solver;

  void Validate() const;  // ConfigError when invalid
};

struct ConsistencyCell {
  int t = 0;
  double epsilon = 0.0;
  std::vector<double> errors;  // one per replica
  double median = 0.0;
  double p90 = 0.0;
};

struct ConsistencyReport {
  ConsistencyConfig config;
  std::vector<ConsistencyCell> cells;  // in t_grid order
};

// max_i |u^_i / u_i - 1| after scaling both vectors to geometric mean 1.
double AlignedMaxRelativeError(const std::vector<double>& estimate,
                               const std::vector<double>& truth);

// Linear-interpolation quantile, q in [0, 1].
double Quantile(std::vector<double> values, double q);

// Deterministic for a given config; replicas draw from independent streams
// keyed by (seed, t, replica), so `jobs` does not change the output.
ConsistencyReport RunConsistency(const ConsistencyConfig& config, int jobs = 1);

}  // namespace btrank

#endif  // BTRANK_SIM_H_
