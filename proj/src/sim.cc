#include "btrank/sim.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "btrank/errors.h"
#include "btrank/perturbation.h"
#include "btrank/solver.h"
#include "fmt/format.h"
#include "parallel.h"

namespace btrank {
namespace {

struct Replica {
  std::vector<double> truth;
  Dataset data;
};

Replica Sample(const ConsistencyConfig& config, int t, int replica) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(t),
                    static_cast<std::uint32_t>(replica)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> merit(config.merit_low,
                                               config.merit_high);
  std::vector<double> u(t);
  for (double& x : u) x = merit(rng);

  CountMatrices counts(t);
  std::vector<std::string> teams;
  for (int i = 0; i < t; ++i) teams.push_back(fmt::format("T{}", i + 1));
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) {
      std::bernoulli_distribution first_wins(u[i] / (u[i] + u[j]));
      for (int g = 0; g < config.games_per_pair; ++g) {
        if (first_wins(rng)) {
          ++counts.a_home(i, j);
        } else {
          ++counts.a_home(j, i);
        }
      }
    }
  }
  return {std::move(u), Dataset(std::move(teams), std::move(counts), true)};
}

}  // namespace

void ConsistencyConfig::Validate() const {
  if (t_grid.empty()) throw ConfigError("t grid is empty");
  for (int t : t_grid) {
    if (t < 3) throw ConfigError(fmt::format("t = {} is below 3", t));
  }
  if (games_per_pair < 1) throw ConfigError("games per pair must be >= 1");
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  if (!(merit_low > 0.0) || !(merit_high >= merit_low) ||
      !std::isfinite(merit_high)) {
    throw ConfigError("merit range must satisfy 0 < low <= high");
  }
}

double AlignedMaxRelativeError(const std::vector<double>& estimate,
                               const std::vector<double>& truth) {
  if (estimate.size() != truth.size() || truth.empty()) {
    throw DimensionError("merit vectors differ in length");
  }
  const double n = static_cast<double>(truth.size());
  double log_est = 0.0, log_true = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    log_est += std::log(estimate[i]);
    log_true += std::log(truth[i]);
  }
  const double shift = (log_true - log_est) / n;
  double worst = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    // (est / g_est) / (true / g_true) - 1
    const double r = std::exp(std::log(estimate[i]) - std::log(truth[i]) + shift);
    worst = std::max(worst, std::abs(r - 1.0));
  }
  return worst;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ConfigError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ConsistencyReport RunConsistency(const ConsistencyConfig& config, int jobs) {
  config.Validate();
  ConsistencyReport report;
  report.config = config;
  const int cells = static_cast<int>(config.t_grid.size());
  const int total = cells * config.replicas;
  std::vector<double> errors(total);
  std::vector<std::exception_ptr> failures(total);
  internal::ParallelFor(total, jobs, [&](int k) {
    const int t = config.t_grid[k / config.replicas];
    const int replica = k % config.replicas;
    try {
      Replica r = Sample(config, t, replica);
      ModelSpec spec;
      spec.perturbation = PerturbationSpec::Improved(AutoEpsilon(t));
      spec.normalization = Normalization::Reference(0);
      const FitResult fit = RequireConverged(Fit(spec, r.data, config.solver));
      errors[k] = AlignedMaxRelativeError(fit.merits, r.truth);
    } catch (Error& e) {
      e.AddContext(fmt::format("t = {}, replica {}", t, replica));
      failures[k] = std::current_exception();
    } catch (...) {
      failures[k] = std::current_exception();
    }
  });
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  for (int c = 0; c < cells; ++c) {
    ConsistencyCell cell;
    cell.t = config.t_grid[c];
    cell.epsilon = AutoEpsilon(cell.t);
    cell.errors.assign(errors.begin() + c * config.replicas,
                       errors.begin() + (c + 1) * config.replicas);
    cell.median = Quantile(cell.errors, 0.5);
    cell.p90 = Quantile(cell.errors, 0.9);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace btrank
