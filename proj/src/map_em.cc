// MAP estimation of Bradley-Terry merits under independent Gamma(d, b)
// priors, by the EM algorithm with latent Gamma variables
// Z_ij ~ Gamma(n_ij, u_i + u_j). The E-step gives
// E[Z_ij] = n_ij / (u_i + u_j); the M-step is then closed form.

#include <cmath>
#include <numeric>

#include "btrank/connectivity.h"
#include "btrank/errors.h"
#include "btrank/solver.h"
#include "fmt/format.h"

namespace btrank {
namespace {

struct WinData {
  std::vector<double> scores;  // a_i
  RealMatrix games;            // a_ij + a_ji, ties excluded
};

WinData Wins(const Dataset& dataset) {
  const int t = dataset.num_teams();
  const auto& wins = dataset.totals().wins;
  WinData data{std::vector<double>(t, 0.0), RealMatrix(t)};
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      data.scores[i] += wins(i, j);
      data.games(i, j) = static_cast<double>(wins(i, j) + wins(j, i));
    }
  }
  return data;
}

}  // namespace

double MapPriorSpec::ResolvedRate(int num_teams) const {
  return rate ? *rate : shape * num_teams - 1.0;
}

double LogPosterior(const Dataset& dataset, const MapPriorSpec& prior,
                    const std::vector<double>& u) {
  const int t = dataset.num_teams();
  const double d = prior.shape;
  const double b = prior.ResolvedRate(t);
  const auto& wins = dataset.totals().wins;
  double value = 0.0;
  for (int i = 0; i < t; ++i) {
    value += (d - 1.0) * std::log(u[i]) - b * u[i];
    for (int j = 0; j < t; ++j) {
      if (i == j || wins(i, j) == 0) continue;
      value += wins(i, j) * (std::log(u[i]) - std::log(u[i] + u[j]));
    }
  }
  return value;
}

FitResult FitMapEm(const Dataset& dataset, const MapPriorSpec& prior,
                   const SolverConfig& config,
                   const Normalization& normalization) {
  const int t = dataset.num_teams();
  const double d = prior.shape;
  const double b = prior.ResolvedRate(t);
  if (!std::isfinite(d) || d < 1.0) {
    throw ConfigError(fmt::format("prior shape d must be >= 1, got {}", d));
  }
  if (!std::isfinite(b) || b < 0.0) {
    throw ConfigError(fmt::format("prior rate b must be >= 0, got {}", b));
  }
  if (d > 1.0 && b == 0.0) {
    throw ConfigError(
        "with d > 1 the rate b must be positive, else the posterior mode "
        "escapes to infinite scale");
  }
  const bool maximum_likelihood = d == 1.0;
  if (maximum_likelihood) {
    if (b != 0.0) {
      throw ConfigError(fmt::format(
          "with d = 1 only b = 0 (maximum likelihood) has an interior mode; "
          "got b = {}",
          b));
    }
    const ConditionResult a = CheckConditionA(dataset);
    if (!a.passed()) {
      throw ExistenceError(
          "with d = 1, b = 0 the mode is the maximum likelihood estimate, "
          "which needs condition A",
          *a.witness);
    }
  }
  if (normalization.kind == Normalization::Kind::kReference &&
      (normalization.reference < 0 || normalization.reference >= t)) {
    throw ConfigError("reference team index out of range");
  }

  const WinData data = Wins(dataset);
  std::vector<double> u(t, 1.0 / t);
  std::vector<double> next(t);
  FitResult fit;
  fit.model = ModelKind::kBradleyTerry;
  fit.teams = dataset.teams();
  fit.normalization = normalization;

  // Gradient of the log posterior with respect to log u_i.
  auto gradient_norm = [&](const std::vector<double>& v) {
    double norm = 0.0;
    for (int i = 0; i < t; ++i) {
      double g = d - 1.0 + data.scores[i] - b * v[i];
      for (int j = 0; j < t; ++j) {
        if (i != j && data.games(i, j) != 0.0) {
          g -= data.games(i, j) * v[i] / (v[i] + v[j]);
        }
      }
      norm = std::max(norm, std::abs(g));
    }
    return norm;
  };

  double grad = gradient_norm(u);
  int iterations = 0;
  while (grad > config.grad_tol && iterations < config.max_iters) {
    for (int i = 0; i < t; ++i) {
      double expected = 0.0;
      for (int j = 0; j < t; ++j) {
        if (i != j && data.games(i, j) != 0.0) {
          expected += data.games(i, j) / (u[i] + u[j]);
        }
      }
      next[i] = (d - 1.0 + data.scores[i]) / (b + expected);
    }
    if (maximum_likelihood) {
      // Scale-free; keep the iterate on the simplex.
      const double sum = std::accumulate(next.begin(), next.end(), 0.0);
      for (double& v : next) v /= sum;
    }
    u.swap(next);
    ++iterations;
    fit.trace.push_back(LogPosterior(dataset, prior, u));
    grad = gradient_norm(u);
  }

  fit.beta.resize(t);
  for (int i = 0; i < t; ++i) fit.beta[i] = std::log(u[i]) - std::log(u[0]);
  fit.merits = NormalizeMerits(fit.beta, normalization);
  fit.log_likelihood = LogPosterior(dataset, prior, u);
  fit.iterations = iterations;
  fit.converged = grad <= config.grad_tol;
  fit.gradient_sup_norm = grad;
  return fit;
}

}  // namespace btrank
