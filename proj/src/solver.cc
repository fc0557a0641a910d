#include "btrank/solver.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "btrank/connectivity.h"
#include "btrank/errors.h"
#include "btrank/perturbation.h"
#include "fmt/format.h"

namespace btrank {
namespace {

// MM iterations tried before handing a Bradley-Terry fit to the
// quasi-Newton maximizer. MM is linearly convergent and crawls when merits
// approach the boundary (small epsilon).
constexpr int kMmBudget = 1000;

std::string WitnessText(const PartitionWitness& w,
                        const std::vector<std::string>& teams) {
  auto names = [&](const std::vector<int>& set) {
    std::string out = "{";
    for (size_t k = 0; k < set.size(); ++k) {
      if (k) out += ", ";
      out += teams[set[k]];
    }
    return out + "}";
  };
  return fmt::format("q1 = {}, q2 = {} ({})", names(w.q1), names(w.q2),
                     w.detail);
}

struct Run {
  std::vector<double> x;
  double value = 0.0;
  AscentTrace trace;
};

bool MmApplicable(const PerturbedCounts& counts) {
  const int t = counts.size();
  for (int i = 0; i < t; ++i) {
    double wins = 0.0;
    for (int j = 0; j < t; ++j) {
      if (counts.wins(i, j) < 0.0) return false;
      wins += counts.wins(i, j);
    }
    if (!(wins > 0.0)) return false;
  }
  return true;
}

Run RunFrom(const Objective& objective, std::vector<double> x,
            const SolverConfig& config) {
  Run run;
  int used = 0;
  std::vector<double> gradient;
  if (objective.model() == ModelKind::kBradleyTerry &&
      MmApplicable(objective.counts())) {
    const int budget = std::min(config.max_iters, kMmBudget);
    double value = objective.ValueAndGradient(x, gradient);
    run.trace.gradient_sup_norm = SupNorm(gradient);
    while (run.trace.gradient_sup_norm > config.grad_tol && used < budget) {
      const std::vector<double> beta =
          MmStep(objective.counts(), objective.ToPoint(x).beta);
      x.assign(beta.begin() + 1, beta.end());
      value = objective.ValueAndGradient(x, gradient);
      run.trace.values.push_back(value);
      run.trace.gradient_sup_norm = SupNorm(gradient);
      ++used;
    }
    run.trace.iterations = used;
    if (run.trace.gradient_sup_norm <= config.grad_tol) {
      run.x = std::move(x);
      run.value = value;
      run.trace.converged = true;
      run.trace.reason = StopReason::kGradient;
      return run;
    }
  }
  SolverConfig rest = config;
  rest.max_iters = std::max(0, config.max_iters - used);
  AscentResult ascent = MaximizeConcave(objective, std::move(x), rest);
  run.x = std::move(ascent.point);
  run.value = ascent.value;
  run.trace.values.insert(run.trace.values.end(), ascent.trace.values.begin(),
                          ascent.trace.values.end());
  run.trace.iterations = used + ascent.trace.iterations;
  run.trace.converged = ascent.trace.converged;
  run.trace.gradient_sup_norm = ascent.trace.gradient_sup_norm;
  run.trace.reason = ascent.trace.reason;
  return run;
}

ParameterPoint DefaultStart(ModelKind model, int t,
                            const ObjectiveOptions& options) {
  ParameterPoint point;
  point.beta.assign(t, 0.0);
  if (ModelHasTieParameter(model)) {
    point.phi = options.fixed_phi.value_or(
        model == ModelKind::kRaoKupper ? std::log(2.0) : 0.0);
  }
  if (ModelHasHomeParameter(model)) {
    point.log_gamma = options.fixed_log_gamma.value_or(0.0);
  }
  return point;
}

ParameterPoint RandomStart(ModelKind model, int t,
                           const ObjectiveOptions& options,
                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> spread(-2.0, 2.0);
  ParameterPoint point = DefaultStart(model, t, options);
  for (int i = 1; i < t; ++i) point.beta[i] = spread(rng);
  if (ModelHasTieParameter(model) && !options.fixed_phi) {
    point.phi = model == ModelKind::kRaoKupper
                    ? std::uniform_real_distribution<double>(0.05, 2.0)(rng)
                    : spread(rng);
  }
  if (ModelHasHomeParameter(model) && !options.fixed_log_gamma) {
    point.log_gamma = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  }
  return point;
}

void CheckNormalization(const Normalization& normalization, int t) {
  if (normalization.kind == Normalization::Kind::kReference &&
      (normalization.reference < 0 || normalization.reference >= t)) {
    throw ConfigError(fmt::format("reference team index {} out of range",
                                  normalization.reference));
  }
}

}  // namespace

std::vector<double> MmStep(const PerturbedCounts& counts,
                           const std::vector<double>& beta) {
  const int t = counts.size();
  const double top = *std::max_element(beta.begin(), beta.end());
  std::vector<double> u(t);
  for (int i = 0; i < t; ++i) u[i] = std::exp(beta[i] - top);
  std::vector<double> next(t);
  for (int i = 0; i < t; ++i) {
    double wins = 0.0;
    double denominator = 0.0;
    for (int j = 0; j < t; ++j) {
      if (i == j) continue;
      wins += counts.wins(i, j);
      const double games = counts.wins(i, j) + counts.wins(j, i);
      if (games != 0.0) denominator += games / (u[i] + u[j]);
    }
    next[i] = std::log(wins / denominator);
  }
  const double reference = next[0];
  for (double& b : next) b -= reference;
  return next;
}

std::vector<double> NormalizeMerits(const std::vector<double>& beta,
                                    const Normalization& normalization) {
  std::vector<double> merits(beta.size());
  if (normalization.kind == Normalization::Kind::kReference) {
    const double ref = beta.at(normalization.reference);
    for (size_t i = 0; i < beta.size(); ++i) merits[i] = std::exp(beta[i] - ref);
    return merits;
  }
  const double top = *std::max_element(beta.begin(), beta.end());
  double sum = 0.0;
  for (size_t i = 0; i < beta.size(); ++i) {
    merits[i] = std::exp(beta[i] - top);
    sum += merits[i];
  }
  for (double& m : merits) m /= sum;
  return merits;
}

void CheckExistence(const ModelSpec& spec, const Dataset& dataset) {
  spec.perturbation.Validate();
  const ModelKind model = spec.model;
  const bool venue_model = ModelHasHomeParameter(model);
  using Kind = PerturbationSpec::Kind;

  if (venue_model && dataset.venueless()) {
    throw VenuelessDataError(fmt::format(
        "model {} needs home/away information; the data set has none",
        ModelName(model)));
  }
  if (venue_model && spec.perturbation.kind == Kind::kMatrix) {
    throw ConfigError(fmt::format(
        "matrix perturbation has no venue split; not usable with model {}",
        ModelName(model)));
  }
  if (ModelHasTieParameter(model) && !dataset.HasTies()) {
    throw NoTiesError(fmt::format(
        "model {} needs at least one tie in the data", ModelName(model)));
  }

  std::optional<PartitionWitness> witness;
  switch (spec.perturbation.kind) {
    case Kind::kConnerGrant:
      return;
    case Kind::kImproved:
      witness = venue_model ? CheckConditionC(dataset).witness
                            : CheckConditionB(dataset).witness;
      break;
    case Kind::kMatrix: {
      const PerturbedCounts perturbed = Perturb(dataset, spec.perturbation);
      const int t = dataset.num_teams();
      for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) {
          if (perturbed.wins(i, j) < 0.0) {
            throw ConfigError(fmt::format(
                "perturbed win count [{}][{}] = {} is negative", i, j,
                perturbed.wins(i, j)));
          }
        }
      }
      witness =
          CheckStrongConnectivity(PositiveEntryDigraph(perturbed.wins)).witness;
      break;
    }
  }
  if (witness) {
    throw ExistenceError(
        fmt::format("the {} estimate does not exist: condition {} fails: {}",
                    ModelName(model), ConditionName(witness->violated),
                    WitnessText(*witness, dataset.teams())),
        *witness);
  }
}

FitResult FitPerturbed(ModelKind model, const PerturbedCounts& counts,
                       const Normalization& normalization,
                       const SolverConfig& config, const FitOptions& options) {
  const int t = counts.size();
  CheckNormalization(normalization, t);
  if (config.max_iters < 1 || !(config.grad_tol > 0.0) ||
      !(config.rel_ll_tol > 0.0) || config.restarts < 0) {
    throw ConfigError("solver tolerances and iteration limits must be positive");
  }
  const Objective objective(model, counts, options.objective);
  const ParameterPoint start =
      options.start ? *options.start : DefaultStart(model, t, options.objective);

  Run best = RunFrom(objective, objective.FromPoint(start), config);
  std::vector<Run> others;
  std::mt19937_64 rng(config.seed);
  for (int r = 0; r < config.restarts; ++r) {
    const ParameterPoint random = RandomStart(model, t, options.objective, rng);
    Run run = RunFrom(objective, objective.FromPoint(random), config);
    if (run.value > best.value) std::swap(run, best);
    others.push_back(std::move(run));
  }

  const ParameterPoint point = objective.ToPoint(best.x);
  FitResult fit;
  fit.model = model;
  fit.beta = point.beta;
  fit.normalization = normalization;
  fit.merits = NormalizeMerits(point.beta, normalization);
  if (point.phi) fit.theta = std::exp(*point.phi);
  if (point.log_gamma) fit.gamma = std::exp(*point.log_gamma);
  fit.log_likelihood = best.value;
  fit.iterations = best.trace.iterations;
  fit.converged = best.trace.converged;
  fit.gradient_sup_norm = best.trace.gradient_sup_norm;
  fit.trace = std::move(best.trace.values);
  if (config.restarts > 0) {
    double spread = 0.0;
    for (const Run& run : others) {
      const ParameterPoint p = objective.ToPoint(run.x);
      for (int i = 0; i < t; ++i) {
        spread = std::max(spread, std::abs(p.beta[i] - point.beta[i]));
      }
      if (!run.trace.converged) fit.converged = false;
    }
    fit.restart_spread = spread;
  }
  return fit;
}

FitResult Fit(const ModelSpec& spec, const Dataset& dataset,
              const SolverConfig& config) {
  CheckNormalization(spec.normalization, dataset.num_teams());
  CheckExistence(spec, dataset);
  const PerturbedCounts perturbed = Perturb(dataset, spec.perturbation);
  FitResult fit =
      FitPerturbed(spec.model, perturbed, spec.normalization, config);
  fit.teams = dataset.teams();
  if (spec.perturbation.kind != PerturbationSpec::Kind::kMatrix) {
    fit.epsilon = spec.perturbation.epsilon;
  }
  return fit;
}

const FitResult& RequireConverged(const FitResult& fit) {
  if (!fit.converged) {
    throw NonConvergenceError(
        fmt::format("no convergence after {} iterations (gradient sup-norm {})",
                    fit.iterations, fit.gradient_sup_norm),
        fit);
  }
  return fit;
}

}  // namespace btrank
