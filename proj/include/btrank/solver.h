#ifndef BTRANK_SOLVER_H_
#define BTRANK_SOLVER_H_

#include <optional>
#include <vector>

#include "btrank/likelihood.h"
#include "btrank/optimizer.h"
#include "btrank/types.h"

namespace btrank {

// Verifies that the penalized estimate of `spec.model` exists for this data
// and perturbation. Throws VenuelessDataError, NoTiesError or
// ExistenceError (with witness). Rules:
//   bt, rao-kupper, davidson: condition B (Improved); strong connectivity of
//       the perturbed win digraph (Matrix); always (ConnerGrant).
//   home-field, david: condition C (Improved); always (ConnerGrant).
//   rao-kupper, davidson, david additionally need at least one tie.
void CheckExistence(const ModelSpec& spec, const Dataset& dataset);

// Penalized maximum likelihood fit. Returns a result with converged=false
// when the iteration budget runs out; see RequireConverged.
FitResult Fit(const ModelSpec& spec, const Dataset& dataset,
              const SolverConfig& config = {});

struct FitOptions {
  ObjectiveOptions objective;
  std::optional<ParameterPoint> start;
};

// Fits already-perturbed counts without any existence check. For callers
// that build counts themselves (e.g. expected counts in simulations).
FitResult FitPerturbed(ModelKind model, const PerturbedCounts& counts,
                       const Normalization& normalization,
                       const SolverConfig& config = {},
                       const FitOptions& options = {});

// Throws NonConvergenceError (carrying the result) unless fit.converged.
const FitResult& RequireConverged(const FitResult& fit);

// Converts log-merits to merits in the requested normalization.
std::vector<double> NormalizeMerits(const std::vector<double>& beta,
                                    const Normalization& normalization);

// Hunter's MM iteration for Bradley-Terry on perturbed counts, from `beta`
// (beta_0 = 0 kept). One step: u_i <- a_i / sum_j n_ij / (u_i + u_j).
std::vector<double> MmStep(const PerturbedCounts& counts,
                           const std::vector<double>& beta);

// ---- Bayesian MAP by EM ------------------------------------------------

// Independent Gamma(shape d, rate b) priors on the merits.
struct MapPriorSpec {
  double shape = 1.1;
  std::optional<double> rate;  // default d * t - 1

  double ResolvedRate(int num_teams) const;
};

// Log posterior density (up to a constant) of merits `u` under the
// Bradley-Terry likelihood of the raw win counts. Ties are not used.
double LogPosterior(const Dataset& dataset, const MapPriorSpec& prior,
                    const std::vector<double>& u);

// EM fixed point of u_i <- (d - 1 + a_i) / (b + sum_j n_ij / (u_i + u_j))
// from u_i = 1/t. Requires d > 1 and b > 0, or d = 1 with condition A
// (ExistenceError otherwise; ConfigError for invalid priors). The trace
// holds the log posterior per iteration and log_likelihood the final log
// posterior.
FitResult FitMapEm(const Dataset& dataset, const MapPriorSpec& prior,
                   const SolverConfig& config = {},
                   const Normalization& normalization = Normalization::Simplex());

}  // namespace btrank

#endif  // BTRANK_SOLVER_H_
