#ifndef BTRANK_LIKELIHOOD_H_
#define BTRANK_LIKELIHOOD_H_

// Penalized log-likelihoods of the five paired-comparison models, in the
// concave parameterization beta_i = log u_i, phi = log theta,
// log_gamma = log gamma. All sums run in log space.
//
//   Bradley-Terry   P(i beats j) = u_i / (u_i + u_j)
//   Rao-Kupper      P(i beats j) = u_i / (u_i + theta u_j), theta > 1
//                   P(tie)       = (theta^2 - 1) u_i u_j /
//                                  ((u_i + theta u_j)(u_j + theta u_i))
//   Davidson        win : loss : tie = u_i : u_j : theta sqrt(u_i u_j)
//   Home-field      P(host h beats v) = gamma u_h / (gamma u_h + u_v)
//   David           host h: win : loss : tie
//                           = gamma u_h : u_v : theta sqrt(u_h u_v)
//
// Venue-free models read PerturbedCounts::wins / ties; venue models read the
// venue split.

#include <optional>
#include <span>
#include <vector>

#include "btrank/optimizer.h"
#include "btrank/types.h"

namespace btrank {

// Each throws DimensionError when `point` does not match the model, plus:
double LogLikBradleyTerry(const ParameterPoint& point,
                          const PerturbedCounts& counts);
// ThetaDomainError unless phi > 0; NoTiesError.
double LogLikRaoKupper(const ParameterPoint& point,
                       const PerturbedCounts& counts);
// NoTiesError.
double LogLikDavidson(const ParameterPoint& point,
                      const PerturbedCounts& counts);
// VenuelessDataError.
double LogLikHomeField(const ParameterPoint& point,
                       const PerturbedCounts& counts);
// NoTiesError, VenuelessDataError.
double LogLikDavid(const ParameterPoint& point, const PerturbedCounts& counts);

double LogLikelihood(ModelKind model, const ParameterPoint& point,
                     const PerturbedCounts& counts);

// Partial derivatives with respect to every beta_i, phi and log_gamma.
struct ParameterGradient {
  std::vector<double> beta;
  double phi = 0.0;
  double log_gamma = 0.0;
};
ParameterGradient FullGradient(ModelKind model, const ParameterPoint& point,
                               const PerturbedCounts& counts);

// Gradient over the free coordinates: beta_1 .. beta_{t-1} (beta_0 is the
// reference), then phi and log_gamma when the model has them.
std::vector<double> Gradient(ModelKind model, const ParameterPoint& point,
                             const PerturbedCounts& counts);

enum class Venue { kNeutral, kFirstHome, kSecondHome };

struct OutcomeProbabilities {
  double first_wins = 0.0;
  double second_wins = 0.0;
  double tie = 0.0;
};

// Outcome probabilities of a meeting of teams i and j. A neutral venue
// drops the home factor.
OutcomeProbabilities Probabilities(ModelKind model, const ParameterPoint& point,
                                   int i, int j, Venue venue = Venue::kNeutral);

// Parameter count of the free-coordinate vector.
int FreeDimension(ModelKind model, int num_teams);

struct ObjectiveOptions {
  // Hold a parameter at a fixed value instead of optimizing it.
  std::optional<double> fixed_phi;
  std::optional<double> fixed_log_gamma;
};

// The penalized log-likelihood as a function of the free coordinates.
class Objective : public DifferentiableObjective {
 public:
  Objective(ModelKind model, PerturbedCounts counts,
            ObjectiveOptions options = {});

  int dimension() const override { return dimension_; }
  double Value(std::span<const double> x) const override;
  double ValueAndGradient(std::span<const double> x,
                          std::vector<double>& gradient) const override;

  ParameterPoint ToPoint(std::span<const double> x) const;
  std::vector<double> FromPoint(const ParameterPoint& point) const;

  ModelKind model() const { return model_; }
  const PerturbedCounts& counts() const { return counts_; }

 private:
  ModelKind model_;
  PerturbedCounts counts_;
  ObjectiveOptions options_;
  bool free_phi_ = false;
  bool free_log_gamma_ = false;
  int dimension_ = 0;
};

}  // namespace btrank

#endif  // BTRANK_LIKELIHOOD_H_
