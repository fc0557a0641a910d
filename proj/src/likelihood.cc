#include "btrank/likelihood.h"

#include <cmath>
#include <limits>
#include <utility>

#include "btrank/errors.h"
#include "fmt/format.h"

namespace btrank {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 + e^x) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Softmax of three logits; returns log-sum-exp.
double Softmax3(double a, double b, double c, double p[3]) {
  const double m = std::max({a, b, c});
  const double ea = std::exp(a - m);
  const double eb = std::exp(b - m);
  const double ec = std::exp(c - m);
  const double sum = ea + eb + ec;
  p[0] = ea / sum;
  p[1] = eb / sum;
  p[2] = ec / sum;
  return m + std::log(sum);
}

// log(theta^2 - 1) for theta = e^phi, phi > 0.
double LogThetaSquaredMinusOne(double phi) {
  return 2.0 * phi + std::log(-std::expm1(-2.0 * phi));
}

// Accumulates value and (optionally) the full gradient. Domain violations
// yield -infinity; precondition errors are raised by the public wrappers.
class Evaluator {
 public:
  Evaluator(const ParameterPoint& point, const PerturbedCounts& counts,
            ParameterGradient* gradient)
      : beta_(point.beta),
        phi_(point.phi.value_or(0.0)),
        log_gamma_(point.log_gamma.value_or(0.0)),
        counts_(counts),
        gradient_(gradient) {
    if (gradient_) {
      gradient_->beta.assign(beta_.size(), 0.0);
      gradient_->phi = 0.0;
      gradient_->log_gamma = 0.0;
    }
  }

  double BradleyTerry() const {
    const int t = counts_.size();
    double value = 0.0;
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < t; ++j) {
        const double w = counts_.wins(i, j);
        if (i == j || w == 0.0) continue;
        const double d = beta_[i] - beta_[j];
        value -= w * Softplus(-d);
        if (gradient_) {
          const double loss = w * Sigmoid(-d);
          gradient_->beta[i] += loss;
          gradient_->beta[j] -= loss;
        }
      }
    }
    return value;
  }

  double RaoKupper() const {
    if (!(phi_ > 0.0)) return kNegInf;
    const int t = counts_.size();
    double value = 0.0;
    for (int i = 0; i < t; ++i) {
      for (int j = i + 1; j < t; ++j) {
        const double tau = counts_.ties(i, j);
        // A tie contributes one factor from each side's win denominator.
        const double wi = counts_.wins(i, j) + tau;
        const double wj = counts_.wins(j, i) + tau;
        if (wi != 0.0) {
          const double x = phi_ + beta_[j] - beta_[i];
          value -= wi * Softplus(x);
          if (gradient_) {
            const double q = wi * Sigmoid(x);
            gradient_->beta[i] += q;
            gradient_->beta[j] -= q;
            gradient_->phi -= q;
          }
        }
        if (wj != 0.0) {
          const double x = phi_ + beta_[i] - beta_[j];
          value -= wj * Softplus(x);
          if (gradient_) {
            const double q = wj * Sigmoid(x);
            gradient_->beta[j] += q;
            gradient_->beta[i] -= q;
            gradient_->phi -= q;
          }
        }
        if (tau != 0.0) {
          value += tau * LogThetaSquaredMinusOne(phi_);
          if (gradient_) {
            gradient_->phi += tau * 2.0 / -std::expm1(-2.0 * phi_);
          }
        }
      }
    }
    return value;
  }

  double Davidson() const {
    const int t = counts_.size();
    double value = 0.0;
    for (int i = 0; i < t; ++i) {
      for (int j = i + 1; j < t; ++j) {
        value += ThreeWay(i, j, counts_.wins(i, j), counts_.wins(j, i),
                          counts_.ties(i, j), /*home_boost=*/0.0,
                          /*with_home=*/false);
      }
    }
    return value;
  }

  double HomeField() const {
    const int t = counts_.size();
    double value = 0.0;
    for (int h = 0; h < t; ++h) {
      for (int v = 0; v < t; ++v) {
        if (h == v) continue;
        const double wh = counts_.wins_home(h, v);
        const double wv = counts_.wins_away(v, h);
        const double n = wh + wv;
        if (n == 0.0) continue;
        const double d = log_gamma_ + beta_[h] - beta_[v];
        // wh * log p + wv * log(1 - p), p = sigmoid(d)
        value -= wh * Softplus(-d) + wv * Softplus(d);
        if (gradient_) {
          const double residual = wh - n * Sigmoid(d);
          gradient_->beta[h] += residual;
          gradient_->beta[v] -= residual;
          gradient_->log_gamma += residual;
        }
      }
    }
    return value;
  }

  double David() const {
    const int t = counts_.size();
    double value = 0.0;
    for (int h = 0; h < t; ++h) {
      for (int v = 0; v < t; ++v) {
        if (h == v) continue;
        value += ThreeWay(h, v, counts_.wins_home(h, v),
                          counts_.wins_away(v, h), counts_.ties_home(h, v),
                          log_gamma_, /*with_home=*/true);
      }
    }
    return value;
  }

 private:
  // Win : loss : tie = e^(boost + b_i) : e^(b_j) : e^(phi + (b_i + b_j)/2).
  double ThreeWay(int i, int j, double wi, double wj, double tau, double boost,
                  bool with_home) const {
    const double n = wi + wj + tau;
    if (n == 0.0) return 0.0;
    const double e1 = boost + beta_[i];
    const double e2 = beta_[j];
    const double e3 = phi_ + 0.5 * (beta_[i] + beta_[j]);
    double p[3];
    const double lse = Softmax3(e1, e2, e3, p);
    double value = -n * lse;
    if (wi != 0.0) value += wi * e1;
    if (wj != 0.0) value += wj * e2;
    if (tau != 0.0) value += tau * e3;
    if (gradient_) {
      gradient_->beta[i] += wi + 0.5 * tau - n * (p[0] + 0.5 * p[2]);
      gradient_->beta[j] += wj + 0.5 * tau - n * (p[1] + 0.5 * p[2]);
      gradient_->phi += tau - n * p[2];
      if (with_home) gradient_->log_gamma += wi - n * p[0];
    }
    return value;
  }

  const std::vector<double>& beta_;
  double phi_;
  double log_gamma_;
  const PerturbedCounts& counts_;
  ParameterGradient* gradient_;
};

double Evaluate(ModelKind model, const ParameterPoint& point,
                const PerturbedCounts& counts, ParameterGradient* gradient) {
  Evaluator eval(point, counts, gradient);
  switch (model) {
    case ModelKind::kBradleyTerry:
      return eval.BradleyTerry();
    case ModelKind::kRaoKupper:
      return eval.RaoKupper();
    case ModelKind::kDavidson:
      return eval.Davidson();
    case ModelKind::kHomeField:
      return eval.HomeField();
    case ModelKind::kDavid:
      return eval.David();
  }
  return kNegInf;
}

void CheckPointShape(ModelKind model, const ParameterPoint& point, int t) {
  if (static_cast<int>(point.beta.size()) != t) {
    throw DimensionError(fmt::format("point has {} merits, data has {} teams",
                                     point.beta.size(), t));
  }
  if (point.phi.has_value() != ModelHasTieParameter(model)) {
    throw DimensionError(fmt::format("model {} {} a tie parameter",
                                     ModelName(model),
                                     point.phi ? "has no" : "needs"));
  }
  if (point.log_gamma.has_value() != ModelHasHomeParameter(model)) {
    throw DimensionError(fmt::format("model {} {} a home parameter",
                                     ModelName(model),
                                     point.log_gamma ? "has no" : "needs"));
  }
}

void CheckPreconditions(ModelKind model, const ParameterPoint& point,
                        const PerturbedCounts& counts) {
  CheckPointShape(model, point, counts.size());
  if (ModelHasHomeParameter(model) && !counts.has_venues) {
    throw VenuelessDataError(fmt::format(
        "model {} needs venue-split counts", ModelName(model)));
  }
  if (ModelHasTieParameter(model) && !counts.HasTies()) {
    throw NoTiesError(fmt::format("model {} needs at least one tie",
                                  ModelName(model)));
  }
  if (model == ModelKind::kRaoKupper && !(*point.phi > 0.0)) {
    throw ThetaDomainError(fmt::format(
        "Rao-Kupper threshold theta = exp({}) must exceed 1", *point.phi));
  }
}

}  // namespace

double LogLikelihood(ModelKind model, const ParameterPoint& point,
                     const PerturbedCounts& counts) {
  CheckPreconditions(model, point, counts);
  return Evaluate(model, point, counts, nullptr);
}

double LogLikBradleyTerry(const ParameterPoint& point,
                          const PerturbedCounts& counts) {
  return LogLikelihood(ModelKind::kBradleyTerry, point, counts);
}

double LogLikRaoKupper(const ParameterPoint& point,
                       const PerturbedCounts& counts) {
  return LogLikelihood(ModelKind::kRaoKupper, point, counts);
}

double LogLikDavidson(const ParameterPoint& point,
                      const PerturbedCounts& counts) {
  return LogLikelihood(ModelKind::kDavidson, point, counts);
}

double LogLikHomeField(const ParameterPoint& point,
                       const PerturbedCounts& counts) {
  return LogLikelihood(ModelKind::kHomeField, point, counts);
}

double LogLikDavid(const ParameterPoint& point, const PerturbedCounts& counts) {
  return LogLikelihood(ModelKind::kDavid, point, counts);
}

ParameterGradient FullGradient(ModelKind model, const ParameterPoint& point,
                               const PerturbedCounts& counts) {
  CheckPreconditions(model, point, counts);
  ParameterGradient gradient;
  Evaluate(model, point, counts, &gradient);
  return gradient;
}

std::vector<double> Gradient(ModelKind model, const ParameterPoint& point,
                             const PerturbedCounts& counts) {
  const ParameterGradient full = FullGradient(model, point, counts);
  std::vector<double> out(full.beta.begin() + 1, full.beta.end());
  if (ModelHasTieParameter(model)) out.push_back(full.phi);
  if (ModelHasHomeParameter(model)) out.push_back(full.log_gamma);
  return out;
}

OutcomeProbabilities Probabilities(ModelKind model, const ParameterPoint& point,
                                   int i, int j, Venue venue) {
  const int t = static_cast<int>(point.beta.size());
  CheckPointShape(model, point, t);
  if (i < 0 || j < 0 || i >= t || j >= t || i == j) {
    throw DimensionError(fmt::format("invalid team pair ({}, {})", i, j));
  }
  const double bi = point.beta[i];
  const double bj = point.beta[j];
  const double home_i = venue == Venue::kFirstHome ? point.log_gamma.value_or(0)
                                                   : 0.0;
  const double home_j = venue == Venue::kSecondHome
                            ? point.log_gamma.value_or(0)
                            : 0.0;
  OutcomeProbabilities out;
  switch (model) {
    case ModelKind::kBradleyTerry:
      out.first_wins = Sigmoid(bi - bj);
      out.second_wins = Sigmoid(bj - bi);
      break;
    case ModelKind::kHomeField:
      out.first_wins = Sigmoid(home_i + bi - home_j - bj);
      out.second_wins = Sigmoid(home_j + bj - home_i - bi);
      break;
    case ModelKind::kRaoKupper: {
      const double phi = *point.phi;
      if (!(phi > 0.0)) {
        throw ThetaDomainError("Rao-Kupper threshold theta must exceed 1");
      }
      out.first_wins = Sigmoid(bi - phi - bj);
      out.second_wins = Sigmoid(bj - phi - bi);
      out.tie = std::exp(LogThetaSquaredMinusOne(phi) - Softplus(phi + bj - bi) -
                         Softplus(phi + bi - bj));
      break;
    }
    case ModelKind::kDavidson:
    case ModelKind::kDavid: {
      double p[3];
      Softmax3(home_i + bi, home_j + bj, *point.phi + 0.5 * (bi + bj), p);
      out.first_wins = p[0];
      out.second_wins = p[1];
      out.tie = p[2];
      break;
    }
  }
  return out;
}

int FreeDimension(ModelKind model, int num_teams) {
  return num_teams - 1 + (ModelHasTieParameter(model) ? 1 : 0) +
         (ModelHasHomeParameter(model) ? 1 : 0);
}

Objective::Objective(ModelKind model, PerturbedCounts counts,
                     ObjectiveOptions options)
    : model_(model), counts_(std::move(counts)), options_(options) {
  free_phi_ = ModelHasTieParameter(model_) && !options_.fixed_phi;
  free_log_gamma_ = ModelHasHomeParameter(model_) && !options_.fixed_log_gamma;
  dimension_ = counts_.size() - 1 + (free_phi_ ? 1 : 0) +
               (free_log_gamma_ ? 1 : 0);
}

ParameterPoint Objective::ToPoint(std::span<const double> x) const {
  const int t = counts_.size();
  ParameterPoint point;
  point.beta.assign(t, 0.0);
  for (int i = 1; i < t; ++i) point.beta[i] = x[i - 1];
  int k = t - 1;
  if (ModelHasTieParameter(model_)) {
    point.phi = free_phi_ ? x[k++] : *options_.fixed_phi;
  }
  if (ModelHasHomeParameter(model_)) {
    point.log_gamma = free_log_gamma_ ? x[k++] : *options_.fixed_log_gamma;
  }
  return point;
}

std::vector<double> Objective::FromPoint(const ParameterPoint& point) const {
  const int t = counts_.size();
  CheckPointShape(model_, point, t);
  std::vector<double> x;
  x.reserve(dimension_);
  for (int i = 1; i < t; ++i) x.push_back(point.beta[i] - point.beta[0]);
  if (free_phi_) x.push_back(*point.phi);
  if (free_log_gamma_) x.push_back(*point.log_gamma);
  return x;
}

double Objective::Value(std::span<const double> x) const {
  return Evaluate(model_, ToPoint(x), counts_, nullptr);
}

double Objective::ValueAndGradient(std::span<const double> x,
                                   std::vector<double>& gradient) const {
  ParameterGradient full;
  const double value = Evaluate(model_, ToPoint(x), counts_, &full);
  gradient.assign(full.beta.begin() + 1, full.beta.end());
  if (free_phi_) gradient.push_back(full.phi);
  if (free_log_gamma_) gradient.push_back(full.log_gamma);
  return value;
}

}  // namespace btrank
