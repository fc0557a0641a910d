#include "btrank/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace btrank {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Dense inverse-Hessian approximation of the negated objective.
class InverseHessian {
 public:
  explicit InverseHessian(int n) : n_(n), h_(static_cast<size_t>(n) * n) {
    Reset(1.0);
  }

  void Reset(double scale) {
    std::fill(h_.begin(), h_.end(), 0.0);
    for (int i = 0; i < n_; ++i) at(i, i) = scale;
    identity_ = true;
  }
  bool identity() const { return identity_; }

  std::vector<double> Apply(std::span<const double> v) const {
    std::vector<double> out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n_; ++j) sum += at(i, j) * v[j];
      out[i] = sum;
    }
    return out;
  }

  // BFGS update with step s and gradient change y (of the negated
  // objective). Skipped when the curvature condition fails.
  void Update(std::span<const double> s, std::span<const double> y) {
    const double sy = Dot(s, y);
    if (!(sy > 1e-12 * std::sqrt(Dot(s, s) * Dot(y, y)))) return;
    if (identity_) Reset(sy / Dot(y, y));
    const double rho = 1.0 / sy;
    const std::vector<double> hy = Apply(y);
    const double yhy = Dot(y, hy);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        at(i, j) += -rho * (hy[i] * s[j] + s[i] * hy[j]) +
                    (rho * rho * yhy + rho) * s[i] * s[j];
      }
    }
    identity_ = false;
  }

 private:
  double& at(int i, int j) { return h_[static_cast<size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return h_[static_cast<size_t>(i) * n_ + j]; }

  int n_;
  std::vector<double> h_;
  bool identity_ = true;
};

// Solves (-H) d = g for symmetric negative definite H (row-major) by
// Cholesky; a growing ridge is added if -H is not numerically positive
// definite.
std::vector<double> NewtonDirection(std::vector<double> h,
                                    std::span<const double> g) {
  const int n = static_cast<int>(g.size());
  double diag = 0.0;
  for (int i = 0; i < n; ++i) diag = std::max(diag, std::abs(h[i * n + i]));
  for (double ridge = 0.0; ridge < 1e6 * std::max(diag, 1.0);
       ridge = ridge == 0.0 ? 1e-12 * std::max(diag, 1.0) : ridge * 100) {
    std::vector<double> l(static_cast<size_t>(n) * n, 0.0);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double sum = -h[i * n + j] + (i == j ? ridge : 0.0);
        for (int k = 0; k < j; ++k) sum -= l[i * n + k] * l[j * n + k];
        if (i == j) {
          if (!(sum > 0.0)) {
            ok = false;
            break;
          }
          l[i * n + i] = std::sqrt(sum);
        } else {
          l[i * n + j] = sum / l[j * n + j];
        }
      }
    }
    if (!ok) continue;
    std::vector<double> d(g.begin(), g.end());
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < i; ++k) d[i] -= l[i * n + k] * d[k];
      d[i] /= l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      for (int k = i + 1; k < n; ++k) d[i] -= l[k * n + i] * d[k];
      d[i] /= l[i * n + i];
    }
    return d;
  }
  return {g.begin(), g.end()};
}

// Hessian by central differences of the gradient, symmetrized.
std::vector<double> NumericHessian(const DifferentiableObjective& objective,
                                   std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> h(static_cast<size_t>(n) * n);
  std::vector<double> probe(x.begin(), x.end()), g_plus, g_minus;
  for (int j = 0; j < n; ++j) {
    const double step = 1e-5 * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + step;
    objective.ValueAndGradient(probe, g_plus);
    probe[j] = x[j] - step;
    objective.ValueAndGradient(probe, g_minus);
    probe[j] = x[j];
    for (int i = 0; i < n; ++i) h[i * n + j] = (g_plus[i] - g_minus[i]) / (2 * step);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double mean = 0.5 * (h[i * n + j] + h[j * n + i]);
      h[i * n + j] = h[j * n + i] = mean;
    }
  }
  return h;
}

}  // namespace

double SupNorm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

AscentResult MaximizeConcave(const DifferentiableObjective& objective,
                             std::vector<double> start,
                             const SolverConfig& config) {
  const int n = objective.dimension();
  AscentResult result;
  result.point = std::move(start);
  std::vector<double> gradient;
  double value = objective.ValueAndGradient(result.point, gradient);
  AscentTrace& trace = result.trace;
  trace.gradient_sup_norm = SupNorm(gradient);

  if (n == 0 || trace.gradient_sup_norm <= config.grad_tol) {
    result.value = value;
    trace.converged = true;
    trace.reason = StopReason::kGradient;
    return result;
  }

  InverseHessian inverse(n);
  int small_changes = 0;
  std::vector<double> candidate(n), candidate_gradient;
  while (trace.iterations < config.max_iters) {
    std::vector<double> direction = inverse.Apply(gradient);
    double slope = Dot(gradient, direction);
    if (!(slope > 0.0)) {
      inverse.Reset(1.0);
      direction = gradient;
      slope = Dot(gradient, direction);
    }

    bool accepted = false;
    double candidate_value = value;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double step = 1.0;
      for (int k = 0; k < kMaxHalvings; ++k, step *= 0.5) {
        for (int i = 0; i < n; ++i) {
          candidate[i] = result.point[i] + step * direction[i];
        }
        candidate_value = objective.Value(candidate);
        if (std::isfinite(candidate_value) &&
            candidate_value >= value + kArmijo * step * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted && !inverse.identity()) {
        // The quasi-Newton direction failed; retry along the gradient.
        inverse.Reset(1.0);
        direction = gradient;
        slope = Dot(gradient, direction);
      } else {
        break;
      }
    }
    if (!accepted) {
      trace.reason = StopReason::kLineSearch;
      break;
    }

    candidate_value = objective.ValueAndGradient(candidate, candidate_gradient);
    std::vector<double> s(n), y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = candidate[i] - result.point[i];
      y[i] = gradient[i] - candidate_gradient[i];
    }
    inverse.Update(s, y);

    const double change = std::abs(candidate_value - value) /
                          std::max(1.0, std::abs(value));
    result.point.swap(candidate);
    gradient.swap(candidate_gradient);
    value = candidate_value;
    ++trace.iterations;
    trace.values.push_back(value);
    trace.gradient_sup_norm = SupNorm(gradient);

    if (trace.gradient_sup_norm <= config.grad_tol) {
      trace.reason = StopReason::kGradient;
      break;
    }
    small_changes = change <= config.rel_ll_tol ? small_changes + 1 : 0;
    if (small_changes >= 2) {
      trace.reason = StopReason::kStalled;
      break;
    }
  }
  // Near an ill-conditioned optimum the objective stops resolving progress
  // before the gradient reaches grad_tol; finish with damped Newton steps,
  // accepting a step when the gradient shrinks and the value does not drop
  // beyond roundoff.
  for (int polish = 0; polish < 20 &&
                       trace.gradient_sup_norm > config.grad_tol &&
                       trace.iterations < config.max_iters &&
                       trace.reason != StopReason::kMaxIterations;
       ++polish) {
    const std::vector<double> direction =
        NewtonDirection(NumericHessian(objective, result.point), gradient);
    const double roundoff = 1e-12 * std::max(1.0, std::abs(value));
    bool accepted = false;
    double step = 1.0;
    for (int k = 0; k < kMaxHalvings && !accepted; ++k, step *= 0.5) {
      for (int i = 0; i < n; ++i) {
        candidate[i] = result.point[i] + step * direction[i];
      }
      const double candidate_value =
          objective.ValueAndGradient(candidate, candidate_gradient);
      if (std::isfinite(candidate_value) && candidate_value >= value - roundoff &&
          SupNorm(candidate_gradient) < trace.gradient_sup_norm) {
        accepted = true;
        result.point.swap(candidate);
        gradient.swap(candidate_gradient);
        value = candidate_value;
        ++trace.iterations;
        trace.values.push_back(value);
        trace.gradient_sup_norm = SupNorm(gradient);
      }
    }
    if (!accepted) break;
    if (trace.gradient_sup_norm <= config.grad_tol) {
      trace.reason = StopReason::kGradient;
    }
  }
  result.value = value;
  trace.converged = trace.gradient_sup_norm <= config.grad_tol;
  return result;
}

}  // namespace btrank
