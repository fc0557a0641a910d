#ifndef BTRANK_OPTIMIZER_H_
#define BTRANK_OPTIMIZER_H_

#include <span>
#include <vector>

namespace btrank {

// A smooth function to be maximized. Value() returns -infinity (or NaN)
// outside the function's domain; the line search treats that as a failed
// step.
class DifferentiableObjective {
 public:
  virtual ~DifferentiableObjective() = default;
  virtual int dimension() const = 0;
  virtual double Value(std::span<const double> x) const = 0;
  // Returns the value and writes the gradient into `gradient`.
  virtual double ValueAndGradient(std::span<const double> x,
                                  std::vector<double>& gradient) const = 0;
};

struct SolverConfig {
  double grad_tol = 1e-8;     // sup-norm of the gradient
  double rel_ll_tol = 1e-10;  // relative objective change, stall detector
  int max_iters = 10000;
  int restarts = 0;
  unsigned long long seed = 0;
};

enum class StopReason {
  kGradient,       // gradient sup-norm <= grad_tol
  kStalled,        // relative change <= rel_ll_tol on two successive steps
  kLineSearch,     // no ascent step could be found
  kMaxIterations,
};

struct AscentTrace {
  std::vector<double> values;  // objective after each accepted step
  int iterations = 0;
  bool converged = false;  // true iff gradient_sup_norm <= grad_tol
  double gradient_sup_norm = 0.0;
  StopReason reason = StopReason::kMaxIterations;
};

struct AscentResult {
  std::vector<double> point;
  double value = 0.0;
  AscentTrace trace;
};

// Maximizes a concave objective from `start` by quasi-Newton (BFGS) ascent
// with Armijo backtracking: initial step 1, halving. Steps that leave the
// domain are rejected by the backtracking, so an interior start stays
// interior. Objective values are non-decreasing across accepted steps.
AscentResult MaximizeConcave(const DifferentiableObjective& objective,
                             std::vector<double> start,
                             const SolverConfig& config);

double SupNorm(std::span<const double> v);

}  // namespace btrank

#endif  // BTRANK_OPTIMIZER_H_
