#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "btrank/optimizer.h"

namespace btrank {
namespace {

class Quadratic : public DifferentiableObjective {
 public:
  explicit Quadratic(int n) : n_(n) {}
  int dimension() const override { return n_; }
  double Value(std::span<const double> x) const override {
    double v = 0.0;
    for (double xi : x) v -= xi * xi;
    return v;
  }
  double ValueAndGradient(std::span<const double> x,
                          std::vector<double>& g) const override {
    g.resize(n_);
    for (int i = 0; i < n_; ++i) g[i] = -2 * x[i];
    return Value(x);
  }

 private:
  int n_;
};

// -(x - 3)^2 restricted to x > 1: outside the domain the value is -inf.
class Restricted : public DifferentiableObjective {
 public:
  int dimension() const override { return 1; }
  double Value(std::span<const double> x) const override {
    if (x[0] <= 1.0) return -std::numeric_limits<double>::infinity();
    return -(x[0] - 3) * (x[0] - 3) - 1.0 / (x[0] - 1);
  }
  double ValueAndGradient(std::span<const double> x,
                          std::vector<double>& g) const override {
    g = {-2 * (x[0] - 3) + 1.0 / ((x[0] - 1) * (x[0] - 1))};
    return Value(x);
  }
};

TEST(MaximizeConcave, QuadraticFromOnes) {
  const AscentResult r = MaximizeConcave(Quadratic(4), {1, 1, 1, 1}, {});
  EXPECT_TRUE(r.trace.converged);
  EXPECT_EQ(r.trace.reason, StopReason::kGradient);
  for (double x : r.point) EXPECT_NEAR(x, 0.0, 1e-8);
  EXPECT_LE(r.trace.gradient_sup_norm, 1e-8);
}

TEST(MaximizeConcave, ValuesNeverDecrease) {
  const AscentResult r = MaximizeConcave(Restricted(), {1.01}, {});
  EXPECT_TRUE(r.trace.converged);
  for (size_t k = 1; k < r.trace.values.size(); ++k) {
    EXPECT_GE(r.trace.values[k], r.trace.values[k - 1]);
  }
  EXPECT_GT(r.point[0], 1.0);
}

TEST(MaximizeConcave, StaysInsideDomain) {
  // The first full step from 1.5 overshoots below 1 for a naive ascent.
  const AscentResult r = MaximizeConcave(Restricted(), {1.5}, {});
  EXPECT_TRUE(r.trace.converged);
  EXPECT_GT(r.point[0], 1.0);
}

TEST(MaximizeConcave, IterationBudget) {
  SolverConfig config;
  config.max_iters = 1;
  const AscentResult r = MaximizeConcave(Restricted(), {1.01}, config);
  EXPECT_FALSE(r.trace.converged);
  EXPECT_EQ(r.trace.reason, StopReason::kMaxIterations);
  EXPECT_EQ(r.trace.iterations, 1);
}

TEST(MaximizeConcave, AlreadyOptimal) {
  const AscentResult r = MaximizeConcave(Quadratic(2), {0, 0}, {});
  EXPECT_TRUE(r.trace.converged);
  EXPECT_EQ(r.trace.iterations, 0);
}

TEST(SupNorm, Basic) {
  EXPECT_EQ(SupNorm(std::vector<double>{1, -3, 2}), 3.0);
  EXPECT_EQ(SupNorm(std::vector<double>{}), 0.0);
}

}  // namespace
}  // namespace btrank
