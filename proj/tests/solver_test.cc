#include <cmath>

#include <gtest/gtest.h>

#include "btrank/connectivity.h"
#include "btrank/errors.h"
#include "btrank/likelihood.h"
#include "btrank/perturbation.h"
#include "btrank/solver.h"
#include "test_support.h"

namespace btrank {
namespace {

using testing::kAllModels;

ModelSpec Bt(double eps, Normalization n = Normalization::Reference(0)) {
  return {ModelKind::kBradleyTerry, PerturbationSpec::Improved(eps), n};
}

void ExpectPublished(double actual, double expected) {
  EXPECT_LE(std::abs(actual - expected), std::max(1e-3, 0.02 * std::abs(expected)))
      << "actual " << actual << " expected " << expected;
}

TEST(Fit, ExampleOneAcrossEpsilon) {
  // Published u2, u3, u4 per epsilon (u1 = 1).
  const std::vector<double> eps = {0.001, 0.01, 0.1, 0.5, 1, 2};
  const std::vector<std::vector<double>> u = {
      {0.500, 0.502, 0.524, 0.600, 0.667, 0.750},
      {5.0e-4, 0.005, 0.048, 0.200, 0.333, 0.500},
      {0.001, 0.010, 0.091, 0.333, 0.500, 0.667}};
  for (size_t k = 0; k < eps.size(); ++k) {
    const FitResult fit = Fit(Bt(eps[k]), testing::Example1());
    ASSERT_TRUE(fit.converged) << eps[k];
    EXPECT_DOUBLE_EQ(fit.merits[0], 1.0);
    for (int i = 0; i < 3; ++i) ExpectPublished(fit.merits[i + 1], u[i][k]);
    EXPECT_EQ(fit.epsilon, eps[k]);
  }
}

TEST(Fit, ExampleTwoAtEpsilonTwo) {
  const FitResult fit = Fit(Bt(2.0, Normalization::Reference(9)), testing::Example2());
  const std::vector<double> expected = {2.277, 1.945, 1.758, 1.614, 1.531,
                                        1.462, 1.354, 1.292, 1.142, 1.0};
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(fit.merits[i], expected[i], 1e-2);
}

TEST(Fit, ExampleThreeAtEpsilonTenth) {
  const FitResult fit = Fit(Bt(0.1), testing::Example3());
  const std::vector<double> expected = {1.0, 5.122, 0.298, 0.104, 0.017};
  for (int i = 0; i < 5; ++i) ExpectPublished(fit.merits[i], expected[i]);
}

TEST(Fit, ConnerGrantContrast) {
  ModelSpec spec = Bt(0.1);
  spec.perturbation = PerturbationSpec::ConnerGrant(0.1);
  FitResult fit = Fit(spec, testing::Example1());
  EXPECT_NEAR(fit.merits[1], 0.470, 1e-3);
  EXPECT_NEAR(fit.merits[2], 0.162, 1e-3);
  EXPECT_NEAR(fit.merits[3], 0.262, 1e-3);
  spec.perturbation = PerturbationSpec::ConnerGrant(0.5);
  fit = Fit(spec, testing::Example1());
  EXPECT_NEAR(fit.merits[1], 0.569, 1e-3);
  EXPECT_NEAR(fit.merits[2], 0.453, 1e-3);
  EXPECT_NEAR(fit.merits[3], 0.585, 1e-3);
}

TEST(CheckExistence, ConditionBFailure) {
  const Dataset d = testing::FromWins({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
  try {
    Fit(Bt(0.1), d);
    FAIL() << "expected ExistenceError";
  } catch (const ExistenceError& e) {
    EXPECT_EQ(e.witness().violated, Condition::kB);
    EXPECT_TRUE(WitnessHolds(d, e.witness()));
    EXPECT_NE(std::string(e.what()).find("q1 = {1, 2}"), std::string::npos);
  }
  // Conner-Grant pseudo-games connect everything.
  ModelSpec spec = Bt(0.1);
  spec.perturbation = PerturbationSpec::ConnerGrant(0.1);
  EXPECT_NO_THROW(Fit(spec, d));
}

TEST(CheckExistence, TieAndVenueRequirements) {
  const Dataset no_ties = testing::Example1();
  for (ModelKind m : {ModelKind::kRaoKupper, ModelKind::kDavidson}) {
    EXPECT_THROW(CheckExistence({m, PerturbationSpec::Improved(0.1), {}}, no_ties),
                 NoTiesError);
  }
  for (ModelKind m : {ModelKind::kHomeField, ModelKind::kDavid}) {
    EXPECT_THROW(CheckExistence({m, PerturbationSpec::Improved(0.1), {}}, no_ties),
                 VenuelessDataError);
  }
  CountMatrices c(2);
  c.a_home(0, 1) = 1;
  c.t_home(0, 1) = 1;
  const Dataset one_host({"1", "2"}, c);
  try {
    CheckExistence({ModelKind::kHomeField, PerturbationSpec::Improved(0.1), {}},
                   one_host);
    FAIL();
  } catch (const ExistenceError& e) {
    EXPECT_EQ(e.witness().violated, Condition::kC);
    EXPECT_TRUE(WitnessHolds(one_host, e.witness()));
  }
  EXPECT_THROW(
      CheckExistence({ModelKind::kHomeField, PerturbationSpec::Matrix(RealMatrix(2)), {}},
                     one_host),
      ConfigError);
}

TEST(CheckExistence, MatrixPrior) {
  RealMatrix prior(4);
  EXPECT_THROW(CheckExistence({ModelKind::kBradleyTerry, PerturbationSpec::Matrix(prior), {}},
                              testing::Example1()),
               ExistenceError);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) prior(i, j) = i == j ? 0.0 : 0.2;
  }
  EXPECT_NO_THROW(CheckExistence(
      {ModelKind::kBradleyTerry, PerturbationSpec::Matrix(prior), {}}, testing::Example1()));
  prior(0, 1) = -0.9;  // a_12 = 2 absorbs it
  EXPECT_NO_THROW(CheckExistence(
      {ModelKind::kBradleyTerry, PerturbationSpec::Matrix(prior), {}}, testing::Example1()));
  prior(0, 2) = -0.5;  // a_13 = 0: negative pseudo-count
  EXPECT_THROW(CheckExistence({ModelKind::kBradleyTerry, PerturbationSpec::Matrix(prior), {}},
                              testing::Example1()),
               ConfigError);
}

TEST(MmStep, NeverDecreasesObjective) {
  std::mt19937_64 rng(67);
  for (int rep = 0; rep < 30; ++rep) {
    const Dataset d = testing::RandomDataFor(rng, ModelKind::kBradleyTerry, 6);
    const PerturbedCounts c = Perturb(d, PerturbationSpec::Improved(0.05));
    std::vector<double> beta(6, 0.0);
    double value = LogLikBradleyTerry({beta}, c);
    for (int step = 0; step < 200; ++step) {
      beta = MmStep(c, beta);
      EXPECT_EQ(beta[0], 0.0);
      const double next = LogLikBradleyTerry({beta}, c);
      EXPECT_GE(next, value - 1e-12);
      value = next;
    }
  }
}

TEST(Fit, StationaryAtOptimumForEveryModel) {
  std::mt19937_64 rng(71);
  for (ModelKind model : kAllModels) {
    for (int rep = 0; rep < 10; ++rep) {
      const Dataset d = testing::RandomDataFor(rng, model, 5);
      const FitResult fit = Fit({model, PerturbationSpec::Improved(0.3), {}}, d);
      ASSERT_TRUE(fit.converged) << ModelName(model);
      EXPECT_LE(fit.gradient_sup_norm, 1e-8);
      ParameterPoint p{fit.beta};
      if (fit.theta) p.phi = std::log(*fit.theta);
      if (fit.gamma) p.log_gamma = std::log(*fit.gamma);
      EXPECT_LE(SupNorm(Gradient(model, p, Perturb(d, PerturbationSpec::Improved(0.3)))),
                1e-8);
      EXPECT_EQ(fit.theta.has_value(), ModelHasTieParameter(model));
      EXPECT_EQ(fit.gamma.has_value(), ModelHasHomeParameter(model));
      if (model == ModelKind::kRaoKupper) {
        EXPECT_GT(*fit.theta, 1.0);
      }
      for (size_t k = 1; k < fit.trace.size(); ++k) {
        EXPECT_GE(fit.trace[k], fit.trace[k - 1] - 1e-12 * std::abs(fit.trace[k]));
      }
    }
  }
}

TEST(Fit, DifferentStartsAgree) {
  const PerturbedCounts c = Perturb(testing::Example1(), PerturbationSpec::Improved(0.5));
  const FitResult a = FitPerturbed(ModelKind::kBradleyTerry, c, Normalization::Reference(0));
  FitOptions options;
  options.start = ParameterPoint{{0, 3, -2, 1}};
  const FitResult b =
      FitPerturbed(ModelKind::kBradleyTerry, c, Normalization::Reference(0), {}, options);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a.beta[i], b.beta[i], 1e-6);
}

TEST(Fit, RandomRestartsAgree) {
  std::mt19937_64 rng(73);
  SolverConfig config;
  config.restarts = 4;
  for (ModelKind model : kAllModels) {
    const Dataset d = testing::RandomDataFor(rng, model, 5);
    const FitResult fit = Fit({model, PerturbationSpec::Improved(0.2), {}}, d, config);
    ASSERT_TRUE(fit.restart_spread.has_value());
    EXPECT_LE(*fit.restart_spread, 1e-6) << ModelName(model);
  }
}

TEST(Fit, MatchesGridSearchOnThreeTeams) {
  const Dataset d = testing::FromWins({{0, 2, 1}, {1, 0, 3}, {0, 1, 0}});
  const PerturbedCounts c = Perturb(d, PerturbationSpec::Improved(0.1));
  const FitResult fit = Fit(Bt(0.1), d);
  auto value = [&](double x, double y) {
    return testing::DirectLogLikelihood(ModelKind::kBradleyTerry,
                                        {1.0, std::exp(x), std::exp(y)}, 1, 1, c);
  };
  // Grid on [-5, 5]^2 at step 1e-2, then step 1e-4 around the best cell.
  double best = -1e300, b1 = 0, b2 = 0;
  auto scan = [&](double x0, double y0, double half, double step) {
    const int n = static_cast<int>(std::round(2 * half / step));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double x = x0 - half + i * step, y = y0 - half + j * step;
        const double v = value(x, y);
        if (v > best) {
          best = v;
          b1 = x;
          b2 = y;
        }
      }
    }
  };
  scan(0, 0, 5, 1e-2);
  scan(b1, b2, 2e-2, 1e-4);
  EXPECT_NEAR(fit.beta[1], b1, 1e-3);
  EXPECT_NEAR(fit.beta[2], b2, 1e-3);
}

TEST(Fit, NormalizationsAreScalarMultiples) {
  std::mt19937_64 rng(79);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = testing::RandomDataFor(rng, ModelKind::kBradleyTerry, 6);
    const FitResult ref = Fit(Bt(0.4, Normalization::Reference(2)), d);
    const FitResult simplex = Fit(Bt(0.4, Normalization::Simplex()), d);
    double sum = 0.0;
    for (double u : simplex.merits) sum += u;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(ref.merits[2], 1.0);
    const double scale = ref.merits[0] / simplex.merits[0];
    EXPECT_GT(scale, 0.0);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(ref.merits[i], scale * simplex.merits[i], 1e-9 * scale);
    EXPECT_EQ(testing::ArgsortDescending(ref.merits),
              testing::ArgsortDescending(simplex.merits));
  }
}

TEST(Fit, UnitGammaSliceIsBradleyTerry) {
  std::mt19937_64 rng(83);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = testing::RandomDataFor(rng, ModelKind::kHomeField, 5);
    const PerturbedCounts c = Perturb(d, PerturbationSpec::Improved(0.3));
    FitOptions options;
    options.objective.fixed_log_gamma = 0.0;
    SolverConfig tight;
    tight.grad_tol = 1e-11;
    const FitResult home = FitPerturbed(ModelKind::kHomeField, c,
                                        Normalization::Reference(0), tight, options);
    PerturbedCounts summed = c;
    summed.has_venues = false;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) summed.wins(i, j) = c.wins_home(i, j) + c.wins_away(i, j);
    }
    const FitResult bt =
        FitPerturbed(ModelKind::kBradleyTerry, summed, Normalization::Reference(0), tight);
    ASSERT_TRUE(home.converged && bt.converged);
    EXPECT_EQ(home.gamma, 1.0);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(home.beta[i], bt.beta[i], 1e-8);
  }
}

TEST(Fit, SmallEpsilonKeepsMleOrder) {
  // The ranking of the perturbed fit converges to the MLE ranking as
  // epsilon -> 0 on strongly connected data.
  std::mt19937_64 rng(89);
  std::uniform_int_distribution<int> size(3, 8);
  for (int rep = 0; rep < 50; ++rep) {
    const Dataset d = testing::RandomStronglyConnected(rng, size(rng));
    const std::vector<double> mle = testing::ZermeloMle(d);
    const FitResult fit = Fit(Bt(1e-6), d);
    for (int i = 0; i < d.num_teams(); ++i) {
      for (int j = 0; j < d.num_teams(); ++j) {
        if (std::log(mle[i]) - std::log(mle[j]) > 1e-4) {
          EXPECT_GT(fit.beta[i], fit.beta[j]);
        }
      }
    }
  }
}

TEST(Fit, BudgetExhaustionIsReported) {
  SolverConfig config;
  config.max_iters = 2;
  const FitResult fit = Fit(Bt(0.001), testing::Example1(), config);
  EXPECT_FALSE(fit.converged);
  EXPECT_LE(fit.iterations, 2);
  try {
    RequireConverged(fit);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.result().iterations, fit.iterations);
    EXPECT_EQ(e.family(), ErrorFamily::kNonConvergence);
  }
}

TEST(Fit, RejectsBadConfiguration) {
  SolverConfig config;
  config.grad_tol = 0.0;
  EXPECT_THROW(Fit(Bt(0.1), testing::Example1(), config), ConfigError);
  EXPECT_THROW(Fit(Bt(0.1, Normalization::Reference(7)), testing::Example1()),
               ConfigError);
  EXPECT_THROW(Fit(Bt(-0.1), testing::Example1()), NonPositiveEpsilonError);
}

}  // namespace
}  // namespace btrank
