#include <gtest/gtest.h>

#include "btrank/errors.h"
#include "btrank/types.h"
#include "test_support.h"

namespace btrank {
namespace {

CountMatrices Empty(int t) { return CountMatrices(t); }

TEST(DeriveTotals, AllZeroCountsGiveZeroTotals) {
  const DerivedTotals totals = DeriveTotals(Empty(3));
  EXPECT_EQ(totals.wins, CountMatrix(3));
  EXPECT_EQ(totals.ties, CountMatrix(3));
  EXPECT_EQ(totals.games, CountMatrix(3));
  EXPECT_EQ(totals.hosted, CountMatrix(3));
}

TEST(DeriveTotals, HomeAndAwayWinsAddUp) {
  CountMatrices c = Empty(2);
  c.a_home(0, 1) = 2;
  c.a_away(1, 0) = 1;
  const DerivedTotals totals = DeriveTotals(c);
  EXPECT_EQ(totals.wins(0, 1), 2);
  EXPECT_EQ(totals.wins(1, 0), 1);
  EXPECT_EQ(totals.games(0, 1), 3);
  EXPECT_EQ(totals.games(1, 0), 3);
  // a_away(1,0): team 2 won at team 1's home.
  EXPECT_EQ(totals.hosted(0, 1), 3);
  EXPECT_EQ(totals.hosted(1, 0), 0);
}

TEST(DeriveTotals, TiesAreSymmetric) {
  CountMatrices c = Empty(2);
  c.t_home(0, 1) = 1;
  c.t_home(1, 0) = 1;
  const DerivedTotals totals = DeriveTotals(c);
  EXPECT_EQ(totals.ties(0, 1), 2);
  EXPECT_EQ(totals.ties(1, 0), 2);
  EXPECT_EQ(totals.games(0, 1), 2);
}

TEST(DeriveTotals, PermutationEquivariant) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset d = testing::RandomDataset(rng, {.teams = 5, .ties = true});
    const std::vector<int> perm = {3, 0, 4, 1, 2};
    CountMatrices p(5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        p.a_home(perm[i], perm[j]) = d.counts().a_home(i, j);
        p.a_away(perm[i], perm[j]) = d.counts().a_away(i, j);
        p.t_home(perm[i], perm[j]) = d.counts().t_home(i, j);
      }
    }
    const DerivedTotals a = d.totals();
    const DerivedTotals b = DeriveTotals(p);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        EXPECT_EQ(a.wins(i, j), b.wins(perm[i], perm[j]));
        EXPECT_EQ(a.games(i, j), b.games(perm[i], perm[j]));
        EXPECT_EQ(a.hosted(i, j), b.hosted(perm[i], perm[j]));
        EXPECT_EQ(a.ties(i, j), b.ties(perm[i], perm[j]));
      }
    }
    EXPECT_EQ(DeriveTotals(d.counts()), a);
  }
}

TEST(DeriveTotals, ConservesGames) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset d = testing::RandomDataset(rng, {.teams = 6, .ties = true});
    std::int64_t records = 0, from_totals = 0;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        records += d.counts().a_home(i, j) + d.counts().a_away(i, j) +
                   d.counts().t_home(i, j);
        from_totals += d.totals().wins(i, j);
        if (i < j) from_totals += d.totals().ties(i, j);
      }
    }
    EXPECT_EQ(records, from_totals);
    EXPECT_EQ(records, d.TotalGames());
  }
}

TEST(Dataset, RejectsInvalidCounts) {
  CountMatrices c = Empty(2);
  c.a_home(0, 0) = 1;
  EXPECT_THROW(Dataset({"A", "B"}, c), ShapeError);
  c = Empty(2);
  c.a_away(0, 1) = -1;
  EXPECT_THROW(Dataset({"A", "B"}, c), NegativeCountError);
  EXPECT_THROW(Dataset({"A"}, Empty(1)), ShapeError);
  EXPECT_THROW(Dataset({"A", "A"}, Empty(2)), ParseError);
  EXPECT_THROW(Dataset({"A", "B", "C"}, Empty(2)), ShapeError);
}

TEST(Dataset, ScoresAndLookup) {
  const Dataset d = testing::Example1();
  EXPECT_EQ(d.WinScores(), (std::vector<double>{3, 1, 1, 2}));
  EXPECT_EQ(d.IndexOf("3"), 2);
  EXPECT_FALSE(d.IndexOf("9").has_value());
  EXPECT_FALSE(d.HasTies());
}

TEST(PerturbationSpec, Validation) {
  EXPECT_NO_THROW(PerturbationSpec::Improved(0.1).Validate());
  EXPECT_THROW(PerturbationSpec::Improved(0.0).Validate(), NonPositiveEpsilonError);
  EXPECT_THROW(PerturbationSpec::ConnerGrant(-1).Validate(), NonPositiveEpsilonError);
  RealMatrix prior(2);
  prior(0, 1) = -1.0;
  EXPECT_THROW(PerturbationSpec::Matrix(prior).Validate(), ConfigError);
  prior(0, 1) = -0.5;
  EXPECT_NO_THROW(PerturbationSpec::Matrix(prior).Validate());
  prior(1, 1) = 0.5;
  EXPECT_THROW(PerturbationSpec::Matrix(prior).Validate(), ShapeError);
}

TEST(ModelNames, RoundTrip) {
  for (ModelKind m : {ModelKind::kBradleyTerry, ModelKind::kRaoKupper,
                      ModelKind::kDavidson, ModelKind::kHomeField, ModelKind::kDavid}) {
    EXPECT_EQ(ParseModelName(ModelName(m)), m);
  }
  EXPECT_FALSE(ParseModelName("elo").has_value());
}

TEST(Ranking, RankOfSharesGroupRank) {
  Ranking r;
  r.order = {2, 0, 1, 3};
  r.groups = {{2}, {0, 1}, {3}};
  EXPECT_EQ(r.RankOf(), (std::vector<int>{2, 2, 1, 4}));
}

}  // namespace
}  // namespace btrank
