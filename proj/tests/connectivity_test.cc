#include <gtest/gtest.h>

#include "btrank/connectivity.h"
#include "btrank/errors.h"
#include "test_support.h"

namespace btrank {
namespace {

using testing::ConditionHoldsByEnumeration;

Dataset TwoTeamsHosting(int hosted_by_first, int hosted_by_second) {
  CountMatrices c(2);
  c.a_home(0, 1) = hosted_by_first;
  c.a_home(1, 0) = hosted_by_second;
  return Dataset({"1", "2"}, c);
}

TEST(ConditionA, ExampleOneFailsWithSourceWitness) {
  const ConditionResult r = CheckConditionA(testing::Example1());
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.witness->q1, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.witness->q2, (std::vector<int>{2, 3}));
  EXPECT_EQ(r.witness->violated, Condition::kA);
  EXPECT_TRUE(WitnessHolds(testing::Example1(), *r.witness));
}

TEST(ConditionA, TwoCyclePasses) {
  EXPECT_TRUE(CheckConditionA(testing::FromWins({{0, 1}, {1, 0}})).passed());
}

TEST(ConditionA, ExampleTwoFails) {
  const ConditionResult r = CheckConditionA(testing::Example2());
  ASSERT_FALSE(r.passed());
  EXPECT_TRUE(WitnessHolds(testing::Example2(), *r.witness));
}

TEST(ConditionB, Examples) {
  EXPECT_TRUE(CheckConditionB(testing::Example1()).passed());
  EXPECT_TRUE(CheckConditionB(testing::Example3()).passed());
  const ConditionResult r =
      CheckConditionB(testing::FromWins({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}));
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.witness->q1, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.witness->q2, (std::vector<int>{2}));
}

TEST(ConditionC, TwoTeams) {
  EXPECT_TRUE(CheckConditionC(TwoTeamsHosting(1, 1)).passed());
  const ConditionResult r = CheckConditionC(TwoTeamsHosting(1, 0));
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.witness->q1, (std::vector<int>{1}));
  EXPECT_EQ(r.witness->q2, (std::vector<int>{0}));
  EXPECT_TRUE(WitnessHolds(TwoTeamsHosting(1, 0), *r.witness));
}

TEST(ConditionC, RefusesVenuelessData) {
  EXPECT_THROW(CheckConditionC(testing::Example1()), VenuelessDataError);
}

TEST(Conditions, AgreeWithEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_real_distribution<double> density(0.05, 0.5);
  int failures_seen = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const Dataset d = testing::RandomDataset(
        rng, {.teams = size(rng), .density = density(rng), .max_count = 1,
              .ties = rep % 2 == 0});
    for (Condition c : {Condition::kA, Condition::kB, Condition::kC}) {
      ConditionResult r = c == Condition::kA   ? CheckConditionA(d)
                          : c == Condition::kB ? CheckConditionB(d)
                                               : CheckConditionC(d);
      EXPECT_EQ(r.passed(), ConditionHoldsByEnumeration(d, c));
      if (!r.passed()) {
        ++failures_seen;
        EXPECT_TRUE(WitnessHolds(d, *r.witness));
        EXPECT_EQ(r.witness->q1.size() + r.witness->q2.size(),
                  static_cast<size_t>(d.num_teams()));
      }
    }
    // A => B and C => B.
    if (CheckConditionA(d).passed() || CheckConditionC(d).passed()) {
      EXPECT_TRUE(CheckConditionB(d).passed());
    }
  }
  EXPECT_GT(failures_seen, 50);
}

TEST(StrongComponents, SourcesFirst) {
  // 0 -> 1 -> 2 -> 1
  Adjacency g(3);
  g[0] = {1};
  g[1] = {2};
  g[2] = {1};
  const StrongComponents scc = FindStrongComponents(g);
  EXPECT_EQ(scc.count, 2);
  EXPECT_EQ(scc.component[1], scc.component[2]);
  EXPECT_LT(scc.component[0], scc.component[1]);
}

}  // namespace
}  // namespace btrank
