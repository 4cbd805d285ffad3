#include <gtest/gtest.h>

#include <random>

#include "mapu/oracle.hpp"
#include "mapu/random.hpp"
#include "mapu/solver.hpp"
#include "test_oracles.hpp"
#include "test_util.hpp"

using mapu::Rational;
using mapu::UpgradeSet;

TEST(BruteForce, SmallExamples) {
  EXPECT_EQ(mapu::brute_force(testutil::two_supplier()).value, Rational(3));
  EXPECT_EQ(mapu::brute_force(testutil::three_supplier()).value, Rational(6));
  auto r = mapu::brute_force(testutil::greedy_trap(2));
  EXPECT_EQ(r.value, Rational(11));
  EXPECT_EQ(r.upgrades, UpgradeSet({1, 2}));
}

TEST(BruteForce, CapIsEnforced) {
  std::mt19937_64 rng(1);
  const auto inst = mapu::random_instance(rng, 5, 5, 2);
  EXPECT_THROW(mapu::brute_force(inst, 4), mapu::CapExceeded);
  try {
    mapu::brute_force(inst, 4);
  } catch (const mapu::CapExceeded& e) {
    EXPECT_EQ(e.size(), 5u);
    EXPECT_EQ(e.cap(), 4u);
  }
  EXPECT_THROW(mapu::h_profile(inst, 3), mapu::CapExceeded);
}

TEST(BruteForce, AgreesWithPermutationEnumeration) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto inst = mapu::random_instance(rng, n, rng() % (n + 1), rng() % (n + 1));
    EXPECT_EQ(mapu::brute_force(inst).value, oracle::optimum(inst));
  }
}

TEST(HProfile, GreedyTrapValues) {
  const auto h = mapu::h_profile(testutil::greedy_trap(2));
  ASSERT_EQ(h.values.size(), 4u);
  EXPECT_EQ(h.values[0], Rational(29));
  EXPECT_EQ(h.values[1], Rational(19));
  EXPECT_EQ(h.values[2], Rational(11));
  EXPECT_EQ(h.values[3], Rational(5));
  EXPECT_TRUE(h.non_increasing());
  EXPECT_TRUE(h.convex());
}

TEST(HProfile, ConstantWhenUpgradesAreUseless) {
  auto inst = testutil::make({{"2", "2"}, {"3", "3"}}, {"1", "4"}, 1);
  const auto h = mapu::h_profile(inst);
  EXPECT_EQ(h.values[0], h.values[1]);
  EXPECT_EQ(h.values[1], h.values[2]);
}

TEST(HProfile, DetectsNonConvexData) {
  mapu::HProfile h{{Rational(10), Rational(9), Rational(5)}};
  EXPECT_TRUE(h.non_increasing());
  EXPECT_FALSE(h.convex());
  mapu::HProfile up{{Rational(1), Rational(2)}};
  EXPECT_FALSE(up.non_increasing());
}

TEST(HProfile, RandomProfilesAreConvex) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 7;
    const auto h = mapu::h_profile(mapu::random_instance(rng, n, rng() % (n + 1), 0));
    EXPECT_TRUE(h.non_increasing());
    EXPECT_TRUE(h.convex());
  }
}

TEST(Greedy, FallsIntoTheTrap) {
  const auto one = mapu::greedy(testutil::greedy_trap(1));
  EXPECT_EQ(one.upgrades, UpgradeSet({0}));
  EXPECT_EQ(one.value, Rational(19));
  const auto two = mapu::greedy(testutil::greedy_trap(2));
  EXPECT_EQ(two.value, Rational(12));
  EXPECT_TRUE(two.upgrades.contains(0));
  EXPECT_GT(two.value, mapu::brute_force(testutil::greedy_trap(2)).value);
  EXPECT_EQ(mapu::greedy(testutil::greedy_trap(0)).value, Rational(29));
}

TEST(Greedy, NeverBeatsTheOptimum) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto inst = mapu::random_instance(rng, n, rng() % (n + 1), rng() % (n + 1));
    EXPECT_GE(mapu::greedy(inst).value, mapu::brute_force(inst).value);
  }
}

TEST(Supermodular, HoldsOnExamplesExhaustively) {
  for (const auto& inst : {testutil::two_supplier(), testutil::three_supplier(),
                           testutil::greedy_trap(2)}) {
    const auto r = mapu::check_supermodular(inst, 0);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.exhaustive);
  }
  // |I| = 2: only A = {} with {s, t} = {1, 2}
  EXPECT_EQ(mapu::check_supermodular(testutil::two_supplier(), 0).triples_checked, 1u);
}

TEST(Supermodular, SampledAboveTheExhaustiveLimit) {
  std::mt19937_64 rng(12);
  const auto inst = mapu::random_instance(rng, 9, 7, 0);
  const auto r = mapu::check_supermodular(inst, 300, 5);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_EQ(r.triples_checked, 300u);
  EXPECT_TRUE(r.holds);
}
