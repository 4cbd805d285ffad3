#include <gtest/gtest.h>

#include <random>

#include "mapu/matching.hpp"
#include "mapu/random.hpp"
#include "test_oracles.hpp"
#include "test_util.hpp"

using mapu::CostMatrix;
using mapu::MatchingBackend;
using mapu::Rational;
using testutil::Q;

TEST(Hungarian, SingleEntry) {
  CostMatrix<std::int64_t> m(1, {5});
  auto r = mapu::min_cost_perfect_matching(m);
  EXPECT_EQ(r.total, 5);
  EXPECT_EQ(r.permutation, std::vector<std::size_t>{0});
  EXPECT_TRUE(mapu::verify_dual_certificate(m, r));
}

TEST(Hungarian, KnownThreeByThree) {
  CostMatrix<std::int64_t> m(3, {4, 1, 3, 2, 0, 5, 3, 2, 2});
  auto r = mapu::min_cost_perfect_matching(m);
  EXPECT_EQ(r.total, 5);
  EXPECT_TRUE(mapu::verify_dual_certificate(m, r));
}

TEST(Hungarian, RejectsEmptyOrRagged) {
  EXPECT_THROW(CostMatrix<int>(0), mapu::InputError);
  EXPECT_THROW(CostMatrix<int>(2, {1, 2, 3}), mapu::InputError);
}

TEST(Hungarian, NegativeAndRationalEntries) {
  CostMatrix<Rational> m(2, {Q("-1/2"), Q("3"), Q("0"), Q("-7/3")});
  auto r = mapu::min_cost_perfect_matching(m);
  EXPECT_EQ(r.total, Q("-17/6"));
  EXPECT_TRUE(mapu::verify_dual_certificate(m, r));
}

TEST(Hungarian, MatchesEnumerationWithCertificate) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 7;
    CostMatrix<std::int64_t> m(n);
    CostMatrix<Rational> q(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = static_cast<std::int64_t>(rng() % 21) - 5;
        q(i, j) = Rational(static_cast<long>(rng() % 30), static_cast<long>(1 + rng() % 4));
      }
    }
    auto r = mapu::min_cost_perfect_matching(m);
    EXPECT_EQ(r.total, oracle::matching_by_permutation(m));
    EXPECT_TRUE(mapu::verify_dual_certificate(m, r));
    auto rq = mapu::min_cost_perfect_matching(q);
    EXPECT_EQ(rq.total, oracle::matching_by_permutation(q));
    EXPECT_TRUE(mapu::verify_dual_certificate(q, rq));
  }
}

TEST(Certificate, DetectsWrongAnswer) {
  CostMatrix<std::int64_t> m(2, {1, 5, 5, 1});
  auto r = mapu::min_cost_perfect_matching(m);
  ASSERT_TRUE(mapu::verify_dual_certificate(m, r));
  auto bad = r;
  bad.permutation = {1, 0};
  bad.total = 10;
  EXPECT_FALSE(mapu::verify_dual_certificate(m, bad));
}

TEST(Lagrangian, ZeroPenaltyUpgradesEverythingUseful) {
  const auto inst = testutil::two_supplier();
  auto r = mapu::lagrangian_matching(inst, Rational(0));
  EXPECT_EQ(r.total, mapu::cost(inst, mapu::UpgradeSet::all(2)));
  EXPECT_EQ(r.upgrades, mapu::UpgradeSet({0, 1}));
}

TEST(Lagrangian, HugePenaltyUpgradesNothing) {
  const auto inst = testutil::three_supplier();
  auto r = mapu::lagrangian_matching(inst, Rational(1000));
  EXPECT_TRUE(r.upgrades.empty());
  EXPECT_EQ(r.total, Rational(9));
}

TEST(Lagrangian, RejectsNonSquareOrNegativePenalty) {
  auto inst = testutil::make({{"0", "1"}, {"0", "1"}}, {"1"}, 1);
  EXPECT_THROW(mapu::lagrangian_matching(inst, Rational(0)), mapu::InputError);
  EXPECT_THROW(mapu::lagrangian_matching(testutil::two_supplier(), Rational(-1)),
               mapu::InputError);
}

TEST(Lagrangian, BackendsAgreeWithEnumeration) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto inst = mapu::random_instance(rng, n, n, 0);
    const Rational p(static_cast<long>(rng() % 40), static_cast<long>(1 + rng() % 6));
    const Rational want = oracle::penalized_optimum(inst, p);
    for (auto backend : {MatchingBackend::kAuto, MatchingBackend::kInt64,
                         MatchingBackend::kInt128, MatchingBackend::kRational}) {
      auto r = mapu::lagrangian_matching(inst, p, backend);
      EXPECT_EQ(r.total, want);
      EXPECT_EQ(mapu::cost(inst, r.upgrades) + p * Rational(r.upgrades.size()), want);
    }
  }
}

TEST(Lagrangian, AutoFallsBackForHugeNumbers) {
  auto inst = testutil::make({{"1/99999999999999999989", "123456789012345678901234567"},
                              {"0", "1/7"}},
                             {"98765432109876543210", "1/3"}, 1);
  auto r = mapu::lagrangian_matching(inst, Q("1/1000000007"));
  EXPECT_EQ(r.backend_used, MatchingBackend::kRational);
  EXPECT_EQ(r.total, oracle::penalized_optimum(inst, Q("1/1000000007")));
  EXPECT_THROW(mapu::lagrangian_matching(inst, Q("1/1000000007"), MatchingBackend::kInt64),
               mapu::InputError);
}
