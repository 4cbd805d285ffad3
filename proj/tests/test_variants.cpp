#include <gtest/gtest.h>

#include <random>

#include "mapu/oracle.hpp"
#include "mapu/random.hpp"
#include "mapu/variants.hpp"
#include "test_util.hpp"

using mapu::EdgeMask;
using mapu::FractionalSolution;
using mapu::InfeasibleFractional;
using mapu::Rational;
using mapu::UpgradeSet;
using mapu::VariantConstraints;
using testutil::Q;

namespace {

const mapu::Fixture& fixture(const std::string& name) {
  static const auto all = mapu::builtin_fixtures();
  for (const auto& f : all) {
    if (f.name == name) return f;
  }
  throw std::runtime_error("no fixture " + name);
}

EdgeMask full_mask(std::size_t n) {
  EdgeMask m;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.allowed.insert({i, j});
  }
  return m;
}

}  // namespace

TEST(EvalFractional, IntegralSolutionMatchesEvaluate) {
  const auto inst = testutil::greedy_trap(2);
  const auto sol = mapu::solve(inst).solution;
  FractionalSolution fs;
  for (std::size_t j = 0; j < sol.assignment.size(); ++j) {
    fs.push_back({sol.assignment[j], j, sol.upgrades.contains(sol.assignment[j]), false,
                  Rational(1)});
  }
  EXPECT_EQ(mapu::eval_fractional(inst, {}, fs),
            mapu::evaluate(inst, sol.upgrades, sol.assignment));
}

TEST(EvalFractional, ConvexCombinationIsLinear) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 4;
    auto inst = mapu::random_instance(rng, n, n, 1 + rng() % (n - 1));
    const auto x = mapu::solve(inst).solution;
    const auto y = mapu::greedy(inst);
    const Rational lambda(static_cast<long>(1 + rng() % 4), 5);
    FractionalSolution fs;
    for (std::size_t j = 0; j < n; ++j) {
      fs.push_back({x.assignment[j], j, x.upgrades.contains(x.assignment[j]), false, lambda});
      fs.push_back({y.assignment[j], j, y.upgrades.contains(y.assignment[j]), false,
                    Rational(1) - lambda});
    }
    EXPECT_EQ(mapu::eval_fractional(inst, {}, fs),
              lambda * x.value + (Rational(1) - lambda) * y.value);
  }
}

TEST(EvalFractional, ReportsViolatedConstraint) {
  const auto& f = fixture("sec2");
  auto over = f.fractional;
  over[2].weight = Q("3/2");
  EXPECT_THROW(mapu::eval_fractional(f.instance, {}, over), InfeasibleFractional);

  auto unbalanced = f.fractional;
  unbalanced.pop_back();
  EXPECT_THROW(mapu::eval_fractional(f.instance, {}, unbalanced), InfeasibleFractional);

  auto too_red = f.fractional;
  for (auto& e : too_red) e.supplier_upgraded = true;
  try {
    mapu::eval_fractional(f.instance, {}, too_red);
    FAIL() << "budget violation not detected";
  } catch (const InfeasibleFractional& e) {
    EXPECT_NE(std::string(e.what()).find("budget"), std::string::npos);
  }

  const auto& nc = fixture("noncomplete");
  auto uses_missing = nc.fractional;
  uses_missing[0].customer = 1;
  uses_missing[2].supplier = 2;  // both now on the missing edge
  EXPECT_THROW(mapu::eval_fractional(nc.instance, nc.constraints, uses_missing),
               InfeasibleFractional);
}

TEST(BruteForceMasked, FullMaskIsThePlainProblem) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto inst = mapu::random_instance(rng, n, n, rng() % (n + 1));
    EXPECT_EQ(mapu::brute_force_masked(inst, full_mask(n), inst.k),
              mapu::brute_force(inst).value);
  }
}

TEST(BruteForceMasked, NoPerfectMatching) {
  auto inst = testutil::two_supplier();
  EdgeMask m;
  m.allowed = {{0, 0}, {1, 0}};
  EXPECT_THROW(mapu::brute_force_masked(inst, m, 1), mapu::InputError);
}

TEST(BruteForcePartition, SingleGroupIsThePlainProblem) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto inst = mapu::random_instance(rng, n, rng() % (n + 1), rng() % (n + 1));
    mapu::PartitionBudget pb{{{UpgradeSet::all(n), inst.k}}};
    EXPECT_EQ(mapu::brute_force_partition(inst, pb), mapu::brute_force(inst).value);
  }
}

TEST(BruteForcePartition, GroupsMustPartition) {
  auto inst = testutil::three_supplier();
  mapu::PartitionBudget pb{{{UpgradeSet{0, 1}, 1}}};
  EXPECT_THROW(mapu::brute_force_partition(inst, pb), mapu::InputError);
}

TEST(BruteForceDual, ZeroBudgetIsCostOfEmptySet) {
  const auto& f = fixture("dual");
  auto spec = *f.constraints.dual;
  spec.k = 0;
  EXPECT_EQ(mapu::brute_force_dual(f.instance, spec), mapu::cost(f.instance, {}));
}

TEST(BruteForceDual, UselessCustomerUpgradesGiveThePlainProblem) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const auto inst = mapu::random_instance(rng, n, n, rng() % (n + 1));
    mapu::DualUpgradeSpec spec;
    for (const auto& c : inst.customers) spec.upgraded_demands.push_back(c.demand);
    spec.k = inst.k;
    EXPECT_EQ(mapu::brute_force_dual(inst, spec), mapu::brute_force(inst).value);
  }
}

TEST(DualSpec, RejectsLargerUpgradedDemand) {
  const auto& f = fixture("dual");
  auto spec = *f.constraints.dual;
  spec.upgraded_demands[0] = Rational(10);
  EXPECT_THROW(mapu::brute_force_dual(f.instance, spec), mapu::InputError);
}

TEST(Fixtures, PrintedValues) {
  const auto& nc = fixture("noncomplete");
  EXPECT_EQ(mapu::brute_force_masked(nc.instance, *nc.constraints.mask, 1), Rational(5));
  EXPECT_EQ(mapu::eval_fractional(nc.instance, nc.constraints, nc.fractional), Q("9/2"));

  const auto& part = fixture("partition");
  EXPECT_EQ(mapu::brute_force_partition(part.instance, *part.constraints.partition),
            Rational(23));
  EXPECT_EQ(mapu::eval_fractional(part.instance, part.constraints, part.fractional),
            Q("22.8"));
  EXPECT_EQ(mapu::cost(part.instance, {0, 2}), Q("24.6"));
  EXPECT_EQ(mapu::cost(part.instance, {0, 3}), Q("23.6"));
  EXPECT_EQ(mapu::cost(part.instance, {1, 2}), Rational(23));
  EXPECT_EQ(mapu::cost(part.instance, {1, 3}), Rational(23));

  const auto& dual = fixture("dual");
  EXPECT_EQ(mapu::brute_force_dual(dual.instance, *dual.constraints.dual), Rational(113));
  EXPECT_EQ(mapu::eval_fractional(dual.instance, dual.constraints, dual.fractional),
            Rational(112));

  EXPECT_EQ(mapu::eval_fractional(fixture("sec2").instance, {}, fixture("sec2").fractional),
            Rational(3));
  EXPECT_EQ(mapu::eval_fractional(fixture("sec32").instance, {}, fixture("sec32").fractional),
            Rational(6));
}

TEST(Fixtures, EveryChecklistPasses) {
  for (const auto& f : mapu::builtin_fixtures()) {
    const auto report = mapu::verify_fixture(f);
    for (const auto& c : report.checks) {
      EXPECT_TRUE(c.passed) << f.name << ": " << c.label << " expected " << c.expected
                            << " got " << c.got;
    }
  }
}

TEST(Fixtures, CorruptedDemandIsNamed) {
  auto f = fixture("partition");
  f.instance.customers[0].demand = Rational(5);
  const auto report = mapu::verify_fixture(f);
  EXPECT_FALSE(report.passed());
  bool integral_failed = false;
  for (const auto& c : report.checks) {
    if (c.label == "integral optimum") integral_failed = !c.passed;
  }
  EXPECT_TRUE(integral_failed);
}
