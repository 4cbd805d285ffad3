#pragma once

// Generalizations whose LP relaxation loses integral optima: a non-complete
// supplier/customer graph, per-group upgrade budgets and upgradable customer
// demands. Only exhaustive optima and exact evaluation of fractional
// solutions are provided, plus the bundled counterexample fixtures.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/oracle.hpp"
#include "mapu/rational.hpp"
#include "mapu/solver.hpp"

namespace mapu {

// Thrown by eval_fractional when a fractional solution violates a constraint.
class InfeasibleFractional : public InputError {
 public:
  using InputError::InputError;
};

struct EdgeMask {
  std::set<std::pair<std::size_t, std::size_t>> allowed;  // (supplier, customer)

  bool allows(std::size_t supplier, std::size_t customer) const {
    return allowed.contains({supplier, customer});
  }
};

struct BudgetGroup {
  UpgradeSet members;
  std::size_t budget = 0;
};

struct PartitionBudget {
  std::vector<BudgetGroup> groups;
};

struct DualUpgradeSpec {
  std::vector<Rational> upgraded_demands;  // d'_j per customer index
  std::size_t k = 0;                       // budget over suppliers + customers
};

struct VariantConstraints {
  std::optional<EdgeMask> mask;
  std::optional<PartitionBudget> partition;
  std::optional<DualUpgradeSpec> dual;

  bool any() const { return mask || partition || dual; }
};

struct FractionalEntry {
  std::size_t supplier = 0;
  std::size_t customer = 0;
  bool supplier_upgraded = false;  // red edge
  bool customer_upgraded = false;  // only meaningful with a DualUpgradeSpec
  Rational weight;
};

using FractionalSolution = std::vector<FractionalEntry>;

inline void validate_constraints(const Instance& instance,
                                 const VariantConstraints& constraints) {
  const std::size_t n = instance.suppliers.size();
  const std::size_t m = instance.customers.size();
  if (constraints.mask) {
    if (constraints.mask->allowed.empty()) {
      throw InputError("edge mask is empty");
    }
    for (auto [i, j] : constraints.mask->allowed) {
      if (i >= n || j >= m) throw InputError("edge mask references unknown id");
    }
  }
  if (constraints.partition) {
    std::vector<int> seen(n, 0);
    for (const BudgetGroup& g : constraints.partition->groups) {
      check_upgrade_set(instance, g.members);
      for (std::size_t i : g.members) ++seen[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i] != 1) {
        throw InputError("budget groups do not partition the suppliers ('" +
                         instance.suppliers[i].id + "')");
      }
    }
  }
  if (constraints.dual) {
    const auto& d = constraints.dual->upgraded_demands;
    if (d.size() != m) {
      throw InputError("customer upgrades must cover every customer");
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (d[j].sign() < 0 || d[j] > instance.customers[j].demand) {
        throw InputError("customer '" + instance.customers[j].id +
                         "': need 0 <= upgraded demand <= demand");
      }
    }
  }
}

// Exact LP objective of a fractional solution after checking every
// constraint of the (variant) relaxation.
inline Rational eval_fractional(const Instance& instance,
                                const VariantConstraints& constraints,
                                const FractionalSolution& fs) {
  validate(instance);
  validate_constraints(instance, constraints);
  const std::size_t n = instance.suppliers.size();
  const std::size_t m = instance.customers.size();
  if (n != m) {
    throw InfeasibleFractional("fractional solutions need |I| = |J|");
  }
  std::vector<Rational> by_supplier(n), by_customer(m), red_by_supplier(n);
  Rational customer_upgrade_weight;
  Rational value;
  for (const FractionalEntry& e : fs) {
    if (e.supplier >= n || e.customer >= m) {
      throw InfeasibleFractional("fractional entry references unknown id");
    }
    if (e.weight.sign() < 0 || e.weight > Rational(1)) {
      throw InfeasibleFractional("weight " + e.weight.str() +
                                 " outside [0, 1]");
    }
    if (constraints.mask && !constraints.mask->allows(e.supplier, e.customer)) {
      throw InfeasibleFractional("edge (" + instance.suppliers[e.supplier].id +
                                 ", " + instance.customers[e.customer].id +
                                 ") is not in the edge mask");
    }
    if (e.customer_upgraded && !constraints.dual) {
      throw InfeasibleFractional(
          "customer upgrade used without customer upgrade data");
    }
    by_supplier[e.supplier] += e.weight;
    by_customer[e.customer] += e.weight;
    if (e.supplier_upgraded) red_by_supplier[e.supplier] += e.weight;
    if (e.customer_upgraded) customer_upgrade_weight += e.weight;

    const Supplier& s = instance.suppliers[e.supplier];
    const Rational& unit = e.supplier_upgraded ? s.upgraded_cost : s.base_cost;
    const Rational& demand =
        e.customer_upgraded
            ? constraints.dual->upgraded_demands[e.customer]
            : instance.customers[e.customer].demand;
    value += unit * demand * e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (by_supplier[i] != Rational(1)) {
      throw InfeasibleFractional("supplier '" + instance.suppliers[i].id +
                                 "' has total weight " + by_supplier[i].str());
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (by_customer[j] != Rational(1)) {
      throw InfeasibleFractional("customer '" + instance.customers[j].id +
                                 "' has total weight " + by_customer[j].str());
    }
  }
  const Rational red_total =
      std::accumulate(red_by_supplier.begin(), red_by_supplier.end(), Rational(0));
  if (constraints.partition) {
    for (std::size_t g = 0; g < constraints.partition->groups.size(); ++g) {
      const BudgetGroup& group = constraints.partition->groups[g];
      Rational used;
      for (std::size_t i : group.members) used += red_by_supplier[i];
      if (used > Rational(group.budget)) {
        throw InfeasibleFractional("group " + std::to_string(g) +
                                   " upgrades " + used.str() + " > budget " +
                                   std::to_string(group.budget));
      }
    }
  } else {
    const std::size_t k = constraints.dual ? constraints.dual->k : instance.k;
    const Rational used = red_total + customer_upgrade_weight;
    if (used > Rational(k)) {
      throw InfeasibleFractional("upgrade weight " + used.str() +
                                 " exceeds budget " + std::to_string(k));
    }
  }
  return value;
}

inline constexpr std::size_t kMaskedCap = 9;

// Minimum over mask-respecting perfect matchings and |X| <= k.
inline Rational brute_force_masked(const Instance& input, const EdgeMask& mask,
                                   std::size_t k) {
  validate(input);
  const std::size_t original_customers = input.customers.size();
  const Instance instance = normalize(input);
  const std::size_t n = instance.suppliers.size();
  detail::check_cap("brute_force_masked", n, kMaskedCap);
  validate_constraints(input, VariantConstraints{mask, {}, {}});

  std::vector<std::size_t> supplier_of(n);  // customer -> supplier
  std::iota(supplier_of.begin(), supplier_of.end(), std::size_t{0});
  std::optional<Rational> best;
  do {
    bool feasible = true;
    for (std::size_t j = 0; j < original_customers && feasible; ++j) {
      feasible = mask.allows(supplier_of[j], j);
    }
    if (!feasible) continue;
    Rational base;
    std::vector<Rational> savings;
    for (std::size_t j = 0; j < n; ++j) {
      const Supplier& s = instance.suppliers[supplier_of[j]];
      const Rational& d = instance.customers[j].demand;
      base += s.base_cost * d;
      savings.push_back((s.base_cost - s.upgraded_cost) * d);
    }
    std::sort(savings.begin(), savings.end(), std::greater<>());
    for (std::size_t r = 0; r < std::min(k, savings.size()); ++r) {
      base -= savings[r];
    }
    if (!best || base < *best) best = std::move(base);
  } while (std::next_permutation(supplier_of.begin(), supplier_of.end()));
  if (!best) throw InputError("edge mask admits no perfect matching");
  return *best;
}

inline constexpr std::size_t kSubsetCap = 20;

// Minimum of cost(X) over X within every per-group budget.
inline Rational brute_force_partition(const Instance& instance,
                                      const PartitionBudget& pb) {
  validate(instance);
  validate_constraints(instance, VariantConstraints{{}, pb, {}});
  const std::size_t n = instance.suppliers.size();
  detail::check_cap("brute_force_partition", n, kSubsetCap);
  std::vector<std::size_t> group_of(n);
  for (std::size_t g = 0; g < pb.groups.size(); ++g) {
    for (std::size_t i : pb.groups[g].members) group_of[i] = g;
  }
  std::optional<Rational> best;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    std::vector<std::size_t> used(pb.groups.size(), 0);
    std::vector<bool> mask(n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if ((bits >> i) & 1U) {
        mask[i] = true;
        ok = ++used[group_of[i]] <= pb.groups[group_of[i]].budget;
      }
    }
    if (!ok) continue;
    Rational c = cost(instance, UpgradeSet::from_mask(mask));
    if (!best || c < *best) best = std::move(c);
  }
  return *best;
}

// Cost of the best assignment when suppliers `s` and customers `t` are
// upgraded. Sorting both sides still yields the optimum for products.
inline Rational dual_cost(const Instance& instance, const DualUpgradeSpec& spec,
                          const UpgradeSet& s,
                          const std::vector<std::size_t>& t) {
  std::vector<Rational> costs = effective_costs(instance, s);
  std::vector<Rational> demands;
  for (const Customer& c : instance.customers) demands.push_back(c.demand);
  for (std::size_t j : t) {
    if (j >= demands.size()) throw InputError("unknown customer index");
    demands[j] = spec.upgraded_demands[j];
  }
  std::sort(costs.begin(), costs.end());
  std::sort(demands.begin(), demands.end(), std::greater<>());
  Rational total;
  for (std::size_t j = 0; j < demands.size(); ++j) total += costs[j] * demands[j];
  return total;
}

// Minimum over supplier subsets S and customer subsets T with
// |S| + |T| <= spec.k.
inline Rational brute_force_dual(const Instance& instance,
                                 const DualUpgradeSpec& spec) {
  validate(instance);
  validate_constraints(instance, VariantConstraints{{}, {}, spec});
  const std::size_t n = instance.suppliers.size();
  const std::size_t m = instance.customers.size();
  detail::check_cap("brute_force_dual", n + m, kSubsetCap);
  std::optional<Rational> best;
  for (std::uint64_t sb = 0; sb < (std::uint64_t{1} << n); ++sb) {
    std::vector<bool> smask(n);
    std::size_t ssize = 0;
    for (std::size_t i = 0; i < n; ++i) {
      smask[i] = (sb >> i) & 1U;
      ssize += smask[i];
    }
    if (ssize > spec.k) continue;
    const UpgradeSet s = UpgradeSet::from_mask(smask);
    for (std::uint64_t tb = 0; tb < (std::uint64_t{1} << m); ++tb) {
      std::vector<std::size_t> t;
      for (std::size_t j = 0; j < m; ++j) {
        if ((tb >> j) & 1U) t.push_back(j);
      }
      if (ssize + t.size() > spec.k) continue;
      Rational c = dual_cost(instance, spec, s, t);
      if (!best || c < *best) best = std::move(c);
    }
  }
  return *best;
}

// --- Bundled fixtures -------------------------------------------------------

struct TableRow {
  UpgradeSet suppliers;
  std::vector<std::size_t> customers;  // upgraded customers (dual variant)
  Rational value;
};

struct BudgetAnchor {
  std::size_t k = 0;
  Rational value;
};

struct Fixture {
  std::string name;
  Instance instance;
  VariantConstraints constraints;
  FractionalSolution fractional;
  Rational expected_integral;
  Rational expected_fractional;
  std::vector<TableRow> table;       // forced upgrade choices and their cost
  std::vector<BudgetAnchor> anchors; // optimum at other budgets
};

// Optimum of the fixture's own problem (variant-aware).
inline Rational integral_optimum(const Fixture& f) {
  const VariantConstraints& c = f.constraints;
  if (c.mask) return brute_force_masked(f.instance, *c.mask, f.instance.k);
  if (c.partition) return brute_force_partition(f.instance, *c.partition);
  if (c.dual) return brute_force_dual(f.instance, *c.dual);
  return solve(f.instance).solution.value;
}

inline Rational table_row_value(const Fixture& f, const TableRow& row) {
  if (f.constraints.dual) {
    return dual_cost(f.instance, *f.constraints.dual, row.suppliers,
                     row.customers);
  }
  if (!row.customers.empty()) {
    throw InputError("table row upgrades customers without customer data");
  }
  return cost(f.instance, row.suppliers);
}

inline Rational anchor_optimum(const Fixture& f, std::size_t k) {
  if (f.constraints.dual) {
    DualUpgradeSpec spec = *f.constraints.dual;
    spec.k = k;
    return brute_force_dual(f.instance, spec);
  }
  if (f.constraints.any()) {
    throw InputError("budget anchors are only defined for plain and dual data");
  }
  Instance copy = f.instance;
  copy.k = k;
  return solve(copy).solution.value;
}

struct FixtureCheck {
  std::string label;
  std::string expected;
  std::string got;
  bool passed = false;
};

struct FixtureReport {
  std::string name;
  std::vector<FixtureCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const FixtureCheck& c) { return c.passed; });
  }
};

inline std::string describe_row(const Fixture& f, const TableRow& row) {
  std::string s = "suppliers {";
  bool first = true;
  for (std::size_t i : row.suppliers) {
    s += (first ? "" : ",") + f.instance.suppliers[i].id;
    first = false;
  }
  s += "} customers {";
  first = true;
  for (std::size_t j : row.customers) {
    s += (first ? "" : ",") + f.instance.customers[j].id;
    first = false;
  }
  return s + "}";
}

// Runs the fixture's checklist. Evaluation errors become failed checks.
inline FixtureReport verify_fixture(const Fixture& f) {
  FixtureReport report{f.name, {}};
  auto add = [&](std::string label, const std::string& expected, auto&& compute,
                 auto&& pass) {
    FixtureCheck check{std::move(label), expected, {}, false};
    try {
      const Rational got = compute();
      check.got = got.str();
      check.passed = pass(got);
    } catch (const std::exception& e) {
      check.got = std::string("error: ") + e.what();
    }
    report.checks.push_back(std::move(check));
  };

  std::optional<Rational> integral, fractional;
  add("integral optimum", f.expected_integral.str(),
      [&] { return *(integral = integral_optimum(f)); },
      [&](const Rational& v) { return v == f.expected_integral; });
  add("fractional value", f.expected_fractional.str(),
      [&] {
        return *(fractional = eval_fractional(f.instance, f.constraints,
                                               f.fractional));
      },
      [&](const Rational& v) { return v == f.expected_fractional; });
  for (const TableRow& row : f.table) {
    add("forced " + describe_row(f, row), row.value.str(),
        [&] { return table_row_value(f, row); },
        [&](const Rational& v) { return v == row.value; });
  }
  for (const BudgetAnchor& anchor : f.anchors) {
    add("optimum at k=" + std::to_string(anchor.k), anchor.value.str(),
        [&] { return anchor_optimum(f, anchor.k); },
        [&](const Rational& v) { return v == anchor.value; });
  }

  // Outside the core model the relaxation must be strictly better; inside it
  // the fractional value is matched by an integral one.
  const bool variant = f.constraints.any();
  FixtureCheck gap{variant ? "fractional < integral" : "fractional == integral",
                   variant ? "strict gap" : "no gap", {}, false};
  if (integral && fractional) {
    gap.got = fractional->str() + " vs " + integral->str();
    gap.passed = variant ? *fractional < *integral : *fractional == *integral;
  } else {
    gap.got = "unavailable";
  }
  report.checks.push_back(std::move(gap));
  return report;
}

namespace detail {

inline Instance fixture_instance(
    const std::vector<std::pair<const char*, const char*>>& bc,
    const std::vector<const char*>& demands, std::size_t k) {
  Instance inst;
  for (std::size_t i = 0; i < bc.size(); ++i) {
    inst.suppliers.push_back({std::to_string(i + 1), Rational::parse(bc[i].second),
                              Rational::parse(bc[i].first)});
  }
  for (std::size_t j = 0; j < demands.size(); ++j) {
    inst.customers.push_back({std::to_string(j + 1), Rational::parse(demands[j])});
  }
  inst.k = k;
  return inst;
}

// Entries are (supplier, customer, supplier upgraded, customer upgraded),
// 1-based, all with the same weight.
inline FractionalSolution uniform_fractional(
    std::initializer_list<std::tuple<int, int, bool, bool>> entries,
    const Rational& weight) {
  FractionalSolution fs;
  for (auto [i, j, red, cust] : entries) {
    fs.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                  red, cust, weight});
  }
  return fs;
}

inline std::vector<std::size_t> zero_based(std::initializer_list<int> ids) {
  std::vector<std::size_t> out;
  for (int id : ids) out.push_back(static_cast<std::size_t>(id - 1));
  return out;
}

}  // namespace detail

// Instance data for the counterexample figures is reconstructed from the
// printed cost expressions; every printed number is part of the checklist.
inline std::vector<Fixture> builtin_fixtures() {
  using detail::fixture_instance;
  using detail::uniform_fractional;
  using detail::zero_based;
  const Rational half = Rational::parse("1/2");
  std::vector<Fixture> out;

  {
    // Two suppliers (b, c) = (0, 1), (2, 3); unit demands; k = 1.
    Fixture f;
    f.name = "sec2";
    f.instance = fixture_instance({{"0", "1"}, {"2", "3"}}, {"1", "1"}, 1);
    f.fractional = uniform_fractional(
        {{1, 2, true, false}, {2, 1, true, false}, {1, 1, false, false},
         {2, 2, false, false}},
        half);
    f.expected_integral = Rational(3);
    f.expected_fractional = Rational(3);
    out.push_back(std::move(f));
  }
  {
    // Half of the zero-upgrade optimum plus half of the {1, 3} optimum.
    Fixture f;
    f.name = "sec32";
    f.instance = fixture_instance({{"0", "1"}, {"1", "1"}, {"1", "4"}},
                                  {"3", "2", "1"}, 1);
    f.fractional = uniform_fractional(
        {{1, 1, false, false}, {2, 2, false, false}, {3, 3, false, false},
         {1, 1, true, false}, {3, 2, true, false}, {2, 3, false, false}},
        half);
    f.expected_integral = Rational(6);
    f.expected_fractional = Rational(6);
    out.push_back(std::move(f));
  }
  {
    // b_3 = c_3 = 2; the missing edge is (supplier 3, customer 2).
    Fixture f;
    f.name = "noncomplete";
    f.instance = fixture_instance({{"0", "1"}, {"2", "5"}, {"2", "2"}},
                                  {"3", "1", "0"}, 1);
    EdgeMask mask;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (!(i == 2 && j == 1)) mask.allowed.insert({i, j});
      }
    }
    f.constraints.mask = std::move(mask);
    f.fractional = uniform_fractional(
        {{1, 1, true, false}, {1, 2, false, false}, {2, 2, true, false},
         {2, 3, false, false}, {3, 1, false, false}, {3, 3, false, false}},
        half);
    f.expected_integral = Rational(5);
    f.expected_fractional = Rational::parse("9/2");
    out.push_back(std::move(f));
  }
  {
    // Groups {1, 2} and {3, 4}, one upgrade each.
    Fixture f;
    f.name = "partition";
    f.instance = fixture_instance(
        {{"0.9", "2"}, {"2", "5"}, {"2", "3"}, {"3", "5"}}, {"4", "3", "2", "1"},
        2);
    f.constraints.partition = PartitionBudget{
        {BudgetGroup{UpgradeSet{0, 1}, 1}, BudgetGroup{UpgradeSet{2, 3}, 1}}};
    f.fractional = uniform_fractional(
        {{1, 1, true, false}, {1, 2, false, false}, {2, 1, true, false},
         {2, 4, false, false}, {3, 2, true, false}, {3, 3, false, false},
         {4, 3, true, false}, {4, 4, false, false}},
        half);
    f.expected_integral = Rational(23);
    f.expected_fractional = Rational::parse("22.8");
    f.table = {
        {UpgradeSet(zero_based({1, 3})), {}, Rational::parse("24.6")},
        {UpgradeSet(zero_based({1, 4})), {}, Rational::parse("23.6")},
        {UpgradeSet(zero_based({2, 3})), {}, Rational(23)},
        {UpgradeSet(zero_based({2, 4})), {}, Rational(23)},
    };
    out.push_back(std::move(f));
  }
  {
    // c = (7, 5, 3), b = (7, 2, 1); d = (9, 15, 20), d' = (4, 15, 8); k = 2.
    Fixture f;
    f.name = "dual";
    f.instance = fixture_instance({{"7", "7"}, {"2", "5"}, {"1", "3"}},
                                  {"9", "15", "20"}, 2);
    f.constraints.dual = DualUpgradeSpec{
        {Rational(4), Rational(15), Rational(8)}, 2};
    // Half of the k = 1 optimum (customer 3 upgraded) plus half of the k = 3
    // optimum (suppliers 2, 3 and customer 1 upgraded).
    f.fractional = uniform_fractional(
        {{1, 3, false, true}, {2, 1, false, false}, {3, 2, false, false},
         {1, 1, false, true}, {2, 2, true, false}, {3, 3, true, false}},
        half);
    f.expected_integral = Rational(113);
    f.expected_fractional = Rational(112);
    f.table = {
        {UpgradeSet(zero_based({2, 3})), {}, Rational(113)},
        {UpgradeSet(zero_based({2})), zero_based({1}), Rational(113)},
        {UpgradeSet(zero_based({2})), zero_based({3}), Rational(113)},
        {UpgradeSet(zero_based({3})), zero_based({1}), Rational(123)},
        {UpgradeSet(zero_based({3})), zero_based({3}), Rational(116)},
        {UpgradeSet{}, zero_based({1, 3}), Rational(113)},
        {UpgradeSet{}, zero_based({3}), Rational(146)},
        {UpgradeSet(zero_based({2, 3})), zero_based({1}), Rational(78)},
    };
    f.anchors = {{1, Rational(146)}, {3, Rational(78)}};
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace mapu
