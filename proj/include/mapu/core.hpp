#pragma once

// Instance model and the fixed-upgrade-set assignment that defines cost(X).

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapu/error.hpp"
#include "mapu/rational.hpp"

namespace mapu {

struct Supplier {
  std::string id;
  Rational base_cost;      // c_i, paid per unit of demand when not upgraded
  Rational upgraded_cost;  // b_i, paid per unit of demand when upgraded

  friend bool operator==(const Supplier&, const Supplier&) = default;
};

struct Customer {
  std::string id;
  Rational demand;

  friend bool operator==(const Customer&, const Customer&) = default;
};

// Suffix reserved for the zero-demand customers appended by normalize().
inline constexpr std::string_view kDummySuffix = "#dummy";

struct Instance {
  std::vector<Supplier> suppliers;
  std::vector<Customer> customers;
  std::size_t k = 0;

  std::size_t supplier_count() const noexcept { return suppliers.size(); }
  std::size_t customer_count() const noexcept { return customers.size(); }
  bool is_square() const noexcept {
    return suppliers.size() == customers.size();
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

inline bool is_dummy_customer(const Customer& c) {
  return c.id.size() >= kDummySuffix.size() &&
         c.id.compare(c.id.size() - kDummySuffix.size(), kDummySuffix.size(),
                      kDummySuffix) == 0;
}

// Throws InputError unless 0 <= b_i <= c_i, d_j >= 0, |I| >= |J|,
// 0 <= k <= |I| and ids are unique per side.
inline void validate(const Instance& instance) {
  if (instance.suppliers.size() < instance.customers.size()) {
    throw InputError("instance has fewer suppliers (" +
                     std::to_string(instance.suppliers.size()) +
                     ") than customers (" +
                     std::to_string(instance.customers.size()) + ")");
  }
  if (instance.k > instance.suppliers.size()) {
    throw InputError("budget k=" + std::to_string(instance.k) +
                     " exceeds supplier count " +
                     std::to_string(instance.suppliers.size()));
  }
  auto check_unique = [](std::vector<std::string> ids, const char* side) {
    std::sort(ids.begin(), ids.end());
    if (auto it = std::adjacent_find(ids.begin(), ids.end()); it != ids.end()) {
      throw InputError(std::string("duplicate ") + side + " id '" + *it + "'");
    }
  };
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < instance.suppliers.size(); ++i) {
    const Supplier& s = instance.suppliers[i];
    if (s.upgraded_cost.sign() < 0 || s.upgraded_cost > s.base_cost) {
      throw InputError("suppliers[" + std::to_string(i) + "] ('" + s.id +
                       "'): need 0 <= upgraded_cost <= base_cost, got " +
                       s.upgraded_cost.str() + " and " + s.base_cost.str());
    }
    ids.push_back(s.id);
  }
  check_unique(std::move(ids), "supplier");
  ids.clear();
  for (std::size_t j = 0; j < instance.customers.size(); ++j) {
    const Customer& c = instance.customers[j];
    if (c.demand.sign() < 0) {
      throw InputError("customers[" + std::to_string(j) + "] ('" + c.id +
                       "'): demand must be non-negative, got " +
                       c.demand.str());
    }
    ids.push_back(c.id);
  }
  check_unique(std::move(ids), "customer");
}

// Set of upgraded suppliers, stored as sorted, duplicate-free supplier
// indices into Instance::suppliers.
class UpgradeSet {
 public:
  UpgradeSet() = default;
  UpgradeSet(std::initializer_list<std::size_t> members)
      : UpgradeSet(std::vector<std::size_t>(members)) {}
  explicit UpgradeSet(std::vector<std::size_t> members)
      : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()),
                   members_.end());
  }

  static UpgradeSet all(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return UpgradeSet(std::move(v));
  }

  static UpgradeSet from_mask(const std::vector<bool>& mask) {
    UpgradeSet s;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) s.members_.push_back(i);
    }
    return s;
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }
  std::span<const std::size_t> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  void insert(std::size_t i) {
    auto it = std::lower_bound(members_.begin(), members_.end(), i);
    if (it == members_.end() || *it != i) members_.insert(it, i);
  }
  void erase(std::size_t i) {
    auto it = std::lower_bound(members_.begin(), members_.end(), i);
    if (it != members_.end() && *it == i) members_.erase(it);
  }

  std::vector<bool> mask(std::size_t n) const {
    std::vector<bool> m(n, false);
    for (std::size_t i : members_) m[i] = true;
    return m;
  }

  bool is_subset_of(const UpgradeSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
  }

  friend UpgradeSet set_union(const UpgradeSet& a, const UpgradeSet& b) {
    UpgradeSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(r.members_));
    return r;
  }
  friend UpgradeSet set_intersection(const UpgradeSet& a, const UpgradeSet& b) {
    UpgradeSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(r.members_));
    return r;
  }
  friend UpgradeSet set_difference(const UpgradeSet& a, const UpgradeSet& b) {
    UpgradeSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(r.members_));
    return r;
  }
  friend UpgradeSet symmetric_difference(const UpgradeSet& a,
                                         const UpgradeSet& b) {
    UpgradeSet r;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(r.members_));
    return r;
  }

  friend bool operator==(const UpgradeSet&, const UpgradeSet&) = default;

 private:
  std::vector<std::size_t> members_;
};

// Customer index -> supplier index.
using Assignment = std::vector<std::size_t>;

struct Solution {
  UpgradeSet upgrades;
  Assignment assignment;
  Rational value;
};

inline void check_upgrade_set(const Instance& instance, const UpgradeSet& x) {
  if (!x.empty() && x.members().back() >= instance.suppliers.size()) {
    throw InputError("upgrade set references unknown supplier index " +
                     std::to_string(x.members().back()));
  }
}

// Appends zero-demand customers until |J| = |I|. Everything else is kept.
inline Instance normalize(const Instance& instance) {
  Instance out = instance;
  std::size_t serial = 0;
  while (out.customers.size() < out.suppliers.size()) {
    out.customers.push_back(
        {"d" + std::to_string(serial++) + std::string(kDummySuffix),
         Rational(0)});
  }
  return out;
}

// b_i for i in X, c_i otherwise.
inline std::vector<Rational> effective_costs(const Instance& instance,
                                             const UpgradeSet& x) {
  check_upgrade_set(instance, x);
  std::vector<Rational> out;
  out.reserve(instance.suppliers.size());
  for (const Supplier& s : instance.suppliers) out.push_back(s.base_cost);
  for (std::size_t i : x) out[i] = instance.suppliers[i].upgraded_cost;
  return out;
}

// Customer indices ordered by demand, non-increasing; ties by index.
inline std::vector<std::size_t> demand_order(const Instance& instance) {
  std::vector<std::size_t> order(instance.customers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return instance.customers[a].demand >
                            instance.customers[b].demand;
                   });
  return order;
}

struct AssignmentResult {
  Assignment assignment;
  Rational value;
};

// Optimal assignment for a fixed upgrade set: the j-th largest demand goes to
// the j-th cheapest effective cost. Valid for any |X|, including |X| > k.
inline AssignmentResult optimal_assignment(const Instance& instance,
                                           const UpgradeSet& x) {
  const std::vector<Rational> eff = effective_costs(instance, x);
  std::vector<std::size_t> supplier_order(eff.size());
  std::iota(supplier_order.begin(), supplier_order.end(), std::size_t{0});
  std::stable_sort(supplier_order.begin(), supplier_order.end(),
                   [&](std::size_t a, std::size_t b) { return eff[a] < eff[b]; });
  const std::vector<std::size_t> customer_order = demand_order(instance);

  AssignmentResult result;
  result.assignment.assign(instance.customers.size(), 0);
  for (std::size_t r = 0; r < customer_order.size(); ++r) {
    const std::size_t j = customer_order[r];
    const std::size_t i = supplier_order[r];
    result.assignment[j] = i;
    result.value += eff[i] * instance.customers[j].demand;
  }
  return result;
}

inline Rational cost(const Instance& instance, const UpgradeSet& x) {
  return optimal_assignment(instance, x).value;
}

// Objective of an explicit assignment. Throws InputError when the assignment
// is not an injective map defined on every customer.
inline Rational evaluate(const Instance& instance, const UpgradeSet& x,
                         const Assignment& assignment) {
  check_upgrade_set(instance, x);
  if (assignment.size() != instance.customers.size()) {
    throw InputError("assignment covers " + std::to_string(assignment.size()) +
                     " customers, instance has " +
                     std::to_string(instance.customers.size()));
  }
  std::vector<bool> used(instance.suppliers.size(), false);
  Rational total;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    const std::size_t i = assignment[j];
    if (i >= instance.suppliers.size()) {
      throw InputError("assignment references unknown supplier index " +
                       std::to_string(i));
    }
    if (used[i]) {
      throw InputError("assignment is not injective: supplier '" +
                       instance.suppliers[i].id + "' used twice");
    }
    used[i] = true;
    const Supplier& s = instance.suppliers[i];
    total += (x.contains(i) ? s.upgraded_cost : s.base_cost) *
             instance.customers[j].demand;
  }
  return total;
}

}  // namespace mapu
