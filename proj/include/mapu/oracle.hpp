#pragma once

// Exhaustive ground truth and property checkers. Everything here enumerates
// subsets, so all entry points take a size cap.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/rational.hpp"

namespace mapu {

inline constexpr std::size_t kDefaultOracleCap = 20;
// Above this size an exhaustive call is legal but slow; callers may warn.
inline constexpr std::size_t kOracleWarnSize = 16;

namespace detail {

inline void check_cap(const char* what, std::size_t n, std::size_t cap) {
  if (n > cap) throw CapExceeded(what, n, cap);
}

// Calls visit(indices) for every size-r subset of [0, n) in lexicographic
// order.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t r, Visit&& visit) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    visit(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t pos = r;
    while (pos > 0 && idx[pos - 1] == n - r + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < r; ++i) idx[i] = idx[i - 1] + 1;
  }
}

// Best size-r set; first minimum in lexicographic order.
inline std::pair<UpgradeSet, Rational> best_of_size(const Instance& instance,
                                                    std::size_t r) {
  std::optional<std::pair<UpgradeSet, Rational>> best;
  for_each_combination(instance.suppliers.size(), r,
                       [&](const std::vector<std::size_t>& idx) {
                         UpgradeSet x(idx);
                         Rational c = cost(instance, x);
                         if (!best || c < best->second) {
                           best.emplace(std::move(x), std::move(c));
                         }
                       });
  return std::move(*best);
}

}  // namespace detail

// Enumerates every |X| = k. Upgrading never hurts (b_i <= c_i), so this is
// the same optimum as |X| <= k.
inline Solution brute_force(const Instance& instance,
                            std::size_t cap = kDefaultOracleCap) {
  validate(instance);
  detail::check_cap("brute_force", instance.suppliers.size(), cap);
  auto [x, value] = detail::best_of_size(instance, instance.k);
  AssignmentResult r = optimal_assignment(instance, x);
  return Solution{std::move(x), std::move(r.assignment), std::move(value)};
}

struct HProfile {
  std::vector<Rational> values;  // values[k'] = h(k')

  bool non_increasing() const {
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] > values[i - 1]) return false;
    }
    return true;
  }
  bool convex() const {
    for (std::size_t i = 2; i < values.size(); ++i) {
      if (values[i] - values[i - 1] < values[i - 1] - values[i - 2]) {
        return false;
      }
    }
    return true;
  }
};

inline HProfile h_profile(const Instance& instance,
                          std::size_t cap = kDefaultOracleCap) {
  validate(instance);
  const std::size_t n = instance.suppliers.size();
  detail::check_cap("h_profile", n, cap);
  HProfile profile;
  profile.values.reserve(n + 1);
  for (std::size_t r = 0; r <= n; ++r) {
    profile.values.push_back(detail::best_of_size(instance, r).second);
  }
  return profile;
}

// k rounds, each adding the single supplier that lowers cost() the most; ties
// go to the smallest index.
inline Solution greedy(const Instance& instance) {
  validate(instance);
  UpgradeSet x;
  Rational current = cost(instance, x);
  for (std::size_t round = 0; round < instance.k; ++round) {
    std::optional<std::size_t> best_i;
    Rational best_value;
    for (std::size_t i = 0; i < instance.suppliers.size(); ++i) {
      if (x.contains(i)) continue;
      UpgradeSet y = x;
      y.insert(i);
      Rational c = cost(instance, y);
      if (!best_i || c < best_value) {
        best_i = i;
        best_value = std::move(c);
      }
    }
    if (!best_i) break;
    x.insert(*best_i);
    current = std::move(best_value);
  }
  AssignmentResult r = optimal_assignment(instance, x);
  return Solution{std::move(x), std::move(r.assignment), std::move(current)};
}

struct SupermodularityWitness {
  UpgradeSet base;
  std::size_t s = 0;
  std::size_t t = 0;
  Rational lhs;  // cost(A) + cost(A + s + t)
  Rational rhs;  // cost(A + s) + cost(A + t)
};

struct SupermodularityReport {
  bool holds = true;
  std::size_t triples_checked = 0;
  bool exhaustive = false;
  std::optional<SupermodularityWitness> counterexample;
};

inline constexpr std::size_t kExhaustiveSupermodularLimit = 6;

// Checks cost(A) + cost(A+s+t) >= cost(A+s) + cost(A+t) for s != t outside A.
// Exhaustive over all (A, s, t) when |I| <= 6, otherwise `trials` random
// triples drawn with `seed`.
inline SupermodularityReport check_supermodular(const Instance& instance,
                                                std::size_t trials,
                                                std::uint64_t seed = 0) {
  validate(instance);
  const std::size_t n = instance.suppliers.size();
  SupermodularityReport report;
  auto check = [&](const UpgradeSet& base, std::size_t s, std::size_t t) {
    ++report.triples_checked;
    UpgradeSet with_s = base, with_t = base;
    with_s.insert(s);
    with_t.insert(t);
    UpgradeSet with_both = with_s;
    with_both.insert(t);
    Rational lhs = cost(instance, base) + cost(instance, with_both);
    Rational rhs = cost(instance, with_s) + cost(instance, with_t);
    if (lhs < rhs) {
      report.holds = false;
      report.counterexample =
          SupermodularityWitness{base, s, t, std::move(lhs), std::move(rhs)};
      return false;
    }
    return true;
  };

  if (n <= kExhaustiveSupermodularLimit) {
    report.exhaustive = true;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      std::vector<bool> mask(n);
      for (std::size_t i = 0; i < n; ++i) mask[i] = (bits >> i) & 1U;
      const UpgradeSet base = UpgradeSet::from_mask(mask);
      for (std::size_t s = 0; s < n; ++s) {
        if (mask[s]) continue;
        for (std::size_t t = s + 1; t < n; ++t) {
          if (mask[t]) continue;
          if (!check(base, s, t)) return report;
        }
      }
    }
    return report;
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t s = pick(rng);
    std::size_t t = pick(rng);
    while (t == s) t = pick(rng);
    std::vector<bool> mask(n);
    for (std::size_t i = 0; i < n; ++i) mask[i] = i != s && i != t && coin(rng);
    if (!check(UpgradeSet::from_mask(mask), s, t)) return report;
  }
  return report;
}

}  // namespace mapu
