#pragma once

// Strongly polynomial exact solver.
//
// Phase 1 (narrowing) keeps a weakly optimal pair (A, B), |A| < k < |B|, with
// cost(A) = h(|A|) and cost(B) = h(|B|), starting from (empty, I). Each step
// solves one unconstrained penalized matching with penalty
// (cost(A) - cost(B)) / (|B| - |A|); a strictly better minimizer X* lands
// strictly between |A| and |B| and replaces one endpoint. If none exists the
// pair is optimal, i.e. its interpolation f_{A,B}(k) equals the LP optimum.
//
// Phase 2 (rounding) drops upgrades wasted on zero-demand customers, which
// makes the pair clean, then repeatedly redistributes A and B alternately and
// keeps whichever half satisfies s * cost(X) + t * |X| <= r. The cardinality
// gap shrinks every round until some X has exactly k members.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/matching.hpp"
#include "mapu/rational.hpp"

namespace mapu {

struct Pair {
  UpgradeSet a;
  UpgradeSet b;
  Rational cost_a;
  Rational cost_b;

  static Pair make(const Instance& instance, UpgradeSet a, UpgradeSet b) {
    Pair p{std::move(a), std::move(b), {}, {}};
    p.cost_a = cost(instance, p.a);
    p.cost_b = cost(instance, p.b);
    return p;
  }
};

// ((|B| - k) cost(A) + (k - |A|) cost(B)) / (|B| - |A|)
inline Rational f_value(const Pair& pair, std::size_t k) {
  const std::size_t sa = pair.a.size();
  const std::size_t sb = pair.b.size();
  if (!(sa < k && k < sb)) {
    throw InvariantViolation("f_value needs |A| < k < |B|, got |A|=" +
                             std::to_string(sa) + " k=" + std::to_string(k) +
                             " |B|=" + std::to_string(sb));
  }
  return (Rational(sb - k) * pair.cost_a + Rational(k - sa) * pair.cost_b) /
         Rational(sb - sa);
}

inline Rational penalty(const Pair& pair) {
  if (!(pair.a.size() < pair.b.size())) {
    throw InvariantViolation("penalty needs |A| < |B|");
  }
  return (pair.cost_a - pair.cost_b) / Rational(pair.b.size() - pair.a.size());
}

// No two suppliers of A xor B whose intervals nest strictly: b_i < b_i' and
// c_i' < c_i.
inline bool is_clean(const Instance& instance, const UpgradeSet& a,
                     const UpgradeSet& b) {
  const UpgradeSet diff = symmetric_difference(a, b);
  std::vector<std::size_t> order(diff.begin(), diff.end());
  const auto& s = instance.suppliers;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return s[x].upgraded_cost < s[y].upgraded_cost;
  });
  // Sweep groups of equal b; every supplier with strictly smaller b has been
  // folded into max_base_cost by the time its group closes.
  std::optional<Rational> max_base_cost;
  std::size_t g = 0;
  while (g < order.size()) {
    std::size_t end = g;
    while (end < order.size() &&
           s[order[end]].upgraded_cost == s[order[g]].upgraded_cost) {
      ++end;
    }
    for (std::size_t t = g; t < end; ++t) {
      if (max_base_cost && s[order[t]].base_cost < *max_base_cost) return false;
    }
    for (std::size_t t = g; t < end; ++t) {
      if (!max_base_cost || s[order[t]].base_cost > *max_base_cost) {
        max_base_cost = s[order[t]].base_cost;
      }
    }
    g = end;
  }
  return true;
}

// A' gets the even positions and B' the odd positions (1-based) of A xor B
// sorted by (b, c, index); both keep A and B.
inline std::pair<UpgradeSet, UpgradeSet> redistribute(const Instance& instance,
                                                      const Pair& pair) {
  if (!is_clean(instance, pair.a, pair.b)) {
    throw InvariantViolation("redistribute called on a pair that is not clean");
  }
  const UpgradeSet diff = symmetric_difference(pair.a, pair.b);
  if (diff.empty()) {
    throw InvariantViolation("redistribute called with A == B");
  }
  std::vector<std::size_t> order(diff.begin(), diff.end());
  const auto& s = instance.suppliers;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) {
                     if (s[x].upgraded_cost != s[y].upgraded_cost) {
                       return s[x].upgraded_cost < s[y].upgraded_cost;
                     }
                     return s[x].base_cost < s[y].base_cost;
                   });
  UpgradeSet a_prime = set_intersection(pair.a, pair.b);
  UpgradeSet b_prime = a_prime;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    // pos is 0-based: even pos == odd 1-based position.
    if (pos % 2 == 0) {
      b_prime.insert(order[pos]);
    } else {
      a_prime.insert(order[pos]);
    }
  }
  return {std::move(a_prime), std::move(b_prime)};
}

struct NarrowingStep {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  Rational cost_a;
  Rational cost_b;
  Rational penalty;
  UpgradeSet x;  // minimizer of the penalized objective
  Rational cost_x;
  Rational g_x;
  Rational g_a;
  bool extreme = false;  // g_x < g_a
};

struct SimplifyStep {
  UpgradeSet a_before, b_before;
  UpgradeSet a_after, b_after;
  Rational cost_a, cost_b;
  bool clean = false;
  bool produced_solution = false;
};

struct RoundingStep {
  UpgradeSet a, b;
  Rational cost_a, cost_b;
  UpgradeSet a_prime, b_prime;
  Rational cost_a_prime, cost_b_prime;
  bool clean = false;
  bool chose_b_prime = false;
  Rational f_before;  // f_{A,B}(k)
};

struct SolveTrace {
  std::vector<NarrowingStep> narrowing;
  std::optional<SimplifyStep> simplify;
  std::vector<RoundingStep> rounding;
  std::optional<Rational> optimal_pair_f;  // LP optimum when a pair was found
  std::string finished_in;  // "boundary", "narrowing", "simplify", "rounding"
  Solution final;
};

using OptimalPairOutcome = std::variant<Pair, Solution>;

namespace detail {

inline Solution solution_for(const Instance& instance, UpgradeSet x) {
  AssignmentResult r = optimal_assignment(instance, x);
  return Solution{std::move(x), std::move(r.assignment), std::move(r.value)};
}

// Adds the lowest-index suppliers of `pool` not yet in `x` until |x| = size.
inline UpgradeSet pad_from(UpgradeSet x, const UpgradeSet& pool,
                           std::size_t size) {
  for (std::size_t i : pool) {
    if (x.size() >= size) break;
    x.insert(i);
  }
  return x;
}

// Removes, until none is left, upgraded suppliers that the Lemma-1 matching
// sends to zero-demand customers. cost() is unchanged by each removal.
inline UpgradeSet drop_wasted_upgrades(const Instance& instance, UpgradeSet x) {
  for (;;) {
    const AssignmentResult r = optimal_assignment(instance, x);
    std::vector<std::size_t> wasted;
    for (std::size_t j = 0; j < r.assignment.size(); ++j) {
      if (instance.customers[j].demand.sign() == 0 &&
          x.contains(r.assignment[j])) {
        wasted.push_back(r.assignment[j]);
      }
    }
    if (wasted.empty()) return x;
    for (std::size_t i : wasted) x.erase(i);
  }
}

}  // namespace detail

// Requires a normalized instance with 0 < k < |I|.
inline OptimalPairOutcome find_optimal_pair(const Instance& instance,
                                            SolveTrace* trace = nullptr,
                                            MatchingBackend backend =
                                                MatchingBackend::kAuto) {
  const std::size_t n = instance.suppliers.size();
  const std::size_t k = instance.k;
  if (!instance.is_square()) {
    throw InputError("find_optimal_pair needs a normalized instance");
  }
  if (!(0 < k && k < n)) {
    throw InputError("find_optimal_pair needs 0 < k < |I|");
  }

  Pair pair = Pair::make(instance, UpgradeSet{}, UpgradeSet::all(n));
  for (std::size_t iteration = 0; iteration <= n; ++iteration) {
    const Rational p = penalty(pair);
    detail::ensure(p.sign() >= 0, "negative penalty during narrowing");
    LagrangianResult lr = lagrangian_matching(instance, p, backend);
    const Rational g_a = pair.cost_a + p * Rational(pair.a.size());
    const Rational cost_x = cost(instance, lr.upgrades);
    detail::ensure(cost_x + p * Rational(lr.upgrades.size()) == lr.total,
                   "penalized matching total disagrees with cost(X*)");

    const bool extreme = lr.total < g_a;
    if (trace) {
      trace->narrowing.push_back({pair.a.size(), pair.b.size(), pair.cost_a,
                                  pair.cost_b, p, lr.upgrades, cost_x,
                                  lr.total, g_a, extreme});
    }
    if (!extreme) return pair;

    const std::size_t sx = lr.upgrades.size();
    detail::ensure(pair.a.size() < sx && sx < pair.b.size(),
                   "extreme set outside (|A|, |B|): |X*|=" +
                       std::to_string(sx));
    if (sx == k) return detail::solution_for(instance, std::move(lr.upgrades));
    if (sx > k) {
      pair.b = std::move(lr.upgrades);
      pair.cost_b = cost_x;
    } else {
      pair.a = std::move(lr.upgrades);
      pair.cost_a = cost_x;
    }
  }
  throw InvariantViolation("narrowing did not terminate within |I|+1 steps");
}

// Makes both sides simple. Returns the simple pair, or a k-element solution
// when the shrunken B no longer exceeds k.
inline OptimalPairOutcome simplify_pair(const Instance& instance,
                                        const Pair& pair,
                                        SolveTrace* trace = nullptr) {
  const std::size_t k = instance.k;
  Pair out{detail::drop_wasted_upgrades(instance, pair.a),
           detail::drop_wasted_upgrades(instance, pair.b), pair.cost_a,
           pair.cost_b};
  detail::ensure(cost(instance, out.a) == pair.cost_a &&
                     cost(instance, out.b) == pair.cost_b,
                 "dropping wasted upgrades changed a cost");
  SimplifyStep step{pair.a, pair.b, out.a, out.b, out.cost_a, out.cost_b,
                    false, false};
  if (out.b.size() <= k) {
    UpgradeSet padded =
        detail::pad_from(out.b, set_difference(pair.b, out.b), k);
    Solution s = detail::solution_for(instance, std::move(padded));
    detail::ensure(s.value == pair.cost_b,
                   "padding the simplified B changed its cost");
    if (trace) {
      step.produced_solution = true;
      trace->simplify = std::move(step);
    }
    return s;
  }
  if (trace) {
    step.clean = is_clean(instance, out.a, out.b);
    trace->simplify = std::move(step);
  }
  return out;
}

// Requires a clean optimal pair. Returns a solution with exactly k upgrades
// whose value is f_{A,B}(k) of the input pair.
inline Solution round_pair(const Instance& instance, Pair pair,
                           SolveTrace* trace = nullptr) {
  const std::size_t k = instance.k;
  const std::size_t n = instance.suppliers.size();
  const Rational f_start = f_value(pair, k);
  for (std::size_t iteration = 0; iteration < n; ++iteration) {
    const Rational f_now = f_value(pair, k);
    detail::ensure(f_now <= f_start, "f value increased during rounding");
    const bool clean = is_clean(instance, pair.a, pair.b);
    detail::ensure(clean, "rounding reached a pair that is not clean");

    auto [a_prime, b_prime] = redistribute(instance, pair);
    const Rational cost_a_prime = cost(instance, a_prime);
    const Rational cost_b_prime = cost(instance, b_prime);
    detail::ensure(pair.a.size() < a_prime.size() &&
                       a_prime.size() <= b_prime.size() &&
                       b_prime.size() < pair.b.size(),
                   "redistribution sizes out of order");
    detail::ensure(cost_a_prime + cost_b_prime <= pair.cost_a + pair.cost_b,
                   "redistribution increased the summed cost");

    const Rational s(pair.b.size() - pair.a.size());
    const Rational t = pair.cost_a - pair.cost_b;
    const Rational r = Rational(pair.b.size()) * pair.cost_a -
                       Rational(pair.a.size()) * pair.cost_b;
    auto qualifies = [&](const UpgradeSet& x, const Rational& cx) {
      return s * cx + t * Rational(x.size()) <= r;
    };
    const bool a_ok = qualifies(a_prime, cost_a_prime);
    const bool b_ok = qualifies(b_prime, cost_b_prime);
    detail::ensure(a_ok || b_ok,
                   "neither redistributed set passes the selection test");
    bool choose_b = !a_ok;
    if (a_ok && b_ok) {
      auto distance = [k](std::size_t size) {
        return size > k ? size - k : k - size;
      };
      // Nearer to k wins; on a tie the smaller set, which is A'.
      choose_b = distance(b_prime.size()) < distance(a_prime.size());
    }
    if (trace) {
      trace->rounding.push_back({pair.a, pair.b, pair.cost_a, pair.cost_b,
                                 a_prime, b_prime, cost_a_prime, cost_b_prime,
                                 clean, choose_b, f_now});
    }
    UpgradeSet x = choose_b ? std::move(b_prime) : std::move(a_prime);
    const Rational cx = choose_b ? cost_b_prime : cost_a_prime;
    if (x.size() == k) {
      detail::ensure(cx <= f_now, "rounded solution exceeds f_{A,B}(k)");
      return detail::solution_for(instance, std::move(x));
    }
    if (x.size() < k) {
      pair.a = std::move(x);
      pair.cost_a = cx;
    } else {
      pair.b = std::move(x);
      pair.cost_b = cx;
    }
  }
  throw InvariantViolation("rounding did not terminate within |I| steps");
}

struct SolveResult {
  Solution solution;
  SolveTrace trace;
};

// Exact optimum for any valid instance. The returned assignment covers the
// original customers only; the upgrade set has exactly min(k, |I|) members.
inline SolveResult solve(const Instance& input,
                         MatchingBackend backend = MatchingBackend::kAuto) {
  validate(input);
  const Instance instance = normalize(input);
  const std::size_t n = instance.suppliers.size();
  const std::size_t k = instance.k;

  SolveResult out;
  SolveTrace& trace = out.trace;
  Solution solution;
  std::optional<Rational> target;

  if (k == 0 || k == n) {
    solution = detail::solution_for(
        instance, k == 0 ? UpgradeSet{} : UpgradeSet::all(n));
    trace.finished_in = "boundary";
  } else {
    OptimalPairOutcome outcome = find_optimal_pair(instance, &trace, backend);
    if (auto* s = std::get_if<Solution>(&outcome)) {
      solution = std::move(*s);
      trace.finished_in = "narrowing";
    } else {
      const Pair& optimal = std::get<Pair>(outcome);
      target = f_value(optimal, k);
      trace.optimal_pair_f = target;
      OptimalPairOutcome simplified = simplify_pair(instance, optimal, &trace);
      if (auto* s2 = std::get_if<Solution>(&simplified)) {
        solution = std::move(*s2);
        trace.finished_in = "simplify";
      } else {
        solution = round_pair(instance, std::get<Pair>(std::move(simplified)),
                              &trace);
        trace.finished_in = "rounding";
      }
    }
  }

  if (solution.upgrades.size() < k) {
    const Rational before = solution.value;
    solution = detail::solution_for(
        instance, detail::pad_from(solution.upgrades, UpgradeSet::all(n), k));
    detail::ensure(solution.value == before, "padding changed the optimum");
  }
  if (target) {
    detail::ensure(solution.value == *target,
                   "integral optimum differs from the optimal pair value");
  }
  solution.assignment.resize(input.customers.size());
  out.solution = std::move(solution);
  trace.final = out.solution;
  return out;
}

}  // namespace mapu
