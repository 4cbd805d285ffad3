#pragma once

// Exact min-cost perfect bipartite matching (shortest augmenting paths with
// potentials, O(n^3)) and the penalized red/blue matching built on top of it.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/rational.hpp"

namespace mapu {

template <class T>
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t n) : n_(n), entries_(n * n) {
    if (n == 0) throw InputError("cost matrix must be at least 1x1");
  }
  CostMatrix(std::size_t n, std::vector<T> entries)
      : n_(n), entries_(std::move(entries)) {
    if (n == 0) throw InputError("cost matrix must be at least 1x1");
    if (entries_.size() != n * n) {
      throw InputError("cost matrix entries do not form an n x n grid");
    }
  }

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t row, std::size_t col) {
    return entries_[row * n_ + col];
  }
  const T& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * n_ + col];
  }

 private:
  std::size_t n_;
  std::vector<T> entries_;
};

template <class T>
struct MatchingResult {
  std::vector<std::size_t> permutation;  // row -> column
  T total{};
  // Dual certificate: row_potential[i] + col_potential[j] <= m(i, j), with
  // equality along the permutation.
  std::vector<T> row_potential;
  std::vector<T> col_potential;
};

// Requires only +, -, < and value-initialization to zero from T, so it runs
// unchanged on machine integers and on Rational.
template <class T>
MatchingResult<T> min_cost_perfect_matching(const CostMatrix<T>& m) {
  const std::size_t n = m.size();
  // 1-based internally; index 0 is the virtual root column.
  std::vector<T> u(n + 1, T{}), v(n + 1, T{});
  std::vector<std::size_t> match_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<T> slack(n + 1, T{});
  std::vector<char> slack_set(n + 1, 0), used(n + 1, 0);

  for (std::size_t row = 1; row <= n; ++row) {
    match_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(slack_set.begin(), slack_set.end(), 0);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = match_of_col[col0];
      std::size_t col1 = 0;
      bool have_delta = false;
      T delta{};
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        T reduced = m(row0 - 1, col - 1) - u[row0] - v[col];
        if (!slack_set[col] || reduced < slack[col]) {
          slack[col] = std::move(reduced);
          slack_set[col] = 1;
          way[col] = col0;
        }
        if (!have_delta || slack[col] < delta) {
          delta = slack[col];
          have_delta = true;
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match_of_col[col]] = u[match_of_col[col]] + delta;
          v[col] = v[col] - delta;
        } else if (slack_set[col]) {
          slack[col] = slack[col] - delta;
        }
      }
      col0 = col1;
    } while (match_of_col[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match_of_col[col0] = match_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  MatchingResult<T> result;
  result.permutation.assign(n, 0);
  for (std::size_t col = 1; col <= n; ++col) {
    result.permutation[match_of_col[col] - 1] = col - 1;
  }
  for (std::size_t row = 0; row < n; ++row) {
    result.total = result.total + m(row, result.permutation[row]);
  }
  result.row_potential.assign(u.begin() + 1, u.end());
  result.col_potential.assign(v.begin() + 1, v.end());
  return result;
}

// True iff the potentials prove optimality: feasible duals, tight on every
// matched edge, and the permutation is a bijection.
template <class T>
bool verify_dual_certificate(const CostMatrix<T>& m,
                             const MatchingResult<T>& r) {
  const std::size_t n = m.size();
  if (r.permutation.size() != n || r.row_potential.size() != n ||
      r.col_potential.size() != n) {
    return false;
  }
  std::vector<char> seen(n, 0);
  T total{};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = r.permutation[i];
    if (j >= n || seen[j]) return false;
    seen[j] = 1;
    total = total + m(i, j);
    if (!(r.row_potential[i] + r.col_potential[j] == m(i, j))) return false;
  }
  if (!(total == r.total)) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < r.row_potential[i] + r.col_potential[j]) return false;
    }
  }
  return true;
}

// Which integer width the penalized matching runs on. Auto picks the
// narrowest exact one.
enum class MatchingBackend { kAuto, kInt64, kInt128, kRational };

struct LagrangianResult {
  UpgradeSet upgrades;
  Assignment assignment;  // customer -> supplier
  Rational total;         // min over X of cost(X) + penalty * |X|
  MatchingBackend backend_used = MatchingBackend::kRational;
};

namespace detail {

inline mpz_class lcm_of_denominators(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const Rational& r : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.denominator().get_mpz_t());
  }
  return l;
}

// Penalized weights scaled to a common integer denominator.
struct ScaledWeights {
  std::size_t n = 0;
  std::vector<mpz_class> red;   // b_i d_j + penalty, scaled
  std::vector<mpz_class> blue;  // c_i d_j, scaled
  mpz_class scale;              // true weight = scaled / scale
  mpz_class max_abs;
};

inline ScaledWeights scale_weights(const Instance& instance,
                                   const Rational& penalty) {
  const std::size_t n = instance.suppliers.size();
  std::vector<Rational> costs, demands;
  for (const Supplier& s : instance.suppliers) {
    costs.push_back(s.base_cost);
    costs.push_back(s.upgraded_cost);
  }
  for (const Customer& c : instance.customers) demands.push_back(c.demand);
  const mpz_class cost_scale = lcm_of_denominators(costs);
  const mpz_class demand_scale = lcm_of_denominators(demands);
  const Rational scaled_penalty =
      penalty * Rational(mpz_class(cost_scale * demand_scale));
  const mpz_class penalty_den = scaled_penalty.denominator();

  ScaledWeights w;
  w.n = n;
  w.scale = cost_scale * demand_scale * penalty_den;
  const mpz_class penalty_num = scaled_penalty.numerator();
  std::vector<mpz_class> b(n), c(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Supplier& s = instance.suppliers[i];
    b[i] = s.upgraded_cost.numerator() * (cost_scale / s.upgraded_cost.denominator());
    c[i] = s.base_cost.numerator() * (cost_scale / s.base_cost.denominator());
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& dj = instance.customers[j].demand;
    d[j] = dj.numerator() * (demand_scale / dj.denominator()) * penalty_den;
  }
  w.red.resize(n * n);
  w.blue.resize(n * n);
  w.max_abs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class& red = w.red[i * n + j];
      mpz_class& blue = w.blue[i * n + j];
      red = b[i] * d[j] + penalty_num;
      blue = c[i] * d[j];
      if (abs(red) > w.max_abs) w.max_abs = abs(red);
      if (abs(blue) > w.max_abs) w.max_abs = abs(blue);
    }
  }
  return w;
}

// Potentials stay within a small multiple of n * max|w|; 4(n + 1) leaves room
// for every intermediate sum in the kernel.
inline bool fits_bits(const ScaledWeights& w, unsigned bits) {
  mpz_class bound = w.max_abs * static_cast<unsigned long>(4 * (w.n + 1));
  return mpz_sizeinbase(bound.get_mpz_t(), 2) < bits;
}

inline __int128 to_int128(const mpz_class& z) {
  // Two 64-bit limbs via export; sign handled separately.
  mpz_class a = abs(z);
  const mpz_class low_mask = (mpz_class(1) << 64) - 1;
  const mpz_class lo = a & low_mask;
  const mpz_class hi = a >> 64;
  unsigned __int128 r = (static_cast<unsigned __int128>(hi.get_ui()) << 64) |
                        static_cast<unsigned __int128>(lo.get_ui());
  return sgn(z) < 0 ? -static_cast<__int128>(r) : static_cast<__int128>(r);
}

template <class T, class Convert>
std::pair<std::vector<std::size_t>, mpz_class> run_scaled(
    const ScaledWeights& w, Convert convert) {
  std::vector<T> entries(w.n * w.n);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    entries[e] = convert(w.red[e] < w.blue[e] ? w.red[e] : w.blue[e]);
  }
  CostMatrix<T> m(w.n, std::move(entries));
  MatchingResult<T> r = min_cost_perfect_matching(m);
  mpz_class total = 0;
  for (std::size_t i = 0; i < w.n; ++i) {
    const std::size_t e = i * w.n + r.permutation[i];
    total += w.red[e] < w.blue[e] ? w.red[e] : w.blue[e];
  }
  return {std::move(r.permutation), total};
}

}  // namespace detail

// Minimizes g(X) = cost(X) + penalty * |X| over all X by one perfect
// matching on w(i, j) = min(c_i d_j, b_i d_j + penalty). A matched supplier is
// upgraded iff its red branch is strictly cheaper.
inline LagrangianResult lagrangian_matching(
    const Instance& instance, const Rational& penalty,
    MatchingBackend backend = MatchingBackend::kAuto) {
  if (!instance.is_square()) {
    throw InputError("lagrangian_matching needs a normalized instance");
  }
  if (penalty.sign() < 0) {
    throw InputError("lagrangian_matching needs a non-negative penalty");
  }
  const std::size_t n = instance.suppliers.size();
  LagrangianResult out;
  if (n == 0) return out;

  const detail::ScaledWeights w = detail::scale_weights(instance, penalty);
  if (backend == MatchingBackend::kAuto) {
    if (detail::fits_bits(w, 62)) {
      backend = MatchingBackend::kInt64;
    } else if (detail::fits_bits(w, 126)) {
      backend = MatchingBackend::kInt128;
    } else {
      backend = MatchingBackend::kRational;
    }
  }
  if (backend == MatchingBackend::kInt64 && !detail::fits_bits(w, 62)) {
    throw InputError("weights do not fit the int64 matching backend");
  }
  if (backend == MatchingBackend::kInt128 && !detail::fits_bits(w, 126)) {
    throw InputError("weights do not fit the int128 matching backend");
  }

  std::vector<std::size_t> permutation;
  mpz_class scaled_total;
  switch (backend) {
    case MatchingBackend::kInt64:
      std::tie(permutation, scaled_total) = detail::run_scaled<std::int64_t>(
          w, [](const mpz_class& z) { return static_cast<std::int64_t>(z.get_si()); });
      break;
    case MatchingBackend::kInt128:
      std::tie(permutation, scaled_total) = detail::run_scaled<__int128>(
          w, [](const mpz_class& z) { return detail::to_int128(z); });
      break;
    default:
      std::tie(permutation, scaled_total) = detail::run_scaled<Rational>(
          w, [](const mpz_class& z) { return Rational(z); });
      break;
  }
  out.backend_used = backend;

  out.assignment.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = permutation[i];
    out.assignment[j] = i;
    const std::size_t e = i * n + j;
    if (w.red[e] < w.blue[e]) out.upgrades.insert(i);
  }
  out.total = Rational(scaled_total, w.scale);
  return out;
}

}  // namespace mapu
