#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mapu/core.hpp"
#include "mapu/rational.hpp"

namespace testutil {

inline mapu::Rational Q(const char* text) { return mapu::Rational::parse(text); }

// Suppliers as (b, c) pairs, ids "1", "2", ...
inline mapu::Instance make(const std::vector<std::pair<const char*, const char*>>& bc,
                           const std::vector<const char*>& demands, std::size_t k) {
  mapu::Instance inst;
  for (std::size_t i = 0; i < bc.size(); ++i) {
    inst.suppliers.push_back({std::to_string(i + 1), Q(bc[i].second), Q(bc[i].first)});
  }
  for (std::size_t j = 0; j < demands.size(); ++j) {
    inst.customers.push_back({std::to_string(j + 1), Q(demands[j])});
  }
  inst.k = k;
  return inst;
}

inline mapu::Instance two_supplier() { return make({{"0", "1"}, {"2", "3"}}, {"1", "1"}, 1); }

inline mapu::Instance three_supplier() {
  return make({{"0", "1"}, {"1", "1"}, {"1", "4"}}, {"3", "2", "1"}, 1);
}

// Greedy picks supplier 1 first but the k = 2 optimum is {2, 3}.
inline mapu::Instance greedy_trap(std::size_t k) {
  return make({{"1", "5"}, {"0", "3"}, {"3", "10"}}, {"1", "2", "3"}, k);
}

}  // namespace testutil
