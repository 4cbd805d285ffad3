#pragma once

// Seeded generators for sweeps and tests. Small numerators and denominators
// keep ties (equal costs, equal demands) frequent.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "mapu/core.hpp"
#include "mapu/rational.hpp"
#include "mapu/scheduling.hpp"

namespace mapu {

struct RandomSpec {
  std::int64_t max_numerator = 20;
  std::int64_t max_denominator = 4;
};

inline Rational random_rational(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_int_distribution<std::int64_t> num(0, spec.max_numerator);
  std::uniform_int_distribution<std::int64_t> den(1, spec.max_denominator);
  const std::int64_t d = den(rng);
  return Rational(num(rng), d);
}

inline Instance random_instance(std::mt19937_64& rng, std::size_t suppliers,
                                std::size_t customers, std::size_t k,
                                const RandomSpec& spec = {}) {
  Instance inst;
  for (std::size_t i = 0; i < suppliers; ++i) {
    Rational b = random_rational(rng, spec);
    Rational c = b + random_rational(rng, spec);
    inst.suppliers.push_back({"s" + std::to_string(i + 1), std::move(c), std::move(b)});
  }
  for (std::size_t j = 0; j < customers; ++j) {
    inst.customers.push_back({"d" + std::to_string(j + 1), random_rational(rng, spec)});
  }
  inst.k = k;
  return inst;
}

inline SchedulingInstance random_scheduling(std::mt19937_64& rng, std::size_t jobs,
                                            std::size_t machines, std::size_t k) {
  static const Rational speeds[] = {Rational(1), Rational(2), Rational(3),
                                    Rational(1, 2), Rational(3, 2)};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(speeds) - 1);
  std::uniform_int_distribution<std::int64_t> time(0, 9);
  SchedulingInstance s;
  for (std::size_t i = 0; i < machines; ++i) s.speeds.push_back(speeds[pick(rng)]);
  for (std::size_t j = 0; j < jobs; ++j) {
    const std::int64_t p = time(rng);
    std::uniform_int_distribution<std::int64_t> below(0, p);
    s.jobs.push_back({"j" + std::to_string(j + 1), Rational(p), Rational(below(rng))});
  }
  s.k = k;
  return s;
}

}  // namespace mapu
