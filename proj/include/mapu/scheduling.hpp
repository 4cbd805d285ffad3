#pragma once

// Total completion time on uniform machines where up to k jobs may be
// upgraded to a shorter processing time, reduced to the assignment problem.
// Jobs are suppliers; position l from the end of machine i is a customer
// with demand l / s_i.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/oracle.hpp"
#include "mapu/rational.hpp"
#include "mapu/solver.hpp"

namespace mapu {

struct Job {
  std::string id;
  Rational regular;   // p_j
  Rational upgraded;  // q_j

  friend bool operator==(const Job&, const Job&) = default;
};

struct SchedulingInstance {
  std::vector<Rational> speeds;
  std::vector<Job> jobs;
  std::size_t k = 0;

  friend bool operator==(const SchedulingInstance&,
                         const SchedulingInstance&) = default;
};

struct Slot {
  std::size_t machine = 0;
  std::size_t position = 0;  // 1 = processed last

  friend bool operator==(const Slot&, const Slot&) = default;
};

// Customer index -> slot.
using SlotMap = std::vector<Slot>;

struct Schedule {
  std::vector<std::vector<std::size_t>> machines;  // job indices, in order
  UpgradeSet upgraded;
  std::vector<Rational> completion;  // per job
  Rational total_completion;
  Rational average_completion;
};

inline void validate(const SchedulingInstance& s) {
  if (s.speeds.empty()) throw InputError("scheduling instance has no machines");
  if (s.jobs.empty()) throw InputError("scheduling instance has no jobs");
  for (std::size_t i = 0; i < s.speeds.size(); ++i) {
    if (s.speeds[i].sign() <= 0) {
      throw InputError("machines[" + std::to_string(i) +
                       "]: speed must be positive, got " + s.speeds[i].str());
    }
  }
  for (std::size_t j = 0; j < s.jobs.size(); ++j) {
    const Job& job = s.jobs[j];
    if (job.upgraded.sign() < 0 || job.upgraded > job.regular) {
      throw InputError("jobs[" + std::to_string(j) + "] ('" + job.id +
                       "'): need 0 <= q <= p, got q=" + job.upgraded.str() +
                       " p=" + job.regular.str());
    }
  }
  if (s.k > s.jobs.size()) {
    throw InputError("budget k=" + std::to_string(s.k) + " exceeds job count " +
                     std::to_string(s.jobs.size()));
  }
}

inline std::pair<Instance, SlotMap> reduce(const SchedulingInstance& s) {
  validate(s);
  const std::size_t n = s.jobs.size();
  struct Candidate {
    Rational coefficient;
    std::size_t machine;
    std::size_t position;
  };
  std::vector<Candidate> all;
  all.reserve(n * s.speeds.size());
  for (std::size_t i = 0; i < s.speeds.size(); ++i) {
    for (std::size_t l = 1; l <= n; ++l) {
      all.push_back({Rational(static_cast<std::uint64_t>(l)) / s.speeds[i], i, l});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return std::tie(a.coefficient, a.machine, a.position) <
                            std::tie(b.coefficient, b.machine, b.position);
                   });
  all.resize(n);

  Instance instance;
  for (const Job& job : s.jobs) {
    instance.suppliers.push_back({job.id, job.regular, job.upgraded});
  }
  SlotMap slots;
  for (const Candidate& c : all) {
    instance.customers.push_back({"m" + std::to_string(c.machine + 1) + "/" +
                                      std::to_string(c.position),
                                  c.coefficient});
    slots.push_back({c.machine, c.position});
  }
  instance.k = s.k;
  return {std::move(instance), std::move(slots)};
}

// Completion times of an explicit schedule.
inline void compute_completion(const SchedulingInstance& s, Schedule& schedule) {
  schedule.completion.assign(s.jobs.size(), Rational(0));
  schedule.total_completion = Rational(0);
  for (std::size_t i = 0; i < schedule.machines.size(); ++i) {
    Rational t;
    for (std::size_t j : schedule.machines[i]) {
      const Job& job = s.jobs[j];
      t += (schedule.upgraded.contains(j) ? job.upgraded : job.regular) /
           s.speeds[i];
      schedule.completion[j] = t;
      schedule.total_completion += t;
    }
  }
  schedule.average_completion =
      schedule.total_completion / Rational(static_cast<std::uint64_t>(s.jobs.size()));
}

inline Schedule solve_schedule(const SchedulingInstance& s) {
  auto [instance, slots] = reduce(s);
  const Solution sol = solve(instance).solution;

  Schedule schedule;
  schedule.upgraded = sol.upgrades;
  // by_position[i][l-1] = job in slot l of machine i
  std::vector<std::vector<std::optional<std::size_t>>> by_position(s.speeds.size());
  for (std::size_t c = 0; c < slots.size(); ++c) {
    auto& column = by_position[slots[c].machine];
    if (column.size() < slots[c].position) column.resize(slots[c].position);
    column[slots[c].position - 1] = sol.assignment[c];
  }
  schedule.machines.resize(s.speeds.size());
  std::vector<bool> seen(s.jobs.size(), false);
  for (std::size_t i = 0; i < by_position.size(); ++i) {
    for (auto it = by_position[i].rbegin(); it != by_position[i].rend(); ++it) {
      detail::ensure(it->has_value(), "slots on a machine are not a prefix");
      detail::ensure(!seen[**it], "job scheduled twice");
      seen[**it] = true;
      schedule.machines[i].push_back(**it);
    }
  }
  detail::ensure(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }),
                 "job missing from schedule");
  compute_completion(s, schedule);
  detail::ensure(schedule.total_completion == sol.value,
                 "schedule total differs from assignment value");
  return schedule;
}

inline constexpr std::size_t kScheduleOracleCap = 6;

namespace detail {

// Minimum total completion time of `jobs` on one machine over every order.
inline Rational best_single_machine(std::vector<std::size_t> jobs,
                                   const std::vector<Rational>& duration) {
  std::sort(jobs.begin(), jobs.end());
  std::optional<Rational> best;
  do {
    Rational clock, total;
    for (std::size_t j : jobs) {
      clock += duration[j];
      total += clock;
    }
    if (!best || total < *best) best = std::move(total);
  } while (std::next_permutation(jobs.begin(), jobs.end()));
  return *best;
}

}  // namespace detail

// Every upgrade set of size <= k, every job-to-machine map and every order on
// each machine. Exponential; for cross-checking only.
inline Rational brute_force_schedule(const SchedulingInstance& s) {
  validate(s);
  const std::size_t n = s.jobs.size();
  const std::size_t m = s.speeds.size();
  detail::check_cap("brute_force_schedule", n, kScheduleOracleCap);
  std::optional<Rational> best;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    if (static_cast<std::size_t>(__builtin_popcountll(bits)) > s.k) continue;
    std::vector<std::size_t> machine_of(n, 0);
    for (;;) {
      Rational total;
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> jobs;
        std::vector<Rational> duration(n);
        for (std::size_t j = 0; j < n; ++j) {
          if (machine_of[j] != i) continue;
          jobs.push_back(j);
          duration[j] = (((bits >> j) & 1U) ? s.jobs[j].upgraded
                                            : s.jobs[j].regular) /
                        s.speeds[i];
        }
        if (!jobs.empty()) total += detail::best_single_machine(jobs, duration);
      }
      if (!best || total < *best) best = std::move(total);
      std::size_t pos = 0;
      while (pos < n && ++machine_of[pos] == m) machine_of[pos++] = 0;
      if (pos == n) break;
    }
  }
  return *best;
}

}  // namespace mapu
