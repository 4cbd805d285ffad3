#pragma once

// Command implementations behind the mapu executable. Every command returns
// a RunReport; main() only parses flags and prints.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "mapu/mapu.hpp"

namespace mapu::cli {

using io::json;

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kMismatch = 2,
  kCapExceeded = 3,
};

struct Options {
  bool trace = false;
  bool verify = false;
  std::size_t cap = kDefaultOracleCap;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string fixtures_dir;
  std::size_t count = 200;
  std::size_t max_n = 7;
};

struct RunReport {
  std::string command;
  std::vector<std::string> args;
  std::string input_digest;
  json result = json::object();
  std::optional<json> trace;
  double duration_ms = 0;
  int exit_code = kOk;
  std::string error;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return out.str();
}

// duration_ms is the only field that varies between identical runs.
inline json to_json(const RunReport& r, bool with_timing = true) {
  json out;
  out["command"] = r.command;
  out["args"] = r.args;
  out["input_sha256"] = r.input_digest;
  out["exit_code"] = r.exit_code;
  if (!r.error.empty()) out["error"] = r.error;
  out["result"] = r.result;
  if (r.trace) out["trace"] = *r.trace;
  if (with_timing) out["duration_ms"] = r.duration_ms;
  return out;
}

namespace detail {

inline json ids(const Instance& inst, const UpgradeSet& x) {
  json out = json::array();
  for (std::size_t i : x) out.push_back(inst.suppliers[i].id);
  return out;
}

inline json solution_json(const Instance& inst, const Solution& s) {
  json out;
  out["value"] = io::value_json(s.value);
  out["upgrades"] = ids(inst, s.upgrades);
  out["assignment"] = json::array();
  for (std::size_t j = 0; j < s.assignment.size(); ++j) {
    const std::size_t i = s.assignment[j];
    out["assignment"].push_back({{"customer", inst.customers[j].id},
                                 {"supplier", inst.suppliers[i].id},
                                 {"upgraded", s.upgrades.contains(i)}});
  }
  return out;
}

// Trace sets refer to the normalized instance; dummy customers never appear
// in them, so supplier ids suffice.
inline json trace_json(const Instance& inst, const SolveTrace& t) {
  json out;
  out["finished_in"] = t.finished_in;
  out["narrowing"] = json::array();
  for (const NarrowingStep& s : t.narrowing) {
    out["narrowing"].push_back({{"size_a", s.size_a},
                                {"size_b", s.size_b},
                                {"cost_a", io::exact(s.cost_a)},
                                {"cost_b", io::exact(s.cost_b)},
                                {"penalty", io::exact(s.penalty)},
                                {"x", ids(inst, s.x)},
                                {"cost_x", io::exact(s.cost_x)},
                                {"g_x", io::exact(s.g_x)},
                                {"g_a", io::exact(s.g_a)},
                                {"extreme", s.extreme}});
  }
  if (t.optimal_pair_f) out["optimal_pair_f"] = io::exact(*t.optimal_pair_f);
  if (t.simplify) {
    const SimplifyStep& s = *t.simplify;
    out["simplify"] = {{"a_before", ids(inst, s.a_before)},
                       {"b_before", ids(inst, s.b_before)},
                       {"a_after", ids(inst, s.a_after)},
                       {"b_after", ids(inst, s.b_after)},
                       {"cost_a", io::exact(s.cost_a)},
                       {"cost_b", io::exact(s.cost_b)},
                       {"clean", s.clean},
                       {"produced_solution", s.produced_solution}};
  }
  out["rounding"] = json::array();
  for (const RoundingStep& s : t.rounding) {
    out["rounding"].push_back({{"a", ids(inst, s.a)},
                               {"b", ids(inst, s.b)},
                               {"cost_a", io::exact(s.cost_a)},
                               {"cost_b", io::exact(s.cost_b)},
                               {"a_prime", ids(inst, s.a_prime)},
                               {"b_prime", ids(inst, s.b_prime)},
                               {"cost_a_prime", io::exact(s.cost_a_prime)},
                               {"cost_b_prime", io::exact(s.cost_b_prime)},
                               {"clean", s.clean},
                               {"chose", s.chose_b_prime ? "b_prime" : "a_prime"},
                               {"f_before", io::exact(s.f_before)}});
  }
  return out;
}

inline json schedule_json(const SchedulingInstance& s, const Schedule& sch) {
  json out;
  out["machines"] = json::array();
  for (std::size_t i = 0; i < sch.machines.size(); ++i) {
    json jobs = json::array();
    for (std::size_t j : sch.machines[i]) {
      jobs.push_back({{"job", s.jobs[j].id},
                      {"upgraded", sch.upgraded.contains(j)},
                      {"completion", io::exact(sch.completion[j])}});
    }
    out["machines"].push_back({{"speed", io::exact(s.speeds[i])}, {"order", jobs}});
  }
  json up = json::array();
  for (std::size_t j : sch.upgraded) up.push_back(s.jobs[j].id);
  out["upgraded"] = up;
  out["total_completion"] = io::value_json(sch.total_completion);
  out["average_completion"] = io::value_json(sch.average_completion);
  return out;
}

inline json fixture_report_json(const FixtureReport& r) {
  json checks = json::array();
  for (const FixtureCheck& c : r.checks) {
    checks.push_back({{"check", c.label},
                      {"expected", c.expected},
                      {"got", c.got},
                      {"passed", c.passed}});
  }
  return {{"fixture", r.name}, {"passed", r.passed()}, {"checks", checks}};
}

// Times `body` and turns library exceptions into exit codes.
inline RunReport run(std::string command, std::vector<std::string> args,
                     const std::function<void(RunReport&)>& body) {
  RunReport report;
  report.command = std::move(command);
  report.args = std::move(args);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(report);
  } catch (const CapExceeded& e) {
    report.exit_code = kCapExceeded;
    report.error = e.what();
  } catch (const InputError& e) {
    report.exit_code = kInputError;
    report.error = e.what();
  } catch (const InvariantViolation& e) {
    report.exit_code = kMismatch;
    report.error = std::string("internal check failed: ") + e.what();
  }
  report.duration_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return report;
}

inline Instance load_instance(const std::string& path, RunReport& report) {
  const std::string text = io::read_file(path);
  report.input_digest = sha256_hex(text);
  return io::parse_instance(io::parse_text(text, path));
}

}  // namespace detail

inline RunReport cmd_solve(const std::string& path, const Options& opt) {
  return detail::run("solve", {path}, [&](RunReport& r) {
    const Instance inst = detail::load_instance(path, r);
    const SolveResult res = solve(inst);
    r.result = detail::solution_json(inst, res.solution);
    if (opt.trace) r.trace = detail::trace_json(inst, res.trace);
    if (opt.verify) {
      if (inst.suppliers.size() > opt.cap) {
        r.result["verified"] = nullptr;
        r.result["verify_skipped"] = "supplier count exceeds cap " +
                                     std::to_string(opt.cap);
        return;
      }
      const Solution oracle = brute_force(inst, opt.cap);
      const bool ok = oracle.value == res.solution.value;
      r.result["verified"] = ok;
      r.result["oracle_value"] = io::value_json(oracle.value);
      if (!ok) {
        r.exit_code = kMismatch;
        r.error = "solver value " + res.solution.value.str() +
                  " differs from oracle value " + oracle.value.str();
      }
    }
  });
}

inline RunReport cmd_oracle(const std::string& path, const Options& opt) {
  return detail::run("oracle", {path}, [&](RunReport& r) {
    const Instance inst = detail::load_instance(path, r);
    r.result = detail::solution_json(inst, brute_force(inst, opt.cap));
  });
}

inline RunReport cmd_hprofile(const std::string& path, const Options& opt) {
  return detail::run("hprofile", {path}, [&](RunReport& r) {
    const Instance inst = detail::load_instance(path, r);
    const HProfile h = h_profile(inst, opt.cap);
    json values = json::array();
    for (const Rational& v : h.values) values.push_back(io::value_json(v));
    r.result["h"] = values;
    r.result["non_increasing"] = h.non_increasing();
    r.result["convex"] = h.convex();
    if (!h.non_increasing() || !h.convex()) {
      r.exit_code = kMismatch;
      r.error = "h profile is not non-increasing and convex";
    }
  });
}

inline RunReport cmd_greedy(const std::string& path, const Options& opt) {
  return detail::run("greedy", {path}, [&](RunReport& r) {
    const Instance inst = detail::load_instance(path, r);
    const Solution g = greedy(inst);
    r.result = detail::solution_json(inst, g);
    if (inst.suppliers.size() <= opt.cap) {
      const Solution best = brute_force(inst, opt.cap);
      r.result["oracle_value"] = io::value_json(best.value);
      r.result["suboptimal"] = g.value > best.value;
    } else {
      r.result["oracle_value"] = nullptr;
    }
  });
}

inline RunReport cmd_schedule(const std::string& path, const Options& opt) {
  return detail::run("schedule", {path}, [&](RunReport& r) {
    const std::string text = io::read_file(path);
    r.input_digest = sha256_hex(text);
    const SchedulingInstance s = io::parse_scheduling(io::parse_text(text, path));
    const Schedule sch = solve_schedule(s);
    r.result = detail::schedule_json(s, sch);
    if (opt.verify) {
      const std::size_t cap = std::min(opt.cap, kScheduleOracleCap);
      if (s.jobs.size() > cap) {
        r.result["verified"] = nullptr;
        r.result["verify_skipped"] = "job count exceeds cap " + std::to_string(cap);
        return;
      }
      const Rational oracle = brute_force_schedule(s);
      const bool ok = oracle == sch.total_completion;
      r.result["verified"] = ok;
      r.result["oracle_total"] = io::value_json(oracle);
      if (!ok) {
        r.exit_code = kMismatch;
        r.error = "schedule total " + sch.total_completion.str() +
                  " differs from oracle total " + oracle.str();
      }
    }
  });
}

// Bundled fixtures, or every fixture file (one with an "expected" block) in
// opt.fixtures_dir.
inline RunReport cmd_verify_fixtures(const Options& opt) {
  std::vector<std::string> args;
  if (!opt.fixtures_dir.empty()) args.push_back(opt.fixtures_dir);
  return detail::run("verify-fixtures", args, [&](RunReport& r) {
    std::vector<Fixture> fixtures;
    std::string digest_input;
    if (opt.fixtures_dir.empty()) {
      fixtures = builtin_fixtures();
      for (const Fixture& f : fixtures) digest_input += io::to_json(f).dump();
    } else {
      namespace fs = std::filesystem;
      if (!fs::is_directory(opt.fixtures_dir)) {
        throw InputError("'" + opt.fixtures_dir + "' is not a directory");
      }
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(opt.fixtures_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const fs::path& file : files) {
        const std::string text = io::read_file(file.string());
        const json j = io::parse_text(text, file.string());
        if (!io::is_fixture(j)) continue;
        digest_input += text;
        fixtures.push_back(io::parse_fixture(j, file.stem().string()));
      }
      if (fixtures.empty()) {
        throw InputError("no fixture files in '" + opt.fixtures_dir + "'");
      }
    }
    r.input_digest = sha256_hex(digest_input);
    json reports = json::array();
    std::string failures;
    for (const Fixture& f : fixtures) {
      const FixtureReport fr = verify_fixture(f);
      reports.push_back(detail::fixture_report_json(fr));
      for (const FixtureCheck& c : fr.checks) {
        if (!c.passed) {
          failures += (failures.empty() ? "" : "; ") + f.name + ": " + c.label +
                      " expected " + c.expected + " got " + c.got;
        }
      }
    }
    r.result["fixtures"] = reports;
    r.result["all_passed"] = failures.empty();
    if (!failures.empty()) {
      r.exit_code = kMismatch;
      r.error = failures;
    }
  });
}

// solve vs brute_force on seeded random instances, plus the h-profile
// invariants.
inline RunReport cmd_sweep(const Options& opt) {
  return detail::run("sweep", {}, [&](RunReport& r) {
    if (opt.max_n == 0) throw InputError("--max-n must be at least 1");
    mapu::detail::check_cap("sweep", opt.max_n, opt.cap);
    r.input_digest = sha256_hex("sweep seed=" + std::to_string(opt.seed) +
                                " count=" + std::to_string(opt.count) +
                                " max_n=" + std::to_string(opt.max_n));
    std::mt19937_64 rng(opt.seed);
    std::size_t mismatches = 0, profile_failures = 0;
    json failures = json::array();
    for (std::size_t t = 0; t < opt.count; ++t) {
      std::uniform_int_distribution<std::size_t> pick_n(1, opt.max_n);
      const std::size_t n = pick_n(rng);
      std::uniform_int_distribution<std::size_t> pick_m(0, n), pick_k(0, n);
      const std::size_t m = pick_m(rng);
      const Instance inst = random_instance(rng, n, m, pick_k(rng));
      const Rational got = solve(inst).solution.value;
      const Rational want = brute_force(inst, opt.cap).value;
      const HProfile h = h_profile(inst, opt.cap);
      const bool profile_ok = h.non_increasing() && h.convex();
      if (got != want) ++mismatches;
      if (!profile_ok) ++profile_failures;
      if (got != want || !profile_ok) {
        failures.push_back({{"index", t},
                            {"instance", io::to_json(inst)},
                            {"solve", got.str()},
                            {"oracle", want.str()},
                            {"profile_ok", profile_ok}});
      }
    }
    r.result["instances"] = opt.count;
    r.result["seed"] = opt.seed;
    r.result["mismatches"] = mismatches;
    r.result["profile_failures"] = profile_failures;
    r.result["failures"] = failures;
    if (mismatches + profile_failures > 0) {
      r.exit_code = kMismatch;
      r.error = "sweep found disagreements";
    }
  });
}

// Flattened "path: value" lines.
inline void render_text(const json& j, const std::string& prefix,
                        std::ostream& out) {
  if (j.is_object()) {
    if (j.size() == 2 && j.contains("exact") && j.contains("approx")) {
      out << prefix << ": " << j["exact"].get<std::string>() << " (~"
          << j["approx"].get<std::string>() << ")\n";
      return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                  out);
    }
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(),
                                  [](const json& v) { return v.is_primitive(); });
    if (flat) {
      out << prefix << ": [";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out << (i ? ", " : "")
            << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      }
      out << "]\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump())
        << "\n";
  }
}

}  // namespace mapu::cli
