#pragma once

// JSON formats for instances, scheduling instances and fixtures.
// Numbers may be JSON numbers or strings ("0.9", "9/10", "3e-2"); values
// are always written back as exact strings.

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mapu/core.hpp"
#include "mapu/error.hpp"
#include "mapu/rational.hpp"
#include "mapu/scheduling.hpp"
#include "mapu/variants.hpp"

namespace mapu::io {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw InputError(path + ": " + msg);
}

inline const json& field(const json& obj, const char* key,
                         const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

inline const json& array_field(const json& obj, const char* key,
                               const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) fail(path + "." + key, "expected an array");
  return v;
}

inline std::string id_of(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  fail(path, "id must be a string or integer");
}

inline std::size_t count_of(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(path, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline std::size_t lookup(const std::map<std::string, std::size_t>& index,
                          const std::string& id, const std::string& path) {
  auto it = index.find(id);
  if (it == index.end()) fail(path, "unknown id '" + id + "'");
  return it->second;
}

}  // namespace detail

inline Rational parse_number(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rational::parse(v.dump());
    // dump() yields the shortest text that round-trips, e.g. 0.9 -> "0.9"
    if (v.is_number_float()) return Rational::parse(v.dump());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
  } catch (const InputError& e) {
    detail::fail(path, e.what());
  }
  detail::fail(path, "expected a number or numeric string");
}

inline json exact(const Rational& r) { return r.str(); }

// Exact string plus a 6-place decimal, labeled as approximate.
inline json value_json(const Rational& r) {
  return json{{"exact", r.str()}, {"approx", r.decimal(6)}};
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance parse_instance(const json& j) {
  using detail::field;
  Instance inst;
  const json& suppliers = detail::array_field(j, "suppliers", "$");
  for (std::size_t i = 0; i < suppliers.size(); ++i) {
    const std::string p = "$.suppliers[" + std::to_string(i) + "]";
    const json& s = suppliers[i];
    std::string id = s.is_object() && s.contains("id")
                         ? detail::id_of(s["id"], p + ".id")
                         : std::to_string(i + 1);
    inst.suppliers.push_back(
        {std::move(id), parse_number(field(s, "base_cost", p), p + ".base_cost"),
         parse_number(field(s, "upgraded_cost", p), p + ".upgraded_cost")});
  }
  const json& customers = detail::array_field(j, "customers", "$");
  for (std::size_t c = 0; c < customers.size(); ++c) {
    const std::string p = "$.customers[" + std::to_string(c) + "]";
    const json& cj = customers[c];
    std::string id = cj.is_object() && cj.contains("id")
                         ? detail::id_of(cj["id"], p + ".id")
                         : std::to_string(c + 1);
    inst.customers.push_back(
        {std::move(id), parse_number(field(cj, "demand", p), p + ".demand")});
  }
  inst.k = detail::count_of(field(j, "k", "$"), "$.k");
  validate(inst);
  return inst;
}

inline json to_json(const Instance& inst) {
  json out;
  out["suppliers"] = json::array();
  for (const Supplier& s : inst.suppliers) {
    out["suppliers"].push_back({{"id", s.id},
                                {"base_cost", exact(s.base_cost)},
                                {"upgraded_cost", exact(s.upgraded_cost)}});
  }
  out["customers"] = json::array();
  for (const Customer& c : inst.customers) {
    out["customers"].push_back({{"id", c.id}, {"demand", exact(c.demand)}});
  }
  out["k"] = inst.k;
  return out;
}

inline SchedulingInstance parse_scheduling(const json& j) {
  using detail::field;
  SchedulingInstance s;
  const json& machines = detail::array_field(j, "machines", "$");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const std::string p = "$.machines[" + std::to_string(i) + "]";
    s.speeds.push_back(parse_number(field(machines[i], "speed", p), p + ".speed"));
  }
  const json& jobs = detail::array_field(j, "jobs", "$");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string p = "$.jobs[" + std::to_string(i) + "]";
    const json& job = jobs[i];
    std::string id = job.is_object() && job.contains("id")
                         ? detail::id_of(job["id"], p + ".id")
                         : "j" + std::to_string(i + 1);
    s.jobs.push_back({std::move(id), parse_number(field(job, "p", p), p + ".p"),
                      parse_number(field(job, "q", p), p + ".q")});
  }
  s.k = detail::count_of(field(j, "k", "$"), "$.k");
  validate(s);
  return s;
}

inline json to_json(const SchedulingInstance& s) {
  json out;
  out["machines"] = json::array();
  for (const Rational& speed : s.speeds) {
    out["machines"].push_back({{"speed", exact(speed)}});
  }
  out["jobs"] = json::array();
  for (const Job& job : s.jobs) {
    out["jobs"].push_back(
        {{"id", job.id}, {"p", exact(job.regular)}, {"q", exact(job.upgraded)}});
  }
  out["k"] = s.k;
  return out;
}

// A fixture file is an instance file with an "expected" block.
inline bool is_fixture(const json& j) {
  return j.is_object() && j.contains("expected");
}

inline Fixture parse_fixture(const json& j, std::string fallback_name = "") {
  using detail::field;
  using detail::lookup;
  Fixture f;
  f.name = j.contains("name") ? detail::id_of(j["name"], "$.name")
                              : std::move(fallback_name);
  f.instance = parse_instance(j);
  std::map<std::string, std::size_t> sup, cus;
  for (std::size_t i = 0; i < f.instance.suppliers.size(); ++i) {
    sup[f.instance.suppliers[i].id] = i;
  }
  for (std::size_t c = 0; c < f.instance.customers.size(); ++c) {
    cus[f.instance.customers[c].id] = c;
  }
  auto supplier_set = [&](const json& arr, const std::string& p) {
    if (!arr.is_array()) detail::fail(p, "expected an array of supplier ids");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string q = p + "[" + std::to_string(i) + "]";
      out.push_back(lookup(sup, detail::id_of(arr[i], q), q));
    }
    return out;
  };
  auto customer_list = [&](const json& arr, const std::string& p) {
    if (!arr.is_array()) detail::fail(p, "expected an array of customer ids");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string q = p + "[" + std::to_string(i) + "]";
      out.push_back(lookup(cus, detail::id_of(arr[i], q), q));
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  if (j.contains("mask")) {
    const json& m = detail::array_field(j, "mask", "$");
    EdgeMask mask;
    for (std::size_t e = 0; e < m.size(); ++e) {
      const std::string p = "$.mask[" + std::to_string(e) + "]";
      if (!m[e].is_array() || m[e].size() != 2) {
        detail::fail(p, "expected [supplier id, customer id]");
      }
      mask.allowed.insert({lookup(sup, detail::id_of(m[e][0], p + "[0]"), p),
                           lookup(cus, detail::id_of(m[e][1], p + "[1]"), p)});
    }
    f.constraints.mask = std::move(mask);
  }
  if (j.contains("groups")) {
    const json& g = detail::array_field(j, "groups", "$");
    PartitionBudget pb;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string p = "$.groups[" + std::to_string(i) + "]";
      pb.groups.push_back(
          {UpgradeSet(supplier_set(field(g[i], "suppliers", p), p + ".suppliers")),
           detail::count_of(field(g[i], "budget", p), p + ".budget")});
    }
    f.constraints.partition = std::move(pb);
  }
  if (j.contains("customer_upgrades")) {
    const json& u = detail::array_field(j, "customer_upgrades", "$");
    DualUpgradeSpec spec;
    spec.k = f.instance.k;
    for (const Customer& c : f.instance.customers) {
      spec.upgraded_demands.push_back(c.demand);
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::string p = "$.customer_upgrades[" + std::to_string(i) + "]";
      const std::size_t c =
          lookup(cus, detail::id_of(field(u[i], "customer", p), p + ".customer"),
                 p + ".customer");
      spec.upgraded_demands[c] =
          parse_number(field(u[i], "demand", p), p + ".demand");
    }
    f.constraints.dual = std::move(spec);
  }
  validate_constraints(f.instance, f.constraints);

  const json& expected = field(j, "expected", "$");
  f.expected_integral =
      parse_number(field(expected, "integral", "$.expected"), "$.expected.integral");
  f.expected_fractional = parse_number(field(expected, "fractional", "$.expected"),
                                       "$.expected.fractional");
  const json& frac = detail::array_field(j, "fractional_solution", "$");
  for (std::size_t e = 0; e < frac.size(); ++e) {
    const std::string p = "$.fractional_solution[" + std::to_string(e) + "]";
    const json& x = frac[e];
    FractionalEntry entry;
    entry.supplier = lookup(
        sup, detail::id_of(field(x, "supplier", p), p + ".supplier"), p + ".supplier");
    entry.customer = lookup(
        cus, detail::id_of(field(x, "customer", p), p + ".customer"), p + ".customer");
    const json& color = field(x, "color", p);
    if (color != "red" && color != "blue") {
      detail::fail(p + ".color", "expected \"red\" or \"blue\"");
    }
    entry.supplier_upgraded = color == "red";
    if (x.contains("customer_upgraded")) {
      if (!x["customer_upgraded"].is_boolean()) {
        detail::fail(p + ".customer_upgraded", "expected a boolean");
      }
      entry.customer_upgraded = x["customer_upgraded"].get<bool>();
    }
    entry.weight = parse_number(field(x, "weight", p), p + ".weight");
    f.fractional.push_back(std::move(entry));
  }
  if (j.contains("table")) {
    const json& t = detail::array_field(j, "table", "$");
    for (std::size_t r = 0; r < t.size(); ++r) {
      const std::string p = "$.table[" + std::to_string(r) + "]";
      TableRow row;
      row.suppliers = UpgradeSet(supplier_set(field(t[r], "suppliers", p), p + ".suppliers"));
      if (t[r].contains("customers")) {
        row.customers = customer_list(t[r]["customers"], p + ".customers");
      }
      row.value = parse_number(field(t[r], "value", p), p + ".value");
      f.table.push_back(std::move(row));
    }
  }
  if (j.contains("anchors")) {
    const json& a = detail::array_field(j, "anchors", "$");
    for (std::size_t r = 0; r < a.size(); ++r) {
      const std::string p = "$.anchors[" + std::to_string(r) + "]";
      f.anchors.push_back({detail::count_of(field(a[r], "k", p), p + ".k"),
                           parse_number(field(a[r], "value", p), p + ".value")});
    }
  }
  return f;
}

inline json to_json(const Fixture& f) {
  json out;
  out["name"] = f.name;
  const json inst = to_json(f.instance);
  for (auto it = inst.begin(); it != inst.end(); ++it) out[it.key()] = it.value();
  const auto& S = f.instance.suppliers;
  const auto& C = f.instance.customers;
  if (f.constraints.mask) {
    out["mask"] = json::array();
    for (auto [i, c] : f.constraints.mask->allowed) {
      out["mask"].push_back({S[i].id, C[c].id});
    }
  }
  if (f.constraints.partition) {
    out["groups"] = json::array();
    for (const BudgetGroup& g : f.constraints.partition->groups) {
      json ids = json::array();
      for (std::size_t i : g.members) ids.push_back(S[i].id);
      out["groups"].push_back({{"suppliers", ids}, {"budget", g.budget}});
    }
  }
  if (f.constraints.dual) {
    out["customer_upgrades"] = json::array();
    for (std::size_t c = 0; c < C.size(); ++c) {
      out["customer_upgrades"].push_back(
          {{"customer", C[c].id},
           {"demand", exact(f.constraints.dual->upgraded_demands[c])}});
    }
  }
  out["fractional_solution"] = json::array();
  for (const FractionalEntry& e : f.fractional) {
    json x{{"supplier", S[e.supplier].id},
           {"customer", C[e.customer].id},
           {"color", e.supplier_upgraded ? "red" : "blue"}};
    if (e.customer_upgraded) x["customer_upgraded"] = true;
    x["weight"] = exact(e.weight);
    out["fractional_solution"].push_back(std::move(x));
  }
  out["expected"] = {{"integral", exact(f.expected_integral)},
                     {"fractional", exact(f.expected_fractional)}};
  if (!f.table.empty()) {
    out["table"] = json::array();
    for (const TableRow& row : f.table) {
      json sids = json::array(), cids = json::array();
      for (std::size_t i : row.suppliers) sids.push_back(S[i].id);
      for (std::size_t c : row.customers) cids.push_back(C[c].id);
      out["table"].push_back(
          {{"suppliers", sids}, {"customers", cids}, {"value", exact(row.value)}});
    }
  }
  if (!f.anchors.empty()) {
    out["anchors"] = json::array();
    for (const BudgetAnchor& a : f.anchors) {
      out["anchors"].push_back({{"k", a.k}, {"value", exact(a.value)}});
    }
  }
  return out;
}

}  // namespace mapu::io
