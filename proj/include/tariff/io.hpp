#pragma once

// JSON instance/menu (de)serialization shared by the CLI and tests.
// Rationals travel as strings ("3/2", "7", "0.25"); integer JSON numbers are
// accepted, binary floats are rejected to keep everything exact.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tariff/exact.hpp"
#include "tariff/model.hpp"
#include "tariff/single_param.hpp"

namespace tariff {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Rational(static_cast<unsigned long long>(j.get<std::uint64_t>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto dot = s.find('.');
    if (dot == std::string::npos) return parse_rational(s);
    // finite decimal strings are exact rationals
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t places = s.size() - dot - 1;
    if (places == 0 || digits.empty()) throw ValidationError(where + ": invalid decimal '" + s + "'");
    Rational scale = 1;
    for (std::size_t i = 0; i < places; ++i) scale *= 10;
    return parse_rational(digits) / scale;
  }
  if (j.is_number_float())
    throw ValidationError(where + ": binary floats are not exact; use a rational string like \"1/2\"");
  throw ValidationError(where + ": expected a rational (integer or string)");
}

inline Json rational_to_json(const Rational& r) { return Json(tariff::to_string(r)); }

// {"rational": "...", "decimal": "..."} pair used throughout reports.
inline Json rational_entry(const Rational& r) {
  Json j;
  j["rational"] = tariff::to_string(r);
  j["decimal"] = to_decimal_string(r);
  return j;
}

inline std::vector<Rational> rational_vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::vector<Rational>> rational_matrix_from_json(const Json& j,
                                                                    const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of rows");
  std::vector<std::vector<Rational>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_vector_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

struct ParsedInstance {
  Instance instance;
  std::optional<SingleParamInstance> single_param;
};

// Instance file schema: {"T","A","Q","mu","costs","p","v"} with optional
// "alpha" + "baseline" marking a single-parameter instance ("v" is then
// optional and must match alpha x baseline when present; alpha must already
// be strictly increasing in that case).
inline ParsedInstance parse_instance(const Json& j) {
  if (!j.is_object()) throw ValidationError("instance file: expected a JSON object");
  for (const char* key : {"T", "A", "Q"})
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() <= 0)
      throw ValidationError(std::string("instance file: '") + key + "' must be a positive integer");
  for (const char* key : {"mu", "costs", "p"})
    if (!j.contains(key)) throw ValidationError(std::string("instance file: missing '") + key + "'");

  ParsedInstance out;
  Instance& inst = out.instance;
  inst.num_types = j["T"].get<std::size_t>();
  inst.num_actions = j["A"].get<std::size_t>();
  inst.num_outcomes = j["Q"].get<std::size_t>();
  inst.prior = rational_vector_from_json(j["mu"], "mu");
  inst.costs = rational_vector_from_json(j["costs"], "costs");
  inst.transitions = rational_matrix_from_json(j["p"], "p");

  const bool has_alpha = j.contains("alpha") || j.contains("baseline");
  if (has_alpha) {
    if (!j.contains("alpha") || !j.contains("baseline"))
      throw ValidationError("instance file: 'alpha' and 'baseline' must be given together");
    auto alpha = rational_vector_from_json(j["alpha"], "alpha");
    auto baseline = rational_vector_from_json(j["baseline"], "baseline");
    if (alpha.size() != inst.num_types)
      throw ValidationError("instance file: 'alpha' length differs from T");
    if (baseline.size() != inst.num_outcomes)
      throw ValidationError("instance file: 'baseline' length differs from Q");
    for (std::size_t t = 1; t < alpha.size(); ++t)
      if (alpha[t] <= alpha[t - 1])
        throw ValidationError("instance file: 'alpha' must be strictly increasing");
    out.single_param =
        make_single_param(alpha, baseline, inst.prior, inst.costs, inst.transitions);
    if (j.contains("v")) {
      const auto v = rational_matrix_from_json(j["v"], "v");
      if (v != out.single_param->base.valuations)
        throw ValidationError("instance file: 'v' differs from alpha x baseline");
    }
    inst = out.single_param->base;
  } else {
    if (!j.contains("v")) throw ValidationError("instance file: missing 'v'");
    inst.valuations = rational_matrix_from_json(j["v"], "v");
  }
  inst.validate();
  if (out.single_param) out.single_param->base = inst;
  return out;
}

inline Json instance_to_json(const Instance& inst,
                             const SingleParamInstance* single_param = nullptr) {
  Json j;
  j["T"] = inst.num_types;
  j["A"] = inst.num_actions;
  j["Q"] = inst.num_outcomes;
  j["mu"] = Json::array();
  for (const auto& m : inst.prior) j["mu"].push_back(rational_to_json(m));
  j["costs"] = Json::array();
  for (const auto& c : inst.costs) j["costs"].push_back(rational_to_json(c));
  j["p"] = Json::array();
  for (const auto& row : inst.transitions) {
    Json r = Json::array();
    for (const auto& p : row) r.push_back(rational_to_json(p));
    j["p"].push_back(std::move(r));
  }
  if (single_param) {
    j["alpha"] = Json::array();
    for (const auto& a : single_param->alpha) j["alpha"].push_back(rational_to_json(a));
    j["baseline"] = Json::array();
    for (const auto& b : single_param->baseline) j["baseline"].push_back(rational_to_json(b));
  }
  j["v"] = Json::array();
  for (const auto& row : inst.valuations) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    j["v"].push_back(std::move(r));
  }
  return j;
}

// Menu file schema: {"contracts":[{"action": a, "w": rational,
// "x": [rational | "EXCLUDE", ...]}, ...]}
inline IndirectMenu parse_menu(const Json& j, const Instance& inst) {
  if (!j.is_object() || !j.contains("contracts") || !j["contracts"].is_array())
    throw ValidationError("menu file: expected an object with a 'contracts' array");
  IndirectMenu menu;
  for (std::size_t k = 0; k < j["contracts"].size(); ++k) {
    const Json& cj = j["contracts"][k];
    const std::string where = "contracts[" + std::to_string(k) + "]";
    if (!cj.is_object() || !cj.contains("action") || !cj.contains("w") || !cj.contains("x"))
      throw ValidationError("menu file: " + where + " needs 'action', 'w' and 'x'");
    if (!cj["action"].is_number_integer() || cj["action"].get<std::int64_t>() < 0)
      throw ValidationError("menu file: " + where + ".action must be a nonnegative integer");
    Contract c;
    c.action = cj["action"].get<std::size_t>();
    c.upfront = rational_from_json(cj["w"], where + ".w");
    if (c.upfront < 0) throw ValidationError("menu file: " + where + ".w must be nonnegative");
    if (!cj["x"].is_array()) throw ValidationError("menu file: " + where + ".x must be an array");
    for (std::size_t q = 0; q < cj["x"].size(); ++q) {
      const Json& xj = cj["x"][q];
      if (xj.is_string() && xj.get<std::string>() == "EXCLUDE") {
        c.usage.push_back(UsagePrice::exclude());
      } else {
        const Rational x = rational_from_json(xj, where + ".x[" + std::to_string(q) + "]");
        if (x < 0)
          throw ValidationError("menu file: " + where + ".x[" + std::to_string(q) +
                                "] must be nonnegative");
        c.usage.push_back(UsagePrice(x));
      }
    }
    inst.check_contract_shape(c);
    menu.contracts.push_back(std::move(c));
  }
  return menu;
}

inline Json contract_to_json(const Contract& c) {
  Json j;
  j["action"] = c.action;
  j["w"] = rational_to_json(c.upfront);
  j["x"] = Json::array();
  for (const auto& x : c.usage)
    j["x"].push_back(x.is_exclude() ? Json("EXCLUDE") : rational_to_json(x.value()));
  return j;
}

inline Json menu_to_json(const IndirectMenu& menu) {
  Json j;
  j["contracts"] = Json::array();
  for (const auto& c : menu.contracts) j["contracts"].push_back(contract_to_json(c));
  return j;
}

inline Json diagnostics_to_json(const MenuDiagnostics& diag) {
  Json j;
  j["per_type"] = Json::array();
  for (const auto& report : diag.per_type) {
    Json r;
    r["chosen"] = report.chosen ? Json(*report.chosen) : Json("OPT_OUT");
    r["utility"] = rational_entry(report.utility);
    r["revenue"] = rational_entry(report.revenue);
    r["accepted_outcomes"] = report.accepted_outcomes;
    j["per_type"].push_back(std::move(r));
  }
  j["ic_violations"] = Json::array();
  for (const auto& [t, k] : diag.ic_violations) j["ic_violations"].push_back(Json::array({t, k}));
  j["ir_violations"] = diag.ir_violations;
  return j;
}

inline Json solve_result_to_json(const SolveResult& result) {
  Json j;
  j["regime"] = payment_regime_name(result.regime);
  j["profit"] = rational_entry(result.profit);
  j["menu"] = menu_to_json(result.menu);
  j["assignment"] = Json::array();
  for (const auto& a : result.assignment)
    j["assignment"].push_back(a ? Json(*a) : Json("OPT_OUT"));
  j["diagnostics"] = diagnostics_to_json(result.diagnostics);
  j["lps_solved"] = result.lps_solved;
  j["patterns_enumerated"] = result.patterns_enumerated;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace tariff
