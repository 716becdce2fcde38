// Command-line front end: parse instance files, dispatch solvers, emit
// human-readable and machine-readable reports.
//
// Exit codes: 0 success, 2 validation error, 3 size-guard refusal.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tariff/io.hpp"
#include "tariff/tariff.hpp"

namespace {

using namespace tariff;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(const Rational& r) {
  return tariff::to_string(r) + " (" + to_decimal_string(r) + ")";
}

std::vector<Rational> parse_rational_list(const std::vector<std::string>& parts, const char* what) {
  std::vector<Rational> out;
  for (const auto& p : parts) out.push_back(parse_rational(p));
  if (out.empty()) throw ValidationError(std::string(what) + " must be a nonempty list");
  return out;
}

void print_menu_text(std::ostream& os, const SolveResult& result) {
  for (std::size_t k = 0; k < result.menu.contracts.size(); ++k) {
    const Contract& c = result.menu.contracts[k];
    os << "  contract " << k << ": action " << c.action << ", w=" << fmt(c.upfront) << ", x=[";
    for (std::size_t q = 0; q < c.usage.size(); ++q) {
      if (q) os << ", ";
      os << (c.usage[q].is_exclude() ? std::string("EXCLUDE") : tariff::to_string(c.usage[q].value()));
    }
    os << "]\n";
  }
  os << "  assignment:";
  for (std::size_t t = 0; t < result.assignment.size(); ++t) {
    os << " type" << t << "->";
    if (result.assignment[t])
      os << "c" << *result.assignment[t];
    else
      os << "opt-out";
  }
  os << "\n";
}

SolveResult run_regime(const Instance& inst, PaymentRegime regime, const SolveOptions& options) {
  switch (regime) {
    case PaymentRegime::full: return solve_exact(inst, options);
    case PaymentRegime::upfront_only: return solve_upfront_only(inst, options);
    case PaymentRegime::usage_only: return solve_usage_only(inst, options);
    case PaymentRegime::mandatory: return solve_mandatory(inst, options);
  }
  throw ValidationError("unknown regime");
}

struct GlobalFlags {
  bool json = false;
  unsigned threads = 1;
};

int cmd_solve(const std::string& path, const std::string& regime_name, const GlobalFlags& flags) {
  const ParsedInstance parsed = parse_instance(read_json_file(path));
  PaymentRegime regime;
  if (regime_name == "full") regime = PaymentRegime::full;
  else if (regime_name == "upfront") regime = PaymentRegime::upfront_only;
  else if (regime_name == "usage") regime = PaymentRegime::usage_only;
  else if (regime_name == "mandatory") regime = PaymentRegime::mandatory;
  else throw ValidationError("unknown regime '" + regime_name + "'");

  const auto start = Clock::now();
  const SolveResult result = run_regime(parsed.instance, regime, SolveOptions{flags.threads});
  const double ms = elapsed_ms(start);

  if (flags.json) {
    Json j = solve_result_to_json(result);
    j["timing_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "regime " << payment_regime_name(result.regime) << ": profit = "
              << fmt(result.profit) << "\n";
    print_menu_text(std::cout, result);
    std::cout << "  lps_solved=" << result.lps_solved
              << " patterns=" << result.patterns_enumerated << " time=" << ms << "ms\n";
  }
  return 0;
}

int cmd_compare(const std::string& path, const GlobalFlags& flags) {
  const ParsedInstance parsed = parse_instance(read_json_file(path));
  const Instance& inst = parsed.instance;
  const Rational hmu = compute_hmu(inst.prior);

  struct Entry {
    PaymentRegime regime;
    SolveResult result;
    double ms;
  };
  std::vector<Entry> entries;
  for (PaymentRegime regime : {PaymentRegime::full, PaymentRegime::upfront_only,
                               PaymentRegime::usage_only, PaymentRegime::mandatory}) {
    const auto start = Clock::now();
    SolveResult r = run_regime(inst, regime, SolveOptions{flags.threads});
    entries.push_back(Entry{regime, std::move(r), elapsed_ms(start)});
  }
  const Rational& r_full = entries[0].result.profit;
  const Rational& r_upfront = entries[1].result.profit;
  const Rational& r_usage = entries[2].result.profit;
  const Rational& r_mandatory = entries[3].result.profit;

  const bool sandwich_eq = r_upfront == r_mandatory;
  const bool sandwich_le = r_mandatory <= r_full;
  const bool sandwich_cap = r_mandatory > 0 ? r_full <= hmu * r_mandatory : r_full >= 0;
  const bool sandwich = sandwich_eq && sandwich_le && sandwich_cap;

  if (flags.json) {
    Json j;
    j["instance"] = {{"T", inst.num_types}, {"A", inst.num_actions}, {"Q", inst.num_outcomes}};
    j["h_mu"] = rational_entry(hmu);
    j["regimes"] = Json::object();
    for (auto& e : entries) {
      Json ej = solve_result_to_json(e.result);
      ej["timing_ms"] = e.ms;
      j["regimes"][payment_regime_name(e.regime)] = std::move(ej);
    }
    j["gaps"] = Json::object();
    if (r_upfront > 0) j["gaps"]["R_over_R_upfront"] = rational_entry(r_full / r_upfront);
    if (r_usage > 0) j["gaps"]["R_over_R_usage"] = rational_entry(r_full / r_usage);
    if (r_mandatory > 0) j["gaps"]["R_over_R_mandatory"] = rational_entry(r_full / r_mandatory);
    j["sandwich"] = {{"upfront_equals_mandatory", sandwich_eq},
                     {"mandatory_le_full", sandwich_le},
                     {"full_le_hmu_mandatory", sandwich_cap},
                     {"holds", sandwich}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance: T=" << inst.num_types << " A=" << inst.num_actions
              << " Q=" << inst.num_outcomes << "\n";
    std::cout << "H_mu = " << fmt(hmu) << "\n";
    for (auto& e : entries) {
      std::cout << "R_" << payment_regime_name(e.regime) << " = " << fmt(e.result.profit)
                << "   [" << e.ms << "ms]\n";
      print_menu_text(std::cout, e.result);
    }
    if (r_upfront > 0) std::cout << "R/R_upfront = " << fmt(r_full / r_upfront) << "\n";
    if (r_usage > 0) std::cout << "R/R_usage = " << fmt(r_full / r_usage) << "\n";
    if (r_mandatory > 0) std::cout << "R/R_mandatory = " << fmt(r_full / r_mandatory) << "\n";
    std::cout << "sandwich (upfront = mandatory <= full <= H_mu * mandatory): "
              << (sandwich ? "holds" : "VIOLATED") << "\n";
  }
  return sandwich ? 0 : 2;
}

int cmd_fptas(const std::string& path, const std::string& eps_text, bool no_trim,
              const GlobalFlags& flags) {
  const ParsedInstance parsed = parse_instance(read_json_file(path));
  const Rational eps = parse_rational(eps_text);
  const auto start = Clock::now();
  const SolveResult result = fptas_solve(parsed.instance, eps, FptasOptions{!no_trim});
  const double ms = elapsed_ms(start);
  if (flags.json) {
    Json j = solve_result_to_json(result);
    j["epsilon"] = rational_entry(eps);
    j["trimming"] = !no_trim;
    j["timing_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "fptas (eps=" << tariff::to_string(eps) << (no_trim ? ", trimming off" : "")
              << "): profit >= " << fmt(result.profit) << "\n";
    print_menu_text(std::cout, result);
    std::cout << "  states=" << result.patterns_enumerated << " lps=" << result.lps_solved
              << " time=" << ms << "ms\n";
  }
  return 0;
}

int cmd_single_param(const std::string& path, const GlobalFlags& flags) {
  const ParsedInstance parsed = parse_instance(read_json_file(path));
  if (!parsed.single_param)
    throw ValidationError("single-param requires an instance file with 'alpha' and 'baseline'");
  const SingleParamInstance& sp = *parsed.single_param;
  const auto start = Clock::now();
  const BaselineBest best_value = best_action_value(sp);
  const RelaxationOptimum relax = lp_relaxation_optimum(sp);
  const SingleContractResult contract = best_single_contract(sp);
  const double ms = elapsed_ms(start);

  if (flags.json) {
    Json j;
    j["M"] = rational_entry(best_value.value);
    j["best_action"] = best_value.action;
    j["t_star"] = relax.type_index;
    j["relaxation_value"] = rational_entry(relax.value);
    j["revenue"] = rational_entry(contract.revenue);
    j["contract"] = contract_to_json(contract.menu.contracts[0]);
    j["timing_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "single-parameter instance: T=" << sp.base.num_types << "\n";
    std::cout << "M = " << fmt(best_value.value) << " at action " << best_value.action << "\n";
    std::cout << "cutoff type t* = " << relax.type_index
              << ", relaxation value = " << fmt(relax.value) << "\n";
    const Contract& c = contract.menu.contracts[0];
    std::cout << "revenue-optimal single contract: action " << c.action << ", w=" << fmt(c.upfront)
              << ", zero usage prices\n";
    std::cout << "revenue = " << fmt(contract.revenue) << "   [" << ms << "ms]\n";
  }
  return 0;
}

int cmd_reduce_partition(const std::vector<long long>& items, const GlobalFlags& flags) {
  Multiset ms{items};
  ms.validate();
  const auto start = Clock::now();
  const Instance inst = gen_partition_instance(ms);
  const SolveResult result = solve_exact(inst, SolveOptions{flags.threads});
  const double time_ms = elapsed_ms(start);
  const Rational target(9 * ms.sum(), 4);
  const bool exists = result.profit == target;

  if (flags.json) {
    Json j;
    j["items"] = items;
    j["M"] = ms.sum();
    j["profit"] = rational_entry(result.profit);
    j["target_9M_over_4"] = rational_entry(target);
    j["partition_exists"] = exists;
    j["timing_ms"] = time_ms;
    std::cout << j.dump(2) << "\n";
  } else if (exists) {
    std::cout << "PARTITION EXISTS (profit " << tariff::to_string(result.profit) << " = 9M/4)\n";
  } else {
    std::cout << "NO PARTITION (profit " << tariff::to_string(result.profit) << " < 9M/4 = "
              << tariff::to_string(target) << ")\n";
  }
  return 0;
}

int cmd_gen(const std::string& family, const std::vector<std::string>& mu_text,
            const std::vector<long long>& items, std::size_t T, std::size_t A, std::size_t Q,
            std::uint64_t seed, long long bound, const std::string& out_path) {
  Json j;
  if (family == "hmu") {
    j = instance_to_json(gen_hmu_worstcase(parse_rational_list(mu_text, "--mu")));
  } else if (family == "usage-gap") {
    j = instance_to_json(gen_usage_gap());
  } else if (family == "partition") {
    Multiset ms{items};
    ms.validate();
    j = instance_to_json(gen_partition_instance(ms));
  } else if (family == "counterexample") {
    const SingleParamInstance sp = gen_single_contract_profit_gap();
    j = instance_to_json(sp.base, &sp);
  } else if (family == "random") {
    j = instance_to_json(gen_random(T, A, Q, seed, bound));
  } else {
    throw ValidationError("unknown family '" + family +
                          "' (expected hmu|usage-gap|partition|counterexample|random)");
  }
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_json_file(out_path, j);
  return 0;
}

int cmd_check_menu(const std::string& inst_path, const std::string& menu_path,
                   const std::string& regime_name, const GlobalFlags& flags) {
  const ParsedInstance parsed = parse_instance(read_json_file(inst_path));
  const Instance& inst = parsed.instance;
  const IndirectMenu menu = parse_menu(read_json_file(menu_path), inst);
  const Regime regime = regime_name == "mandatory" ? Regime::mandatory : Regime::voluntary;

  if (menu.contracts.size() == inst.num_types) {
    const DirectMenu direct{menu.contracts};
    const MenuDiagnostics diag = validate_menu(direct, inst, regime);
    Json j;
    j["kind"] = "direct";
    j["regime"] = regime_name;
    j["diagnostics"] = diagnostics_to_json(diag);
    if (diag.clean()) {
      const Rational profit = direct_menu_profit(direct, inst, regime);
      j["valid"] = true;
      j["profit"] = rational_entry(profit);
      if (flags.json) std::cout << j.dump(2) << "\n";
      else std::cout << "menu is IC and IR; profit = " << fmt(profit) << "\n";
      return 0;
    }
    j["valid"] = false;
    if (flags.json) {
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& [t, k] : diag.ic_violations)
        std::cout << "IC violated: type " << t << " strictly prefers contract " << k << "\n";
      for (const auto t : diag.ir_violations)
        std::cout << "IR violated: type " << t << " has negative utility\n";
    }
    std::cerr << "menu violates IC/IR constraints\n";
    return 2;
  }

  if (regime == Regime::mandatory)
    throw ValidationError("mandatory check needs a direct menu (one contract per type)");
  const IndirectOutcome outcome = indirect_choice_and_profit(menu, inst);
  if (flags.json) {
    Json j;
    j["kind"] = "indirect";
    j["profit"] = rational_entry(outcome.profit);
    j["choices"] = Json::array();
    for (const auto& c : outcome.choices) j["choices"].push_back(c ? Json(*c) : Json("OPT_OUT"));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "indirect menu; profit = " << fmt(outcome.profit) << "\n";
    for (std::size_t t = 0; t < outcome.choices.size(); ++t) {
      std::cout << "  type " << t << " -> ";
      if (outcome.choices[t]) std::cout << "contract " << *outcome.choices[t] << "\n";
      else std::cout << "opt-out\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tariff: exact and approximate solvers for two-part tariff contract menus"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_flag("--json", flags.json, "machine-readable output");
  app.add_option("--threads", flags.threads, "solver-internal parallelism")->default_val(1);

  std::string file, menu_file, regime = "full", eps = "1/10", family, out_path;
  std::string check_regime = "voluntary";
  bool no_trim = false;
  std::vector<std::string> mu_text;
  std::vector<long long> items;
  std::size_t T = 2, A = 1, Q = 2;
  std::uint64_t seed = 0;
  long long bound = 10;

  auto* solve = app.add_subcommand("solve", "solve one payment regime exactly");
  solve->add_option("file", file)->required();
  solve->add_option("--regime", regime)->check(CLI::IsMember({"full", "upfront", "usage", "mandatory"}));
  solve->fallthrough();

  auto* compare = app.add_subcommand("compare", "solve all four regimes and check the sandwich");
  compare->add_option("file", file)->required();
  compare->fallthrough();

  auto* fptas = app.add_subcommand("fptas", "trimmed dynamic-program approximation");
  fptas->add_option("file", file)->required();
  fptas->add_option("--eps", eps, "approximation parameter in (0,1)")->required();
  fptas->add_flag("--no-trim", no_trim, "disable trimming (exact dynamic program)");
  fptas->fallthrough();

  auto* single = app.add_subcommand("single-param", "single-parameter revenue machinery");
  single->add_option("file", file)->required();
  single->fallthrough();

  auto* reduce = app.add_subcommand("reduce-partition", "decide an equal-sum split via the reduction");
  reduce->add_option("--items", items, "comma-separated positive integers")->required()->delimiter(',');
  reduce->fallthrough();

  auto* gen = app.add_subcommand("gen", "generate a named instance family");
  gen->add_option("family", family)->required()
      ->check(CLI::IsMember({"hmu", "usage-gap", "partition", "counterexample", "random"}));
  gen->add_option("--mu", mu_text, "prior, comma-separated rationals")->delimiter(',');
  gen->add_option("--items", items, "multiset items, comma-separated")->delimiter(',');
  gen->add_option("--T", T);
  gen->add_option("--A", A);
  gen->add_option("--Q", Q);
  gen->add_option("--seed", seed);
  gen->add_option("--bound", bound);
  gen->add_option("-o,--output", out_path, "output file (stdout when omitted)");
  gen->fallthrough();

  auto* check = app.add_subcommand("check-menu", "validate a menu file against an instance");
  check->add_option("file", file)->required();
  check->add_option("menu", menu_file)->required();
  check->add_option("--regime", check_regime)->check(CLI::IsMember({"voluntary", "mandatory"}));
  check->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(file, regime, flags);
    if (compare->parsed()) return cmd_compare(file, flags);
    if (fptas->parsed()) return cmd_fptas(file, eps, no_trim, flags);
    if (single->parsed()) return cmd_single_param(file, flags);
    if (reduce->parsed()) return cmd_reduce_partition(items, flags);
    if (gen->parsed()) return cmd_gen(family, mu_text, items, T, A, Q, seed, bound, out_path);
    if (check->parsed()) return cmd_check_menu(file, menu_file, check_regime, flags);
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
