#pragma once

// Problem primitives: instances, contracts, menus, buyer utilities,
// IC/IR validation and profit evaluation. Everything is exact rational
// arithmetic; all functions are pure.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tariff/rational.hpp"

namespace tariff {

// Whether the buyer may reject the realized outcome (voluntary) or must
// accept and pay for it (mandatory).
enum class Regime { voluntary, mandatory };

// A usage price is either a nonnegative rational or EXCLUDE, the sentinel
// for a price that bars every type from accepting the outcome.
class UsagePrice {
 public:
  UsagePrice() : excluded_(false), value_(0) {}
  UsagePrice(Rational value) : excluded_(false), value_(std::move(value)) {
    if (value_ < 0) throw ValidationError("usage price must be nonnegative");
  }
  UsagePrice(int value) : UsagePrice(Rational(value)) {}

  static UsagePrice exclude() {
    UsagePrice p;
    p.excluded_ = true;
    return p;
  }

  bool is_exclude() const { return excluded_; }
  const Rational& value() const {
    if (excluded_) throw std::logic_error("EXCLUDE usage price has no finite value");
    return value_;
  }

  friend bool operator==(const UsagePrice& a, const UsagePrice& b) {
    if (a.excluded_ != b.excluded_) return false;
    return a.excluded_ || a.value_ == b.value_;
  }

 private:
  bool excluded_;
  Rational value_;
};

// One contract: an action, an upfront price, and per-outcome usage prices.
struct Contract {
  std::size_t action = 0;
  Rational upfront;
  std::vector<UsagePrice> usage;

  Contract() = default;
  Contract(std::size_t a, Rational w, std::vector<UsagePrice> x)
      : action(a), upfront(std::move(w)), usage(std::move(x)) {
    if (upfront < 0) throw ValidationError("upfront price must be nonnegative");
  }

  // All-zero usage prices.
  static Contract with_zero_usage(std::size_t a, Rational w, std::size_t num_outcomes) {
    return Contract(a, std::move(w), std::vector<UsagePrice>(num_outcomes, UsagePrice(Rational(0))));
  }

  bool two_price_form() const {
    for (const auto& x : usage)
      if (!x.is_exclude() && x.value() != 0) return false;
    return true;
  }
};

struct Instance {
  std::size_t num_types = 0;
  std::size_t num_outcomes = 0;
  std::size_t num_actions = 0;
  std::vector<Rational> prior;                    // length T, positive, sums to 1
  std::vector<Rational> costs;                    // length A, nonnegative
  std::vector<std::vector<Rational>> transitions; // A x Q, rows sum to 1
  std::vector<std::vector<Rational>> valuations;  // T x Q, nonnegative

  void validate() const {
    if (num_types == 0) throw ValidationError("instance needs at least one type");
    if (num_outcomes == 0) throw ValidationError("instance needs at least one outcome");
    if (num_actions == 0) throw ValidationError("instance needs at least one action");
    if (prior.size() != num_types) throw ValidationError("prior length differs from T");
    if (costs.size() != num_actions) throw ValidationError("costs length differs from A");
    if (transitions.size() != num_actions) throw ValidationError("transition row count differs from A");
    if (valuations.size() != num_types) throw ValidationError("valuation row count differs from T");
    Rational total = 0;
    for (std::size_t t = 0; t < num_types; ++t) {
      if (prior[t] <= 0)
        throw ValidationError("prior entry " + std::to_string(t) + " must be positive");
      total += prior[t];
    }
    if (total != 1) throw ValidationError("prior sums to " + tariff::to_string(total) + ", expected 1");
    for (std::size_t a = 0; a < num_actions; ++a) {
      if (costs[a] < 0) throw ValidationError("cost of action " + std::to_string(a) + " is negative");
      if (transitions[a].size() != num_outcomes)
        throw ValidationError("transition row " + std::to_string(a) + " length differs from Q");
      Rational row = 0;
      for (const auto& p : transitions[a]) {
        if (p < 0 || p > 1)
          throw ValidationError("transition row " + std::to_string(a) + " has an entry outside [0,1]");
        row += p;
      }
      if (row != 1)
        throw ValidationError("transition row " + std::to_string(a) + " sums to " +
                              tariff::to_string(row) + ", expected 1");
    }
    for (std::size_t t = 0; t < num_types; ++t) {
      if (valuations[t].size() != num_outcomes)
        throw ValidationError("valuation row " + std::to_string(t) + " length differs from Q");
      for (const auto& v : valuations[t])
        if (v < 0) throw ValidationError("valuation row " + std::to_string(t) + " has a negative entry");
    }
  }

  void check_type(std::size_t t) const {
    if (t >= num_types) throw std::out_of_range("type index " + std::to_string(t) + " out of range");
  }
  void check_contract_shape(const Contract& c) const {
    if (c.action >= num_actions)
      throw std::out_of_range("action index " + std::to_string(c.action) + " out of range");
    if (c.usage.size() != num_outcomes)
      throw ValidationError("contract has " + std::to_string(c.usage.size()) +
                            " usage prices, expected " + std::to_string(num_outcomes));
  }
};

// Direct menu: contract t is intended for type t; length equals T.
struct DirectMenu {
  std::vector<Contract> contracts;
};

// Indirect menu: any number of contracts; the zero-cost, zero-payment,
// zero-value opt-out option is always available and never stored.
struct IndirectMenu {
  std::vector<Contract> contracts;
};

struct MenuDiagnostics {
  struct TypeReport {
    std::optional<std::size_t> chosen;  // contract index, nullopt = opt-out
    Rational utility;
    Rational revenue;                   // seller profit contribution w - c + usage revenue
    std::vector<std::size_t> accepted_outcomes;
  };
  std::vector<TypeReport> per_type;
  std::vector<std::pair<std::size_t, std::size_t>> ic_violations;  // (t, strictly preferred t')
  std::vector<std::size_t> ir_violations;

  bool clean() const { return ic_violations.empty() && ir_violations.empty(); }
};

// Profit evaluation refused because the menu is not IC/IR.
class MenuError : public ValidationError {
 public:
  MenuError(const std::string& what, MenuDiagnostics diagnostics)
      : ValidationError(what), diagnostics(std::move(diagnostics)) {}
  MenuDiagnostics diagnostics;
};

// Buyer surplus before the upfront price: V(t;C) = U(t;C) + w
// = sum_q p^a_q * max(v^t_q - x_q, 0), with EXCLUDE terms contributing 0.
// On {0, EXCLUDE} contracts this is sum of p*v over the priced-at-zero outcomes.
inline Rational contract_value(std::size_t t, const Contract& contract, const Instance& inst) {
  inst.check_type(t);
  inst.check_contract_shape(contract);
  const auto& p = inst.transitions[contract.action];
  const auto& v = inst.valuations[t];
  Rational value = 0;
  for (std::size_t q = 0; q < inst.num_outcomes; ++q) {
    const auto& x = contract.usage[q];
    if (x.is_exclude()) continue;
    if (v[q] >= x.value()) value += p[q] * (v[q] - x.value());
  }
  return value;
}

inline Rational buyer_utility_voluntary(std::size_t t, const Contract& contract, const Instance& inst) {
  return contract_value(t, contract, inst) - contract.upfront;
}

// Forced acceptance of every outcome; EXCLUDE entries are meaningless here.
inline Rational buyer_utility_mandatory(std::size_t t, const Contract& contract, const Instance& inst) {
  inst.check_type(t);
  inst.check_contract_shape(contract);
  const auto& p = inst.transitions[contract.action];
  const auto& v = inst.valuations[t];
  Rational u = -contract.upfront;
  for (std::size_t q = 0; q < inst.num_outcomes; ++q) {
    const auto& x = contract.usage[q];
    if (x.is_exclude())
      throw ValidationError("mandatory usage is undefined for an EXCLUDE price (outcome " +
                            std::to_string(q) + ")");
    u += p[q] * (v[q] - x.value());
  }
  return u;
}

inline Rational buyer_utility(std::size_t t, const Contract& contract, const Instance& inst, Regime regime) {
  return regime == Regime::voluntary ? buyer_utility_voluntary(t, contract, inst)
                                     : buyer_utility_mandatory(t, contract, inst);
}

// Outcomes type t accepts under the contract (ties v == x accept).
inline std::vector<std::size_t> accepted_outcomes(std::size_t t, const Contract& contract,
                                                  const Instance& inst) {
  inst.check_type(t);
  inst.check_contract_shape(contract);
  std::vector<std::size_t> accepted;
  for (std::size_t q = 0; q < inst.num_outcomes; ++q) {
    const auto& x = contract.usage[q];
    if (!x.is_exclude() && inst.valuations[t][q] >= x.value()) accepted.push_back(q);
  }
  return accepted;
}

// Seller profit contribution when type t holds the contract.
inline Rational type_profit_contribution(std::size_t t, const Contract& contract,
                                         const Instance& inst, Regime regime) {
  inst.check_type(t);
  inst.check_contract_shape(contract);
  const auto& p = inst.transitions[contract.action];
  Rational r = contract.upfront - inst.costs[contract.action];
  for (std::size_t q = 0; q < inst.num_outcomes; ++q) {
    const auto& x = contract.usage[q];
    if (regime == Regime::mandatory) {
      if (x.is_exclude())
        throw ValidationError("mandatory usage is undefined for an EXCLUDE price (outcome " +
                              std::to_string(q) + ")");
      r += p[q] * x.value();
    } else if (!x.is_exclude() && inst.valuations[t][q] >= x.value()) {
      r += p[q] * x.value();
    }
  }
  return r;
}

// Lists every violated IC pair (t, t') and every violated IR type, plus the
// per-type report (chosen = utility-maximizing option under the pinned
// tie-break; equals t's own contract whenever the menu is IC and ties allow).
inline MenuDiagnostics validate_menu(const DirectMenu& menu, const Instance& inst, Regime regime) {
  if (menu.contracts.size() != inst.num_types)
    throw ValidationError("direct menu has " + std::to_string(menu.contracts.size()) +
                          " contracts, expected " + std::to_string(inst.num_types));
  for (const auto& c : menu.contracts) inst.check_contract_shape(c);

  MenuDiagnostics diag;
  diag.per_type.resize(inst.num_types);
  const std::size_t n = menu.contracts.size();
  std::vector<std::vector<Rational>> util(inst.num_types, std::vector<Rational>(n));
  for (std::size_t t = 0; t < inst.num_types; ++t)
    for (std::size_t k = 0; k < n; ++k) util[t][k] = buyer_utility(t, menu.contracts[k], inst, regime);

  for (std::size_t t = 0; t < inst.num_types; ++t) {
    for (std::size_t k = 0; k < n; ++k)
      if (k != t && util[t][t] < util[t][k]) diag.ic_violations.emplace_back(t, k);
    if (util[t][t] < 0) diag.ir_violations.push_back(t);

    auto& report = diag.per_type[t];
    report.utility = util[t][t];
    report.revenue = type_profit_contribution(t, menu.contracts[t], inst, regime);
    report.accepted_outcomes = regime == Regime::voluntary
                                   ? accepted_outcomes(t, menu.contracts[t], inst)
                                   : [&] {
                                       std::vector<std::size_t> all(inst.num_outcomes);
                                       for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
                                       return all;
                                     }();
    // Utility-maximizing option including opt-out; among ties pick the one
    // with the largest w - c(a), then the lowest index (opt-out lowest).
    std::optional<std::size_t> chosen;
    Rational best_util = 0;
    Rational best_margin = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Rational margin = menu.contracts[k].upfront - inst.costs[menu.contracts[k].action];
      if (util[t][k] > best_util || (util[t][k] == best_util && margin > best_margin)) {
        chosen = k;
        best_util = util[t][k];
        best_margin = margin;
      }
    }
    report.chosen = chosen;
  }
  return diag;
}

// Expected seller profit of an IC and IR direct menu (objective of the
// direct formulation). Refuses non-IC/IR menus.
inline Rational direct_menu_profit(const DirectMenu& menu, const Instance& inst, Regime regime) {
  MenuDiagnostics diag = validate_menu(menu, inst, regime);
  if (!diag.clean()) {
    std::string what = "menu is not";
    if (!diag.ic_violations.empty()) what += " IC";
    if (!diag.ir_violations.empty()) what += diag.ic_violations.empty() ? " IR" : "/IR";
    throw MenuError(what, std::move(diag));
  }
  Rational profit = 0;
  for (std::size_t t = 0; t < inst.num_types; ++t)
    profit += inst.prior[t] * type_profit_contribution(t, menu.contracts[t], inst, regime);
  return profit;
}

struct IndirectOutcome {
  std::vector<std::optional<std::size_t>> choices;  // nullopt = opt-out
  Rational profit;
};

// Every type picks a utility-maximizing option from the menu plus the
// implicit opt-out (utility 0). Ties: largest w - c(a) first, then the
// lowest index, with opt-out counting as the lowest index of all.
inline IndirectOutcome indirect_choice_and_profit(const IndirectMenu& menu, const Instance& inst) {
  for (const auto& c : menu.contracts) inst.check_contract_shape(c);
  IndirectOutcome out;
  out.choices.resize(inst.num_types);
  out.profit = 0;
  for (std::size_t t = 0; t < inst.num_types; ++t) {
    std::optional<std::size_t> choice;  // start at opt-out
    Rational best_util = 0;
    Rational best_margin = 0;
    for (std::size_t k = 0; k < menu.contracts.size(); ++k) {
      const Rational u = buyer_utility_voluntary(t, menu.contracts[k], inst);
      const Rational margin = menu.contracts[k].upfront - inst.costs[menu.contracts[k].action];
      if (u > best_util || (u == best_util && margin > best_margin)) {
        choice = k;
        best_util = u;
        best_margin = margin;
      }
    }
    out.choices[t] = choice;
    if (choice)
      out.profit += inst.prior[t] *
                    type_profit_contribution(t, menu.contracts[*choice], inst, Regime::voluntary);
  }
  return out;
}

}  // namespace tariff
