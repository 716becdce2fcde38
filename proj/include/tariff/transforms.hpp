#pragma once

// Menu normalization transforms. Each one preserves the quantities stated in
// its contract exactly (rational arithmetic, no tolerance).

#include <algorithm>
#include <vector>

#include "tariff/model.hpp"

namespace tariff {

inline bool menu_in_two_price_form(const DirectMenu& menu) {
  return std::all_of(menu.contracts.begin(), menu.contracts.end(),
                     [](const Contract& c) { return c.two_price_form(); });
}

// Redistributes accepted usage prices into the upfront price:
//   S^t = {q : v^t_q >= x^t_q},  w^t += sum_{q in S^t} p^{a^t}_q x^t_q,
//   x^t_q <- 0 on S^t and EXCLUDE off S^t.
// Own utilities and seller profit are unchanged; other types' utilities can
// only drop, so IC is preserved (and IR carries over whenever it held).
// Requires an IC input menu.
inline DirectMenu normalize_two_prices(const DirectMenu& menu, const Instance& inst) {
  MenuDiagnostics diag = validate_menu(menu, inst, Regime::voluntary);
  if (!diag.ic_violations.empty())
    throw MenuError("normalize_two_prices requires an IC menu", std::move(diag));

  DirectMenu out;
  out.contracts.reserve(menu.contracts.size());
  for (std::size_t t = 0; t < menu.contracts.size(); ++t) {
    const Contract& c = menu.contracts[t];
    const auto& p = inst.transitions[c.action];
    const auto& v = inst.valuations[t];
    Rational upfront = c.upfront;
    std::vector<UsagePrice> usage(inst.num_outcomes, UsagePrice::exclude());
    for (std::size_t q = 0; q < inst.num_outcomes; ++q) {
      const auto& x = c.usage[q];
      if (x.is_exclude() || v[q] < x.value()) continue;
      upfront += p[q] * x.value();
      usage[q] = UsagePrice(Rational(0));
    }
    out.contracts.emplace_back(c.action, std::move(upfront), std::move(usage));
  }
  return out;
}

// Gives the argmax-w contracts all-zero usage prices; any type that then
// strictly prefers one of them is handed that contract instead. Input must
// be IC and in {0, EXCLUDE} form.
inline DirectMenu zero_usage_for_highest(const DirectMenu& menu, const Instance& inst) {
  if (!menu_in_two_price_form(menu))
    throw ValidationError("zero_usage_for_highest requires usage prices in {0, EXCLUDE}");
  MenuDiagnostics diag = validate_menu(menu, inst, Regime::voluntary);
  if (!diag.ic_violations.empty())
    throw MenuError("zero_usage_for_highest requires an IC menu", std::move(diag));

  const std::size_t n = menu.contracts.size();
  Rational max_w = menu.contracts.empty() ? Rational(0) : menu.contracts[0].upfront;
  for (const auto& c : menu.contracts) max_w = std::max(max_w, c.upfront);

  DirectMenu out = menu;
  std::vector<std::size_t> highest;
  for (std::size_t t = 0; t < n; ++t) {
    if (menu.contracts[t].upfront == max_w) {
      highest.push_back(t);
      out.contracts[t] =
          Contract::with_zero_usage(menu.contracts[t].action, menu.contracts[t].upfront, inst.num_outcomes);
    }
  }

  // Re-point every type that now strictly prefers a zeroed highest contract;
  // among several, take the utility-max (ties: smallest cost, lowest index).
  DirectMenu result = out;
  for (std::size_t t = 0; t < n; ++t) {
    Rational own = buyer_utility_voluntary(t, out.contracts[t], inst);
    std::optional<std::size_t> pick;
    Rational pick_util = own;
    Rational pick_cost = 0;
    for (std::size_t h : highest) {
      if (h == t) continue;
      const Rational u = buyer_utility_voluntary(t, out.contracts[h], inst);
      const Rational cost = inst.costs[out.contracts[h].action];
      if (u > pick_util || (pick && u == pick_util && cost < pick_cost)) {
        pick = h;
        pick_util = u;
        pick_cost = cost;
      }
    }
    if (pick) result.contracts[t] = out.contracts[*pick];
  }
  return result;
}

// Mandatory-usage payment redistribution: w^t += sum_q p^{a^t}_q x^t_q and
// x^t <- 0. Mandatory utilities and profit are unchanged, and on the output
// the mandatory and voluntary evaluations coincide.
inline DirectMenu mandatory_to_upfront(const DirectMenu& menu, const Instance& inst) {
  DirectMenu out;
  out.contracts.reserve(menu.contracts.size());
  for (const Contract& c : menu.contracts) {
    inst.check_contract_shape(c);
    const auto& p = inst.transitions[c.action];
    Rational upfront = c.upfront;
    for (std::size_t q = 0; q < inst.num_outcomes; ++q) {
      if (c.usage[q].is_exclude())
        throw ValidationError("mandatory_to_upfront requires finite usage prices (outcome " +
                              std::to_string(q) + ")");
      upfront += p[q] * c.usage[q].value();
    }
    out.contracts.push_back(Contract::with_zero_usage(c.action, std::move(upfront), inst.num_outcomes));
  }
  return out;
}

}  // namespace tariff
