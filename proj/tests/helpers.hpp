#pragma once

// Shared test utilities: seeded random menus/states and menu-to-state
// conversion used across the suites.

#include <cstdint>
#include <vector>

#include "tariff/instances.hpp"
#include "tariff/model.hpp"
#include "tariff/state.hpp"

namespace tariff::testing {

using tariff::detail::SplitMix64;

// State of a direct menu: s[t][k] = V(t; C^k) (general usage prices).
inline StateVector state_from_menu(const DirectMenu& menu, const Instance& inst) {
  StateVector s = StateVector::zeros(inst.num_types);
  for (std::size_t t = 0; t < inst.num_types; ++t)
    for (std::size_t k = 0; k < menu.contracts.size(); ++k)
      s.values[t][k] = contract_value(t, menu.contracts[k], inst);
  return s;
}

inline std::vector<std::size_t> random_actions(SplitMix64& rng, const Instance& inst) {
  std::vector<std::size_t> acts(inst.num_types);
  for (auto& a : acts)
    a = static_cast<std::size_t>(rng.range(0, static_cast<long long>(inst.num_actions) - 1));
  return acts;
}

// Random usage-price vector: roughly a quarter EXCLUDE, the rest small
// rationals (halves) up to just above the valuation bound.
inline std::vector<UsagePrice> random_usage(SplitMix64& rng, std::size_t num_outcomes,
                                            long long bound) {
  std::vector<UsagePrice> usage(num_outcomes);
  for (auto& x : usage) {
    if (rng.range(0, 3) == 0)
      x = UsagePrice::exclude();
    else
      x = UsagePrice(Rational(rng.range(0, 2 * bound + 2), 2));
  }
  return usage;
}

// Random IC + IR direct menu: random actions and usage prices, upfront
// prices from the maximal feasible pricing of the resulting value state.
// Falls back to a shared zero-usage contract when the drawn prices admit no
// IC prices (always feasible).
inline DirectMenu random_ic_menu(SplitMix64& rng, const Instance& inst, long long bound) {
  for (int attempt = 0; attempt < 12; ++attempt) {
    DirectMenu menu;
    for (std::size_t t = 0; t < inst.num_types; ++t) {
      const auto a = static_cast<std::size_t>(rng.range(0, static_cast<long long>(inst.num_actions) - 1));
      menu.contracts.emplace_back(a, Rational(0), random_usage(rng, inst.num_outcomes, bound));
    }
    const StateVector s = state_from_menu(menu, inst);
    std::vector<std::size_t> acts(inst.num_types);
    for (std::size_t t = 0; t < inst.num_types; ++t) acts[t] = menu.contracts[t].action;
    const PricingResult priced = price_served_menu(s, acts, inst, std::vector<bool>(inst.num_types, true));
    if (!priced.feasible) continue;
    for (std::size_t t = 0; t < inst.num_types; ++t) menu.contracts[t].upfront = priced.upfront[t];
    return menu;
  }
  DirectMenu menu;
  const Contract shared = Contract::with_zero_usage(0, Rational(0), inst.num_outcomes);
  menu.contracts.assign(inst.num_types, shared);
  return menu;
}

// Random nonnegative state with small rational entries.
inline StateVector random_state(SplitMix64& rng, std::size_t num_types, long long bound) {
  StateVector s = StateVector::zeros(num_types);
  for (auto& row : s.values)
    for (auto& v : row) v = Rational(rng.range(0, 2 * bound), 2);
  return s;
}

}  // namespace tariff::testing
