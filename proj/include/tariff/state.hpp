#pragma once

// Value states and the two pricing programs built on them: optimal upfront
// prices for a direct menu (IC/IR difference-constraint system) and the
// indirect-menu profit of a state via enumeration of assignment functions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tariff/lp.hpp"
#include "tariff/model.hpp"

namespace tariff {

// T x T matrix of contract values, s[t][t'] = V(t; C^{t'}).
struct StateVector {
  std::size_t num_types = 0;
  std::vector<std::vector<Rational>> values;

  static StateVector zeros(std::size_t num_types) {
    StateVector s;
    s.num_types = num_types;
    s.values.assign(num_types, std::vector<Rational>(num_types, Rational(0)));
    return s;
  }

  const Rational& at(std::size_t t, std::size_t k) const { return values[t][k]; }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.num_types == b.num_types && a.values == b.values;
  }
  friend bool operator<(const StateVector& a, const StateVector& b) { return a.values < b.values; }
};

struct PricingResult {
  bool feasible = false;
  std::vector<Rational> upfront;  // per served type (empty entries for excluded types)
  Rational profit;
  std::vector<bool> served;
};

// Maximal IC/IR upfront prices for the served types of a direct menu with
// the given value state. The constraint system
//     w^t <= V(t;t)                                (IR)
//     w^t <= w^t' + V(t;t) - V(t;t')               (IC, served pair)
//     w^t' >= V(u;t'), w >= 0                      (u excluded, t' served)
// is a difference system, so the profit-maximal point (every prior weight is
// positive) is the componentwise maximum: shortest paths from a virtual
// source, then a lower-bound feasibility check. `extra` adds a constant
// per-type profit term (usage revenue) to the reported profit.
inline PricingResult price_served_menu(const StateVector& s, const std::vector<std::size_t>& actions,
                                       const Instance& inst, const std::vector<bool>& served,
                                       const std::vector<Rational>* extra = nullptr) {
  const std::size_t n = s.num_types;
  PricingResult out;
  out.served = served;
  out.upfront.assign(n, Rational(0));

  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < n; ++t)
    if (served[t]) idx.push_back(t);

  // Bellman-Ford on the served nodes; dist starts at the IR bound (the
  // virtual source edge) and one extra pass detects negative IC cycles.
  std::vector<Rational> dist(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) dist[i] = s.at(idx[i], idx[i]);
  auto relax_all = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (i == j) continue;
        // w^{idx[i]} <= w^{idx[j]} + V(i;i) - V(i;j)
        const Rational cand = dist[j] + s.at(idx[i], idx[i]) - s.at(idx[i], idx[j]);
        if (cand < dist[i]) {
          dist[i] = cand;
          changed = true;
        }
      }
    }
    return changed;
  };
  for (std::size_t round = 1; round < idx.size(); ++round)
    if (!relax_all()) break;
  if (relax_all()) return out;  // negative IC cycle: no feasible prices

  // Lower bounds: prices stay nonnegative and keep excluded types out.
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Rational low = 0;
    for (std::size_t u = 0; u < n; ++u)
      if (!served[u] && s.at(u, idx[i]) > low) low = s.at(u, idx[i]);
    if (dist[i] < low) return out;
  }

  out.feasible = true;
  out.profit = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const std::size_t t = idx[i];
    out.upfront[t] = dist[i];
    Rational contribution = dist[i] - inst.costs[actions[t]];
    if (extra) contribution += (*extra)[t];
    out.profit += inst.prior[t] * contribution;
  }
  return out;
}

// Optimal upfront prices with every type served (the direct pricing program
// with objective E_t[w^t - c(a^t)]). Can be infeasible when the state's IC
// differences admit no prices.
inline PricingResult optimal_upfront_direct(const StateVector& s, const std::vector<std::size_t>& actions,
                                            const Instance& inst) {
  if (s.num_types != inst.num_types || actions.size() != inst.num_types)
    throw ValidationError("state/action dimensions differ from the instance");
  for (auto a : actions)
    if (a >= inst.num_actions) throw std::out_of_range("action index out of range");
  return price_served_menu(s, actions, inst, std::vector<bool>(inst.num_types, true));
}

// The same program expressed as an explicit LinearProgram over the prices
// (objective E_t[w^t], without the constant cost term); used to cross-check
// the shortest-path route against the simplex.
inline LinearProgram upfront_pricing_lp(const StateVector& s, const Instance& inst) {
  const std::size_t n = s.num_types;
  LinearProgram lp(n);
  for (std::size_t t = 0; t < n; ++t) {
    lp.objective[t] = inst.prior[t];
    lp.lower[t] = Rational(0);
    lp.upper[t] = s.at(t, t);  // IR
    for (std::size_t k = 0; k < n; ++k) {
      if (k == t) continue;
      std::vector<Rational> row(n, Rational(0));
      row[t] = 1;
      row[k] = -1;
      lp.add_row(std::move(row), Relation::le, s.at(t, t) - s.at(t, k));
    }
  }
  return lp;
}

struct IndirectProfit {
  Rational profit;
  std::vector<Rational> upfront;                       // one price per contract
  std::vector<std::optional<std::size_t>> assignment;  // type -> contract or opt-out
  std::uint64_t lps_solved = 0;
};

// pi_indirect(s): maximum seller profit over upfront prices of an indirect
// menu whose values are the state. Enumerates every assignment
// u : types -> {opt-out} + contracts ((T+1)^T of them, lexicographic with
// opt-out first) and solves a linear program per assignment:
//     max  E_t[ w^{u(t)} - c(a^{u(t)}) ]
//     s.t. w^{u(t)} <= w^k + s[t][u(t)] - s[t][k]   for all t served, all k
//          w^{u(t)} <= s[t][u(t)]                   for all t served
//          w^k >= s[t][k]                           for all t opted out, all k
//          w >= 0
// Profit ties across assignments break to the lexicographically smallest u.
inline IndirectProfit indirect_profit_of_state(const StateVector& s,
                                               const std::vector<std::size_t>& actions,
                                               const Instance& inst) {
  const std::size_t n = s.num_types;
  if (n != inst.num_types || actions.size() != n)
    throw ValidationError("state/action dimensions differ from the instance");
  if (n > 6) throw GuardError("indirect profit enumeration refuses more than 6 types");

  IndirectProfit best;
  best.profit = 0;
  bool have = false;

  std::vector<std::size_t> u(n, 0);  // 0 = opt-out, k+1 = contract k
  for (;;) {
    LinearProgram lp(n);
    for (std::size_t k = 0; k < n; ++k) lp.lower[k] = Rational(0);
    Rational cost_term = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (u[t] == 0) {
        for (std::size_t k = 0; k < n; ++k) {
          std::vector<Rational> row(n, Rational(0));
          row[k] = -1;
          lp.add_row(std::move(row), Relation::le, -s.at(t, k));  // w^k >= s[t][k]
        }
      } else {
        const std::size_t c = u[t] - 1;
        lp.objective[c] += inst.prior[t];
        cost_term += inst.prior[t] * inst.costs[actions[c]];
        if (!lp.upper[c] || s.at(t, c) < *lp.upper[c]) lp.upper[c] = s.at(t, c);  // IR
        for (std::size_t k = 0; k < n; ++k) {
          if (k == c) continue;
          std::vector<Rational> row(n, Rational(0));
          row[c] = 1;
          row[k] = -1;
          lp.add_row(std::move(row), Relation::le, s.at(t, c) - s.at(t, k));
        }
      }
    }

    const LpResult res = solve_lp(lp);
    ++best.lps_solved;
    if (res.status == LpStatus::optimal) {
      const Rational profit = res.value - cost_term;
      if (!have || profit > best.profit) {
        have = true;
        best.profit = profit;
        best.upfront = res.solution;
        best.assignment.assign(n, std::nullopt);
        for (std::size_t t = 0; t < n; ++t)
          if (u[t] != 0) best.assignment[t] = u[t] - 1;
      }
    }

    // next assignment in lexicographic order (last type least significant)
    std::size_t pos = n;
    while (pos > 0) {
      if (++u[pos - 1] <= n) break;
      u[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }

  if (!have) {
    // The all-opt-out assignment is always feasible, so this cannot happen;
    // keep a defensive default of zero profit anyway.
    best.assignment.assign(n, std::nullopt);
    best.upfront.assign(n, Rational(0));
  }
  return best;
}

}  // namespace tariff
