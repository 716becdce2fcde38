#pragma once

// Brute-force exact optima for the four payment regimes. The search space
// for the full two-part tariff is actions^T x {0,EXCLUDE}^(T*Q): two usage
// prices are enough, so this enumeration is lossless. An empty priced-at-zero
// set stands for "type not served": it contributes nothing, costs nothing,
// and every served contract must be priced out of that type's reach. This
// matches the indirect-menu profit with its implicit opt-out contract.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tariff/model.hpp"
#include "tariff/state.hpp"

namespace tariff {

enum class PaymentRegime { full, upfront_only, usage_only, mandatory };

inline const char* payment_regime_name(PaymentRegime r) {
  switch (r) {
    case PaymentRegime::full: return "full";
    case PaymentRegime::upfront_only: return "upfront";
    case PaymentRegime::usage_only: return "usage";
    case PaymentRegime::mandatory: return "mandatory";
  }
  return "?";
}

struct SolveResult {
  PaymentRegime regime = PaymentRegime::full;
  Rational profit;
  IndirectMenu menu;                                   // offered contracts (served types)
  std::vector<std::optional<std::size_t>> assignment;  // type -> menu index, nullopt = opt-out
  MenuDiagnostics diagnostics;
  std::uint64_t lps_solved = 0;
  std::uint64_t patterns_enumerated = 0;
};

struct SolveOptions {
  unsigned threads = 1;
};

// Per-type report for a witness menu under a fixed assignment; violations
// are filled in when the assignment is not actually utility-maximal.
inline MenuDiagnostics witness_diagnostics(const IndirectMenu& menu,
                                           const std::vector<std::optional<std::size_t>>& assignment,
                                           const Instance& inst) {
  MenuDiagnostics diag;
  diag.per_type.resize(inst.num_types);
  for (std::size_t t = 0; t < inst.num_types; ++t) {
    auto& report = diag.per_type[t];
    report.chosen = assignment[t];
    if (assignment[t]) {
      const Contract& c = menu.contracts[*assignment[t]];
      report.utility = buyer_utility_voluntary(t, c, inst);
      report.revenue = type_profit_contribution(t, c, inst, Regime::voluntary);
      report.accepted_outcomes = accepted_outcomes(t, c, inst);
    } else {
      report.utility = 0;
      report.revenue = 0;
    }
    for (std::size_t k = 0; k < menu.contracts.size(); ++k) {
      if (buyer_utility_voluntary(t, menu.contracts[k], inst) > report.utility)
        diag.ic_violations.emplace_back(t, k);
    }
    if (report.utility < 0) diag.ir_violations.push_back(t);
  }
  return diag;
}

namespace detail {

inline std::vector<std::size_t> decode_actions(std::uint64_t aidx, std::size_t num_types,
                                               std::size_t num_actions) {
  std::vector<std::size_t> acts(num_types);
  for (std::size_t t = num_types; t-- > 0;) {
    acts[t] = static_cast<std::size_t>(aidx % num_actions);
    aidx /= num_actions;
  }
  return acts;
}

inline std::uint64_t count_assignments(const Instance& inst) {
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < inst.num_types; ++t) {
    count *= inst.num_actions;
    if (count > 100000) throw GuardError("action assignment count exceeds 1e5");
  }
  return count;
}

struct BestPattern {
  bool found = false;
  Rational profit;
  std::uint64_t aidx = 0;
  std::uint64_t mask = 0;
  std::uint64_t lps = 0;
  std::uint64_t patterns = 0;
};

// Scans all exclusion patterns for one action assignment. Patterns walk in
// Gray-code order so each step updates a single state column; ties are still
// resolved on the numeric (aidx, mask) key, so the result is order-free.
inline BestPattern scan_exclusion_patterns(const Instance& inst, std::uint64_t aidx) {
  const std::size_t T = inst.num_types;
  const std::size_t Q = inst.num_outcomes;
  const auto acts = decode_actions(aidx, T, inst.num_actions);
  const std::uint64_t num_masks = std::uint64_t(1) << (T * Q);

  BestPattern best;
  StateVector s = StateVector::zeros(T);
  std::vector<int> included(T, 0);
  std::vector<bool> served(T, false);
  std::uint64_t gray = 0;

  for (std::uint64_t i = 0; i < num_masks; ++i) {
    if (i != 0) {
      const unsigned bit = static_cast<unsigned>(__builtin_ctzll(i));
      const std::uint64_t next = i ^ (i >> 1);
      const bool now_set = (next >> bit) & 1ULL;
      const std::size_t t = bit / Q;
      const std::size_t q = bit % Q;
      const Rational& p = inst.transitions[acts[t]][q];
      for (std::size_t u = 0; u < T; ++u) {
        const Rational delta = p * inst.valuations[u][q];
        if (now_set)
          s.values[u][t] += delta;
        else
          s.values[u][t] -= delta;
      }
      included[t] += now_set ? 1 : -1;
      served[t] = included[t] > 0;
      gray = next;
    }
    ++best.patterns;
    const PricingResult priced = price_served_menu(s, acts, inst, served);
    ++best.lps;
    if (!priced.feasible) continue;
    if (!best.found || priced.profit > best.profit ||
        (priced.profit == best.profit && gray < best.mask)) {
      best.found = true;
      best.profit = priced.profit;
      best.mask = gray;
      best.aidx = aidx;
    }
  }
  return best;
}

inline void merge_best(BestPattern& into, const BestPattern& other) {
  into.lps += other.lps;
  into.patterns += other.patterns;
  if (!other.found) return;
  if (!into.found || other.profit > into.profit ||
      (other.profit == into.profit &&
       (other.aidx < into.aidx || (other.aidx == into.aidx && other.mask < into.mask)))) {
    const auto lps = into.lps;
    const auto patterns = into.patterns;
    into = other;
    into.lps = lps;
    into.patterns = patterns;
  }
}

}  // namespace detail

// Maximum profit of the two-part tariff (usage prices in {0, EXCLUDE} per
// the two-price reduction). Guarded: T*Q <= 20 and |A|^T <= 1e5.
inline SolveResult solve_exact(const Instance& inst, SolveOptions options = {}) {
  inst.validate();
  const std::size_t T = inst.num_types;
  const std::size_t Q = inst.num_outcomes;
  if (T * Q > 20)
    throw GuardError("solve_exact refuses T*Q > 20 (got " + std::to_string(T * Q) + ")");
  const std::uint64_t num_assignments = detail::count_assignments(inst);

  detail::BestPattern best;
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(num_assignments)));
  if (threads <= 1) {
    for (std::uint64_t aidx = 0; aidx < num_assignments; ++aidx)
      detail::merge_best(best, detail::scan_exclusion_patterns(inst, aidx));
  } else {
    std::vector<detail::BestPattern> partial(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t aidx = w; aidx < num_assignments; aidx += threads)
          detail::merge_best(partial[w], detail::scan_exclusion_patterns(inst, aidx));
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : partial) detail::merge_best(best, p);
  }

  // Rebuild the witness from the winning (assignment, pattern) key.
  const auto acts = detail::decode_actions(best.aidx, T, inst.num_actions);
  StateVector s = StateVector::zeros(T);
  std::vector<bool> served(T, false);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t q = 0; q < Q; ++q) {
      if ((best.mask >> (t * Q + q)) & 1ULL) {
        served[t] = true;
        for (std::size_t u = 0; u < T; ++u)
          s.values[u][t] += inst.transitions[acts[t]][q] * inst.valuations[u][q];
      }
    }
  }
  const PricingResult priced = price_served_menu(s, acts, inst, served);

  SolveResult result;
  result.regime = PaymentRegime::full;
  result.profit = best.profit;
  result.lps_solved = best.lps;
  result.patterns_enumerated = best.patterns;
  result.assignment.assign(T, std::nullopt);
  for (std::size_t t = 0; t < T; ++t) {
    if (!served[t]) continue;
    std::vector<UsagePrice> usage(Q, UsagePrice::exclude());
    for (std::size_t q = 0; q < Q; ++q)
      if ((best.mask >> (t * Q + q)) & 1ULL) usage[q] = UsagePrice(Rational(0));
    result.assignment[t] = result.menu.contracts.size();
    result.menu.contracts.emplace_back(acts[t], priced.upfront[t], std::move(usage));
  }
  result.diagnostics = witness_diagnostics(result.menu, result.assignment, inst);
  return result;
}

// Maximum profit with all usage prices zero. Contracts are full access at a
// price, so the only menu freedom is the action assignment, the prices, and
// which types participate.
inline SolveResult solve_upfront_only(const Instance& inst, SolveOptions = {}) {
  inst.validate();
  const std::size_t T = inst.num_types;
  const std::uint64_t num_assignments = detail::count_assignments(inst);

  bool found = false;
  Rational best_profit = 0;
  std::uint64_t best_aidx = 0, best_subset = 0;
  std::uint64_t lps = 0, patterns = 0;
  std::vector<Rational> best_upfront;

  for (std::uint64_t aidx = 0; aidx < num_assignments; ++aidx) {
    const auto acts = detail::decode_actions(aidx, T, inst.num_actions);
    StateVector s = StateVector::zeros(T);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t k = 0; k < T; ++k)
        for (std::size_t q = 0; q < inst.num_outcomes; ++q)
          s.values[t][k] += inst.transitions[acts[k]][q] * inst.valuations[t][q];

    for (std::uint64_t subset = 0; subset < (std::uint64_t(1) << T); ++subset) {
      ++patterns;
      std::vector<bool> served(T);
      for (std::size_t t = 0; t < T; ++t) served[t] = (subset >> t) & 1ULL;
      const PricingResult priced = price_served_menu(s, acts, inst, served);
      ++lps;
      if (!priced.feasible) continue;
      if (!found || priced.profit > best_profit ||
          (priced.profit == best_profit &&
           (aidx < best_aidx || (aidx == best_aidx && subset < best_subset)))) {
        found = true;
        best_profit = priced.profit;
        best_aidx = aidx;
        best_subset = subset;
        best_upfront = priced.upfront;
      }
    }
  }

  SolveResult result;
  result.regime = PaymentRegime::upfront_only;
  result.profit = best_profit;
  result.lps_solved = lps;
  result.patterns_enumerated = patterns;
  const auto acts = detail::decode_actions(best_aidx, T, inst.num_actions);
  result.assignment.assign(T, std::nullopt);
  for (std::size_t t = 0; t < T; ++t) {
    if (!((best_subset >> t) & 1ULL)) continue;
    result.assignment[t] = result.menu.contracts.size();
    result.menu.contracts.push_back(
        Contract::with_zero_usage(acts[t], best_upfront[t], inst.num_outcomes));
  }
  result.diagnostics = witness_diagnostics(result.menu, result.assignment, inst);
  return result;
}

// Forced-acceptance optimum. Any mandatory menu redistributes its usage
// prices into the upfront price without changing utilities or profit, and a
// zero-usage menu means the same thing in both regimes, so the mandatory
// optimum is computed as the upfront-only optimum.
inline SolveResult solve_mandatory(const Instance& inst, SolveOptions options = {}) {
  SolveResult result = solve_upfront_only(inst, options);
  result.regime = PaymentRegime::mandatory;
  return result;
}

// Maximum profit with every upfront price forced to zero. Enumerates, for
// every (evaluating type u, contract t, outcome q), whether u accepts q
// under contract t; within one acceptance pattern the profit program is an
// LP over the usage prices:
//     max  E_t[ sum_{q accepted by t at its own contract} p^{a^t}_q x^t_q ]
//     s.t. accept(u,t,q)  =>  x^t_q <= v^u_q        (consistency, as bounds)
//          reject(u,t,q)  =>  x^t_q >= v^u_q
//          IC rows between every ordered type pair, x >= 0.
// IR is implied: accepted terms are nonnegative and w = 0.
inline SolveResult solve_usage_only(const Instance& inst, SolveOptions = {}) {
  inst.validate();
  const std::size_t T = inst.num_types;
  const std::size_t Q = inst.num_outcomes;
  if (T * T * Q > 16)
    throw GuardError("solve_usage_only refuses T^2*Q > 16 (got " + std::to_string(T * T * Q) + ")");
  const std::uint64_t num_assignments = detail::count_assignments(inst);
  const std::uint64_t num_flags = std::uint64_t(1) << (T * T * Q);

  Rational max_valuation = 0;
  for (const auto& row : inst.valuations)
    for (const auto& v : row) max_valuation = std::max(max_valuation, v);

  bool found = false;
  Rational best_profit = 0;
  std::uint64_t best_aidx = 0, best_flags = 0;
  std::vector<Rational> best_prices;
  std::uint64_t lps = 0, patterns = 0;

  const auto flag_bit = [Q, T](std::size_t u, std::size_t t, std::size_t q) {
    return (u * T + t) * Q + q;
  };

  for (std::uint64_t aidx = 0; aidx < num_assignments; ++aidx) {
    const auto acts = detail::decode_actions(aidx, T, inst.num_actions);
    Rational cost_term = 0;
    for (std::size_t t = 0; t < T; ++t) cost_term += inst.prior[t] * inst.costs[acts[t]];

    for (std::uint64_t flags = 0; flags < num_flags; ++flags) {
      ++patterns;
      const auto accepts = [&](std::size_t u, std::size_t t, std::size_t q) {
        return (flags >> flag_bit(u, t, q)) & 1ULL;
      };

      LinearProgram lp(T * Q);
      bool bounds_ok = true;
      for (std::size_t t = 0; t < T && bounds_ok; ++t) {
        for (std::size_t q = 0; q < Q && bounds_ok; ++q) {
          Rational lb = 0;
          std::optional<Rational> ub;
          for (std::size_t u = 0; u < T; ++u) {
            if (accepts(u, t, q)) {
              if (!ub || inst.valuations[u][q] < *ub) ub = inst.valuations[u][q];
            } else if (inst.valuations[u][q] > lb) {
              lb = inst.valuations[u][q];
            }
          }
          if (ub && *ub < lb) bounds_ok = false;
          lp.lower[t * Q + q] = lb;
          lp.upper[t * Q + q] = ub;
        }
      }
      if (!bounds_ok) continue;

      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t q = 0; q < Q; ++q)
          if (accepts(t, t, q))
            lp.objective[t * Q + q] = inst.prior[t] * inst.transitions[acts[t]][q];

      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 0; k < T; ++k) {
          if (k == t) continue;
          // own utility minus utility of contract k, as a <= row
          std::vector<Rational> row(T * Q, Rational(0));
          Rational rhs = 0;
          for (std::size_t q = 0; q < Q; ++q) {
            if (accepts(t, t, q)) {
              row[t * Q + q] += inst.transitions[acts[t]][q];
              rhs += inst.transitions[acts[t]][q] * inst.valuations[t][q];
            }
            if (accepts(t, k, q)) {
              row[k * Q + q] -= inst.transitions[acts[k]][q];
              rhs -= inst.transitions[acts[k]][q] * inst.valuations[t][q];
            }
          }
          lp.add_row(std::move(row), Relation::le, std::move(rhs));
        }
      }

      const LpResult res = solve_lp(lp);
      ++lps;
      if (res.status != LpStatus::optimal) continue;
      const Rational profit = res.value - cost_term;
      if (!found || profit > best_profit ||
          (profit == best_profit &&
           (aidx < best_aidx || (aidx == best_aidx && flags < best_flags)))) {
        found = true;
        best_profit = profit;
        best_aidx = aidx;
        best_flags = flags;
        best_prices = res.solution;
      }
    }
  }

  // Witness: own-rejected prices sit at arbitrary vertex values, so pin them
  // to the smallest accepting valuation (or above every valuation) to keep
  // the tie-accept rule from granting revenue the program never counted.
  SolveResult result;
  result.regime = PaymentRegime::usage_only;
  result.profit = best_profit;
  result.lps_solved = lps;
  result.patterns_enumerated = patterns;
  const auto acts = detail::decode_actions(best_aidx, T, inst.num_actions);
  const auto accepts = [&](std::size_t u, std::size_t t, std::size_t q) {
    return (best_flags >> flag_bit(u, t, q)) & 1ULL;
  };
  result.assignment.assign(T, std::nullopt);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<UsagePrice> usage(Q);
    for (std::size_t q = 0; q < Q; ++q) {
      if (accepts(t, t, q)) {
        usage[q] = UsagePrice(best_prices[t * Q + q]);
        continue;
      }
      std::optional<Rational> lowest_acceptor;
      for (std::size_t u = 0; u < T; ++u)
        if (accepts(u, t, q) && (!lowest_acceptor || inst.valuations[u][q] < *lowest_acceptor))
          lowest_acceptor = inst.valuations[u][q];
      usage[q] = lowest_acceptor ? UsagePrice(*lowest_acceptor) : UsagePrice(max_valuation + 1);
    }
    result.assignment[t] = t;
    result.menu.contracts.emplace_back(acts[t], Rational(0), std::move(usage));
  }
  result.diagnostics = witness_diagnostics(result.menu, result.assignment, inst);
  return result;
}

// Sanity oracle for the two-price reduction: grids every finite usage price
// over the valuation set (plus EXCLUDE) and prices each menu. Exponential;
// only for tiny instances.
inline Rational exact_profit_by_price_grid(const Instance& inst) {
  inst.validate();
  const std::size_t T = inst.num_types;
  const std::size_t Q = inst.num_outcomes;
  if (T * Q > 6) throw GuardError("price grid oracle refuses T*Q > 6");
  const std::uint64_t num_assignments = detail::count_assignments(inst);

  // Candidate prices per outcome: every type's valuation, plus zero.
  std::vector<std::vector<Rational>> candidates(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    candidates[q].push_back(Rational(0));
    for (std::size_t t = 0; t < T; ++t) candidates[q].push_back(inst.valuations[t][q]);
    std::sort(candidates[q].begin(), candidates[q].end());
    candidates[q].erase(std::unique(candidates[q].begin(), candidates[q].end()), candidates[q].end());
  }

  Rational best = 0;  // the empty menu is always available
  std::vector<std::size_t> choice(T * Q, 0);
  for (std::uint64_t aidx = 0; aidx < num_assignments; ++aidx) {
    const auto acts = detail::decode_actions(aidx, T, inst.num_actions);
    std::fill(choice.begin(), choice.end(), 0);
    for (;;) {
      // choice value candidates[q].size() encodes EXCLUDE
      StateVector s = StateVector::zeros(T);
      std::vector<Rational> usage_revenue(T, Rational(0));
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t q = 0; q < Q; ++q) {
          const std::size_t pick = choice[t * Q + q];
          if (pick == candidates[q].size()) continue;  // EXCLUDE
          const Rational& x = candidates[q][pick];
          const Rational& p = inst.transitions[acts[t]][q];
          for (std::size_t u = 0; u < T; ++u)
            if (inst.valuations[u][q] >= x) s.values[u][t] += p * (inst.valuations[u][q] - x);
          if (inst.valuations[t][q] >= x) usage_revenue[t] += p * x;
        }
      }
      for (std::uint64_t subset = 0; subset < (std::uint64_t(1) << T); ++subset) {
        std::vector<bool> served(T);
        for (std::size_t t = 0; t < T; ++t) served[t] = (subset >> t) & 1ULL;
        const PricingResult priced = price_served_menu(s, acts, inst, served, &usage_revenue);
        if (priced.feasible && priced.profit > best) best = priced.profit;
      }
      std::size_t pos = T * Q;
      while (pos > 0) {
        if (++choice[pos - 1] <= candidates[(pos - 1) % Q].size()) break;
        choice[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }
  return best;
}

}  // namespace tariff
