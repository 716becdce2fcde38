#pragma once

// Approximation scheme for the two-part tariff optimum: a dynamic program
// over value states with multiplicative trimming. Inputs are the T*Q
// (type, outcome) pairs in lexicographic order; each step decides one usage
// price (0 or EXCLUDE) through the two transitions
//     f_0   : add p^{a^t}_q v^{t'}_q to column t (price the outcome at zero)
//     f_inf : identity                           (exclude the outcome)
// and after every step states are collapsed to one representative per
// multiplicative grid bucket. Final states are scored with the exact
// indirect-menu profit, so trimming is the only source of error.

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "tariff/exact.hpp"
#include "tariff/model.hpp"
#include "tariff/state.hpp"

namespace tariff {

enum class DpTag : std::uint8_t { set_zero = 0, set_exclude = 1 };

struct DpState {
  StateVector state;
  std::vector<DpTag> trace;  // aligned with dp_inputs order
};

namespace detail {

inline double log_integer(const Integer& n) {
  const unsigned bits = msb(n);
  if (bits <= 900) return std::log(n.convert_to<double>());
  const Integer top = n >> (bits - 52);
  return std::log(top.convert_to<double>()) + double(bits - 52) * std::log(2.0);
}

}  // namespace detail

// Multiplicative grid configuration. The grid ratio is base^(1/scale); with
// base = 1+eps and scale = 2n this is the (1+eps)^(1/(2n)) step whose n-fold
// accumulation stays within sqrt(1+eps). Buckets are computed exactly:
// bucket(v) = floor(log_{base^(1/scale)} v) = floor(log_base v^scale),
// seeded in floating point and resolved by exact rational comparison when
// the seed lands near a grid boundary. Zero keeps its own bucket.
struct TrimConfig {
  bool enabled = false;
  Rational epsilon;
  Rational base;      // rational > 1
  unsigned scale = 1; // grid ratio is base^(1/scale)

  static TrimConfig off() { return TrimConfig{}; }

  static TrimConfig for_epsilon(const Rational& epsilon, std::size_t num_inputs) {
    if (epsilon <= 0 || epsilon >= 1) throw ValidationError("epsilon must lie in (0,1)");
    TrimConfig cfg;
    cfg.enabled = true;
    cfg.epsilon = epsilon;
    cfg.base = 1 + epsilon;
    cfg.scale = static_cast<unsigned>(2 * std::max<std::size_t>(num_inputs, 1));
    return cfg;
  }

  static TrimConfig with_ratio(const Rational& delta) {
    if (delta <= 1) throw ValidationError("grid ratio must exceed 1");
    TrimConfig cfg;
    cfg.enabled = true;
    cfg.base = delta;
    cfg.scale = 1;
    return cfg;
  }

  static constexpr long long zero_bucket = LLONG_MIN;

  // sign of v^scale - base^k
  int compare_boundary(const Rational& v, long long k) const {
    const Rational lhs = pow_rational(v, static_cast<long long>(scale));
    const Rational rhs = pow_rational(base, k);
    if (lhs < rhs) return -1;
    return lhs == rhs ? 0 : 1;
  }

  long long bucket(const Rational& v) const {
    if (v < 0) throw ValidationError("state entries must be nonnegative");
    if (v == 0) return zero_bucket;
    if (v == 1) return 0;
    const double num = detail::log_integer(numerator(v));
    const double den = detail::log_integer(denominator(v));
    const double bnum = detail::log_integer(numerator(base));
    const double bden = detail::log_integer(denominator(base));
    const double d = double(scale) * (num - den) / (bnum - bden);
    double k0 = std::floor(d);
    const double margin = std::max(1e-6, std::fabs(d) * 1e-9);
    if (d - k0 < margin || (k0 + 1) - d < margin) {
      // near a boundary: settle exactly
      long long k = static_cast<long long>(std::llround(k0));
      while (compare_boundary(v, k) < 0) --k;
      while (compare_boundary(v, k + 1) >= 0) ++k;
      return k;
    }
    return static_cast<long long>(k0);
  }

  std::vector<long long> signature(const StateVector& s) const {
    std::vector<long long> sig;
    sig.reserve(s.num_types * s.num_types);
    for (const auto& row : s.values)
      for (const auto& v : row) sig.push_back(bucket(v));
    return sig;
  }

  // Within one grid ratio of each other (coordinate pair)?
  bool close(const Rational& a, const Rational& b) const {
    if (a == 0 || b == 0) return a == b;
    const Rational ratio_pow = pow_rational(a / b, static_cast<long long>(scale));
    return ratio_pow <= base && pow_rational(b / a, static_cast<long long>(scale)) <= base;
  }
};

// The T*Q usage-price decisions in lexicographic (type, outcome) order.
inline std::vector<std::pair<std::size_t, std::size_t>> dp_inputs(const Instance& inst) {
  std::vector<std::pair<std::size_t, std::size_t>> inputs;
  inputs.reserve(inst.num_types * inst.num_outcomes);
  for (std::size_t t = 0; t < inst.num_types; ++t)
    for (std::size_t q = 0; q < inst.num_outcomes; ++q) inputs.emplace_back(t, q);
  return inputs;
}

// Price outcome q at zero inside contract t: column t gains p^{a^t}_q v^u_q.
inline StateVector transition_f0(const StateVector& s, std::pair<std::size_t, std::size_t> input,
                                 const Instance& inst, const std::vector<std::size_t>& actions) {
  const auto [t, q] = input;
  StateVector out = s;
  const Rational& p = inst.transitions[actions[t]][q];
  for (std::size_t u = 0; u < s.num_types; ++u) out.values[u][t] += p * inst.valuations[u][q];
  return out;
}

// Exclude the outcome: the state is unchanged.
inline StateVector transition_finf(const StateVector& s, std::pair<std::size_t, std::size_t>) {
  return s;
}

inline StateVector replay_trace(const std::vector<DpTag>& trace, const Instance& inst,
                                const std::vector<std::size_t>& actions) {
  const auto inputs = dp_inputs(inst);
  if (trace.size() > inputs.size()) throw ValidationError("trace longer than the input sequence");
  StateVector s = StateVector::zeros(inst.num_types);
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace[i] == DpTag::set_zero) s = transition_f0(s, inputs[i], inst, actions);
  return s;
}

// One representative per bucket signature: the member with the largest
// coordinate sum (a proxy for profit potential), ties to the
// lexicographically smallest state, then smallest trace.
inline std::vector<DpState> trim_states(const std::vector<DpState>& states, const TrimConfig& cfg) {
  if (!cfg.enabled) return states;
  auto coordinate_sum = [](const StateVector& s) {
    Rational sum = 0;
    for (const auto& row : s.values)
      for (const auto& v : row) sum += v;
    return sum;
  };
  std::map<std::vector<long long>, std::pair<const DpState*, Rational>> buckets;
  for (const auto& st : states) {
    auto sig = cfg.signature(st.state);
    const Rational sum = coordinate_sum(st.state);
    auto it = buckets.find(sig);
    if (it == buckets.end()) {
      buckets.emplace(std::move(sig), std::make_pair(&st, sum));
      continue;
    }
    auto& [rep, rep_sum] = it->second;
    if (sum > rep_sum ||
        (sum == rep_sum &&
         (st.state < rep->state || (st.state == rep->state && st.trace < rep->trace)))) {
      rep = &st;
      rep_sum = sum;
    }
  }
  std::vector<DpState> kept;
  kept.reserve(buckets.size());
  for (const auto& [sig, entry] : buckets) kept.push_back(*entry.first);
  return kept;
}

struct FptasOptions {
  bool trim = true;
};

// (1-epsilon)-approximate two-part tariff profit for a constant number of
// types. Runs the trimmed dynamic program once per action assignment, scores
// final states with the exact indirect-menu profit, and rebuilds the best
// menu from its transition trace (usage prices) and scoring program (upfront
// prices). With trimming disabled the result equals solve_exact's.
inline SolveResult fptas_solve(const Instance& inst, const Rational& epsilon,
                               FptasOptions options = {}) {
  inst.validate();
  if (inst.num_types > 4) throw GuardError("fptas_solve refuses more than 4 buyer types");
  if (epsilon <= 0 || epsilon >= 1) throw ValidationError("epsilon must lie in (0,1)");

  const std::size_t T = inst.num_types;
  const auto inputs = dp_inputs(inst);
  const TrimConfig cfg =
      options.trim ? TrimConfig::for_epsilon(epsilon, inputs.size()) : TrimConfig::off();
  const std::uint64_t num_assignments = detail::count_assignments(inst);

  bool have = false;
  Rational best_profit = 0;
  std::vector<DpTag> best_trace;
  std::vector<std::size_t> best_actions;
  IndirectProfit best_scoring;
  std::uint64_t lps = 0, states_explored = 0;

  for (std::uint64_t aidx = 0; aidx < num_assignments; ++aidx) {
    const auto acts = detail::decode_actions(aidx, T, inst.num_actions);

    std::vector<DpState> states{DpState{StateVector::zeros(T), {}}};
    for (const auto& input : inputs) {
      // children in (state order) x (f_0 before f_inf); identical states keep
      // the lexicographically smallest trace
      std::map<StateVector, DpState> next;
      for (const auto& st : states) {
        for (const DpTag tag : {DpTag::set_zero, DpTag::set_exclude}) {
          DpState child;
          child.state = tag == DpTag::set_zero ? transition_f0(st.state, input, inst, acts)
                                               : transition_finf(st.state, input);
          child.trace = st.trace;
          child.trace.push_back(tag);
          auto it = next.find(child.state);
          if (it == next.end())
            next.emplace(child.state, std::move(child));
          else if (child.trace < it->second.trace)
            it->second = std::move(child);
        }
      }
      states.clear();
      states.reserve(next.size());
      for (auto& [key, st] : next) states.push_back(std::move(st));
      states_explored += states.size();
      if (cfg.enabled) states = trim_states(states, cfg);
    }

    for (const auto& st : states) {
      const IndirectProfit scored = indirect_profit_of_state(st.state, acts, inst);
      lps += scored.lps_solved;
      if (!have || scored.profit > best_profit) {
        have = true;
        best_profit = scored.profit;
        best_trace = st.trace;
        best_actions = acts;
        best_scoring = scored;
      }
    }
  }

  SolveResult result;
  result.regime = PaymentRegime::full;
  result.profit = best_profit;
  result.lps_solved = lps;
  result.patterns_enumerated = states_explored;
  result.menu.contracts.reserve(T);
  std::vector<std::vector<UsagePrice>> usage(T,
                                             std::vector<UsagePrice>(inst.num_outcomes,
                                                                     UsagePrice::exclude()));
  for (std::size_t i = 0; i < best_trace.size(); ++i)
    if (best_trace[i] == DpTag::set_zero)
      usage[inputs[i].first][inputs[i].second] = UsagePrice(Rational(0));
  for (std::size_t k = 0; k < T; ++k)
    result.menu.contracts.emplace_back(best_actions[k], best_scoring.upfront[k], std::move(usage[k]));
  result.assignment = best_scoring.assignment;
  result.diagnostics = witness_diagnostics(result.menu, result.assignment, inst);
  return result;
}

}  // namespace tariff
