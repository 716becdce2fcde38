#pragma once

// Single-parameter machinery: valuations v^t_q = alpha^t * v(q). Revenue
// maximization collapses to one dimension per type, the revenue-optimal
// upfront prices have a closed form, and a single posted contract attains
// the relaxation optimum.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "tariff/model.hpp"

namespace tariff {

struct SingleParamInstance {
  Instance base;
  std::vector<Rational> alpha;     // strictly increasing, positive
  std::vector<Rational> baseline;  // v(q), nonnegative
};

// Builds the instance from its parameters. Types with equal alpha have equal
// valuation rows, so they are merged (prior masses summed) and the result is
// sorted by ascending alpha; strictness of alpha is then an invariant.
inline SingleParamInstance make_single_param(std::vector<Rational> alpha, std::vector<Rational> baseline,
                                             std::vector<Rational> prior, std::vector<Rational> costs,
                                             std::vector<std::vector<Rational>> transitions) {
  if (alpha.empty() || alpha.size() != prior.size())
    throw ValidationError("alpha and prior must be nonempty and equally long");
  for (const auto& a : alpha)
    if (a <= 0) throw ValidationError("single-parameter alpha entries must be positive");
  for (const auto& b : baseline)
    if (b < 0) throw ValidationError("baseline valuations must be nonnegative");

  std::vector<std::size_t> order(alpha.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return alpha[a] < alpha[b]; });

  SingleParamInstance out;
  for (std::size_t i : order) {
    if (!out.alpha.empty() && out.alpha.back() == alpha[i]) {
      out.base.prior.back() += prior[i];  // merge equal-alpha types
    } else {
      out.alpha.push_back(alpha[i]);
      out.base.prior.push_back(prior[i]);
    }
  }

  out.baseline = std::move(baseline);
  out.base.num_types = out.alpha.size();
  out.base.num_outcomes = out.baseline.size();
  out.base.num_actions = transitions.size();
  out.base.costs = std::move(costs);
  out.base.transitions = std::move(transitions);
  out.base.valuations.resize(out.base.num_types);
  for (std::size_t t = 0; t < out.base.num_types; ++t) {
    out.base.valuations[t].resize(out.base.num_outcomes);
    for (std::size_t q = 0; q < out.base.num_outcomes; ++q)
      out.base.valuations[t][q] = out.alpha[t] * out.baseline[q];
  }
  out.base.validate();
  return out;
}

struct BaselineBest {
  Rational value;      // M = max_a sum_q p^a_q v(q)
  std::size_t action;  // lowest index attaining it
};

inline BaselineBest best_action_value(const SingleParamInstance& inst) {
  BaselineBest best{Rational(0), 0};
  bool first = true;
  for (std::size_t a = 0; a < inst.base.num_actions; ++a) {
    Rational sum = 0;
    for (std::size_t q = 0; q < inst.base.num_outcomes; ++q)
      sum += inst.base.transitions[a][q] * inst.baseline[q];
    if (first || sum > best.value) {
      best = BaselineBest{sum, a};
      first = false;
    }
  }
  return best;
}

struct ValueProfile {
  std::vector<Rational> values;  // V^t = value of type t's own contract
};

// Revenue-maximizing upfront prices for a fixed value profile:
//   w^t = V^1 + sum_{i=2..t} (V^i - (alpha^i / alpha^{i-1}) V^{i-1}).
// Requires V^t / alpha^t nondecreasing (the profile is not realizable by an
// IC menu otherwise).
inline std::vector<Rational> closed_form_upfront(const ValueProfile& profile,
                                                 const SingleParamInstance& inst) {
  const std::size_t T = inst.base.num_types;
  if (profile.values.size() != T) throw ValidationError("value profile length differs from T");
  for (const auto& v : profile.values)
    if (v < 0) throw ValidationError("value profile entries must be nonnegative");
  for (std::size_t t = 1; t < T; ++t)
    if (profile.values[t] / inst.alpha[t] < profile.values[t - 1] / inst.alpha[t - 1])
      throw ValidationError("value profile is not monotone in V^t/alpha^t (not IC-realizable)");

  std::vector<Rational> w(T);
  if (T == 0) return w;
  w[0] = profile.values[0];
  for (std::size_t t = 1; t < T; ++t)
    w[t] = w[t - 1] + profile.values[t] - (inst.alpha[t] / inst.alpha[t - 1]) * profile.values[t - 1];
  return w;
}

struct RelaxationOptimum {
  Rational value;
  std::size_t type_index;  // t*, lowest index on ties
};

// Optimum of the revenue relaxation over monotone scaled values in [0, M]:
// extreme points serve a suffix of types at full value, so scanning
//   value(t*) = M * alpha^{t*} * sum_{t >= t*} mu^t
// over t* gives the optimum.
inline RelaxationOptimum lp_relaxation_optimum(const SingleParamInstance& inst) {
  const Rational M = best_action_value(inst).value;
  const std::size_t T = inst.base.num_types;
  std::vector<Rational> tail(T + 1, Rational(0));
  for (std::size_t t = T; t-- > 0;) tail[t] = tail[t + 1] + inst.base.prior[t];
  RelaxationOptimum best{M * inst.alpha[0] * tail[0], 0};
  for (std::size_t t = 1; t < T; ++t) {
    const Rational value = M * inst.alpha[t] * tail[t];
    if (value > best.value) best = RelaxationOptimum{value, t};
  }
  return best;
}

struct SingleContractResult {
  IndirectMenu menu;  // exactly one contract
  Rational revenue;
  std::size_t cutoff_type;  // types below opt out
};

// Revenue-maximizing single posted contract: (a*, M * alpha^{t*}, zero
// usage). Types t >= t* buy, the rest opt out; revenue matches the
// relaxation optimum.
inline SingleContractResult best_single_contract(const SingleParamInstance& inst) {
  const BaselineBest ba = best_action_value(inst);
  const RelaxationOptimum opt = lp_relaxation_optimum(inst);
  SingleContractResult out;
  out.cutoff_type = opt.type_index;
  out.revenue = opt.value;
  out.menu.contracts.push_back(Contract::with_zero_usage(
      ba.action, ba.value * inst.alpha[opt.type_index], inst.base.num_outcomes));
  return out;
}

// Checks the IC-menu monotonicity facts: V^t / alpha^t and w^t are
// nondecreasing in t. True for every IC menu with usage prices in
// {0, EXCLUDE} (contract values are then linear in alpha, which the claim
// needs; general prices admit IC menus with decreasing payments). Throws on
// non-IC or non-two-price input.
inline bool check_monotone(const DirectMenu& menu, const SingleParamInstance& inst) {
  for (const auto& c : menu.contracts)
    if (!c.two_price_form())
      throw ValidationError("check_monotone requires usage prices in {0, EXCLUDE}");
  MenuDiagnostics diag = validate_menu(menu, inst.base, Regime::voluntary);
  if (!diag.ic_violations.empty())
    throw MenuError("check_monotone requires an IC menu", std::move(diag));
  const std::size_t T = inst.base.num_types;
  Rational prev_scaled, prev_w;
  for (std::size_t t = 0; t < T; ++t) {
    const Rational scaled = contract_value(t, menu.contracts[t], inst.base) / inst.alpha[t];
    const Rational& w = menu.contracts[t].upfront;
    if (t > 0 && (scaled < prev_scaled || w < prev_w)) return false;
    prev_scaled = scaled;
    prev_w = w;
  }
  return true;
}

}  // namespace tariff
