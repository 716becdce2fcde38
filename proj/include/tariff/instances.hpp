#pragma once

// Named instance families (gap exhibits, the equal-sum-split reduction, the
// single-contract profit counterexample) plus seeded random instances for
// property tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tariff/exact.hpp"
#include "tariff/model.hpp"
#include "tariff/single_param.hpp"

namespace tariff {

// Prior-dependent factor bounding the two-part-tariff advantage over
// upfront-only pricing: sort mu ascending and sum mu_(t) / prefix-sum.
// Always lies in [H_T, T).
inline Rational compute_hmu(const std::vector<Rational>& prior) {
  if (prior.empty()) throw ValidationError("prior must be nonempty");
  std::vector<Rational> sorted = prior;
  std::sort(sorted.begin(), sorted.end());
  Rational prefix = 0, total = 0;
  for (const auto& mu : sorted) {
    if (mu <= 0) throw ValidationError("prior entries must be positive");
    prefix += mu;
    total += mu / prefix;
  }
  return total;
}

// The tight-gap instance for upfront-only pricing: Q = T outcomes, one free
// action with uniform transitions, and type t (by ascending prior) valuing
// only outcome t at T / prefix-sum(mu). The full tariff extracts H_mu while
// any upfront-only menu caps at 1.
inline Instance gen_hmu_worstcase(const std::vector<Rational>& prior) {
  Rational total = 0;
  for (const auto& mu : prior) {
    if (mu <= 0) throw ValidationError("prior entries must be positive");
    total += mu;
  }
  if (total != 1) throw ValidationError("prior sums to " + tariff::to_string(total) + ", expected 1");

  const std::size_t T = prior.size();
  Instance inst;
  inst.num_types = T;
  inst.num_outcomes = T;
  inst.num_actions = 1;
  inst.prior = prior;
  std::sort(inst.prior.begin(), inst.prior.end());
  inst.costs = {Rational(0)};
  inst.transitions = {std::vector<Rational>(T, Rational(1) / Rational(static_cast<long long>(T)))};
  inst.valuations.assign(T, std::vector<Rational>(T, Rational(0)));
  Rational prefix = 0;
  for (std::size_t t = 0; t < T; ++t) {
    prefix += inst.prior[t];
    inst.valuations[t][t] = Rational(static_cast<long long>(T)) / prefix;
  }
  inst.validate();
  return inst;
}

// Two symmetric types on two outcomes where upfront-only pricing beats
// usage-only pricing: R = R_upfront = 3/4 while R_usage = 1/2.
inline Instance gen_usage_gap() {
  Instance inst;
  inst.num_types = 2;
  inst.num_outcomes = 2;
  inst.num_actions = 1;
  inst.prior = {Rational(1, 2), Rational(1, 2)};
  inst.costs = {Rational(0)};
  inst.transitions = {{Rational(1, 2), Rational(1, 2)}};
  inst.valuations = {{Rational(1), Rational(1, 2)}, {Rational(1, 2), Rational(1)}};
  inst.validate();
  return inst;
}

// A multiset of positive integers for the equal-sum-split reduction.
struct Multiset {
  std::vector<long long> items;

  void validate() const {
    if (items.empty()) throw ValidationError("multiset must be nonempty");
    for (const auto n : items)
      if (n <= 0) throw ValidationError("multiset items must be positive integers");
  }
  long long sum() const { return std::accumulate(items.begin(), items.end(), 0LL); }
};

// Reduction gadget: two uniform types, one free action, k+1 equally likely
// outcomes. Outcome 0 is worth M(k+1) to type 1 and nothing to type 2;
// outcome q is worth n_q(k+1) to type 1 and 3 n_q(k+1) to type 2. Maximum
// profit hits 9M/4 exactly when the items split into two equal-sum halves.
inline Instance gen_partition_instance(const Multiset& ms) {
  ms.validate();
  const long long k = static_cast<long long>(ms.items.size());
  const long long M = ms.sum();
  Instance inst;
  inst.num_types = 2;
  inst.num_outcomes = static_cast<std::size_t>(k + 1);
  inst.num_actions = 1;
  inst.prior = {Rational(1, 2), Rational(1, 2)};
  inst.costs = {Rational(0)};
  inst.transitions = {std::vector<Rational>(inst.num_outcomes, Rational(1, k + 1))};
  inst.valuations.assign(2, std::vector<Rational>(inst.num_outcomes, Rational(0)));
  inst.valuations[0][0] = Rational(M * (k + 1));
  inst.valuations[1][0] = 0;
  for (long long q = 1; q <= k; ++q) {
    inst.valuations[0][static_cast<std::size_t>(q)] = Rational(ms.items[q - 1] * (k + 1));
    inst.valuations[1][static_cast<std::size_t>(q)] = Rational(3 * ms.items[q - 1] * (k + 1));
  }
  inst.validate();
  return inst;
}

// Decides whether the multiset splits into two equal-sum subsets by solving
// the reduction instance exactly and testing profit == 9M/4.
inline bool decide_partition(const Multiset& ms, SolveOptions options = {}) {
  const Instance inst = gen_partition_instance(ms);
  const SolveResult result = solve_exact(inst, options);
  return result.profit == Rational(9 * ms.sum(), 4);
}

// Single-parameter instance (alpha = (1,2), baseline (1,2), deterministic
// actions with costs (0, 3/2)) where the best two-contract menu earns 7/6
// but no single contract earns more than 1.
inline SingleParamInstance gen_single_contract_profit_gap() {
  return make_single_param(
      {Rational(1), Rational(2)}, {Rational(1), Rational(2)}, {Rational(2, 3), Rational(1, 3)},
      {Rational(0), Rational(3, 2)},
      {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
}

namespace detail {

// SplitMix64: tiny, portable, stable across platforms; the standard library
// distributions are not bit-reproducible across implementations.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // uniform in [lo, hi]
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline std::vector<Rational> random_simplex_point(SplitMix64& rng, std::size_t n, bool positive) {
  std::vector<long long> weights(n);
  long long total = 0;
  for (auto& w : weights) {
    w = rng.range(positive ? 1 : 0, 8);
    total += w;
  }
  if (total == 0) {
    weights[0] = 1;
    total = 1;
  }
  std::vector<Rational> point(n);
  for (std::size_t i = 0; i < n; ++i) point[i] = Rational(weights[i], total);
  return point;
}

}  // namespace detail

// Seeded random instance with small integer data: valuations and costs are
// integers in [0, value_bound], the prior and transition rows are rational
// points with single-digit weights. Deterministic per seed.
inline Instance gen_random(std::size_t T, std::size_t A, std::size_t Q, std::uint64_t seed,
                           long long value_bound) {
  if (T == 0 || A == 0 || Q == 0) throw ValidationError("dimensions must be positive");
  if (value_bound < 0) throw ValidationError("value bound must be nonnegative");
  detail::SplitMix64 rng(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  Instance inst;
  inst.num_types = T;
  inst.num_outcomes = Q;
  inst.num_actions = A;
  inst.prior = detail::random_simplex_point(rng, T, /*positive=*/true);
  inst.costs.resize(A);
  for (auto& c : inst.costs) c = Rational(rng.range(0, value_bound));
  inst.transitions.resize(A);
  for (auto& row : inst.transitions) row = detail::random_simplex_point(rng, Q, /*positive=*/false);
  inst.valuations.assign(T, std::vector<Rational>(Q));
  for (auto& row : inst.valuations)
    for (auto& v : row) v = Rational(rng.range(0, value_bound));
  inst.validate();
  return inst;
}

// Seeded random single-parameter instance: strictly increasing integer
// alphas, integer baseline in [0, value_bound].
inline SingleParamInstance gen_random_single_param(std::size_t T, std::size_t A, std::size_t Q,
                                                   std::uint64_t seed, long long value_bound,
                                                   bool zero_costs) {
  if (T == 0 || A == 0 || Q == 0) throw ValidationError("dimensions must be positive");
  detail::SplitMix64 rng(seed * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
  std::vector<Rational> alpha(T);
  Rational acc = 0;
  for (auto& a : alpha) {
    acc += Rational(rng.range(1, 4));
    a = acc;
  }
  std::vector<Rational> baseline(Q);
  for (auto& b : baseline) b = Rational(rng.range(0, value_bound));
  std::vector<Rational> prior = detail::random_simplex_point(rng, T, /*positive=*/true);
  std::vector<Rational> costs(A);
  for (auto& c : costs) c = zero_costs ? Rational(0) : Rational(rng.range(0, value_bound));
  std::vector<std::vector<Rational>> transitions(A);
  for (auto& row : transitions) row = detail::random_simplex_point(rng, Q, /*positive=*/false);
  return make_single_param(std::move(alpha), std::move(baseline), std::move(prior), std::move(costs),
                           std::move(transitions));
}

}  // namespace tariff
