#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "tariff/exact.hpp"
#include "tariff/instances.hpp"
#include "tariff/single_param.hpp"
#include "tariff/transforms.hpp"
#include "tariff/state.hpp"

using namespace tariff;

namespace {

SingleParamInstance two_type_instance() {
  return make_single_param({Rational(1), Rational(2)}, {Rational(1), Rational(3)},
                           {Rational(1, 2), Rational(1, 2)}, {Rational(0)},
                           {{Rational(1, 2), Rational(1, 2)}});
}

}  // namespace

TEST_CASE("construction merges equal parameters and sorts") {
  const SingleParamInstance sp = make_single_param(
      {Rational(2), Rational(1), Rational(2)}, {Rational(1)},
      {Rational(1, 4), Rational(1, 4), Rational(1, 2)}, {Rational(0)}, {{Rational(1)}});
  REQUIRE(sp.alpha.size() == 2);
  CHECK(sp.alpha == std::vector<Rational>{Rational(1), Rational(2)});
  CHECK(sp.base.prior == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});
  CHECK(sp.base.valuations[1][0] == 2);

  CHECK_THROWS_AS(make_single_param({Rational(0)}, {Rational(1)}, {Rational(1)}, {Rational(0)},
                                    {{Rational(1)}}),
                  ValidationError);
}

TEST_CASE("baseline value bound") {
  const SingleParamInstance sp = two_type_instance();
  const BaselineBest best = best_action_value(sp);
  CHECK(best.value == 2);  // (1+3)/2
  CHECK(best.action == 0);

  const SingleParamInstance zeros = make_single_param(
      {Rational(1), Rational(2)}, {Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 2)},
      {Rational(0)}, {{Rational(1, 2), Rational(1, 2)}});
  CHECK(best_action_value(zeros).value == 0);

  const SingleParamInstance two_actions = make_single_param(
      {Rational(1)}, {Rational(2), Rational(3)}, {Rational(1)}, {Rational(0), Rational(0)},
      {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  const BaselineBest picked = best_action_value(two_actions);
  CHECK(picked.value == 3);
  CHECK(picked.action == 1);
}

TEST_CASE("closed-form revenue-optimal upfront prices") {
  const SingleParamInstance sp = two_type_instance();

  const auto w1 = closed_form_upfront(ValueProfile{{Rational(2), Rational(4)}}, sp);
  CHECK(w1 == std::vector<Rational>{Rational(2), Rational(2)});
  // revenue at mu = (1/2,1/2) is 2
  CHECK(sp.base.prior[0] * w1[0] + sp.base.prior[1] * w1[1] == 2);

  const auto w2 = closed_form_upfront(ValueProfile{{Rational(0), Rational(4)}}, sp);
  CHECK(w2 == std::vector<Rational>{Rational(0), Rational(4)});

  const SingleParamInstance single = make_single_param({Rational(1)}, {Rational(5)}, {Rational(1)},
                                                       {Rational(0)}, {{Rational(1)}});
  CHECK(closed_form_upfront(ValueProfile{{Rational(5)}}, single) ==
        std::vector<Rational>{Rational(5)});

  // V^t / alpha^t must be nondecreasing
  CHECK_THROWS_AS(closed_form_upfront(ValueProfile{{Rational(2), Rational(1)}}, sp),
                  ValidationError);
}

TEST_CASE("closed form matches the pricing program on realizable profiles") {
  // value profiles from ({0,EXCLUDE} usage patterns, best action) are
  // realizable; the closed form must agree with the difference-constraint
  // optimum of the same state
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SingleParamInstance sp = gen_random_single_param(2 + seed % 2, 2, 2, 9000 + seed, 6, true);
    const std::size_t T = sp.base.num_types;
    const std::size_t Q = sp.base.num_outcomes;
    const BaselineBest best = best_action_value(sp);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << Q); ++mask) {
      Rational scaled = 0;  // sum of p * v(q) over priced-at-zero outcomes
      for (std::size_t q = 0; q < Q; ++q)
        if ((mask >> q) & 1ULL) scaled += sp.base.transitions[best.action][q] * sp.baseline[q];
      // same acceptance set for every type: V^t = alpha^t * scaled
      ValueProfile profile;
      for (std::size_t t = 0; t < T; ++t) profile.values.push_back(sp.alpha[t] * scaled);
      const auto w = closed_form_upfront(profile, sp);

      StateVector s = StateVector::zeros(T);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < T; ++k) s.values[t][k] = sp.alpha[t] * scaled;
      const PricingResult priced =
          optimal_upfront_direct(s, std::vector<std::size_t>(T, best.action), sp.base);
      REQUIRE(priced.feasible);
      Rational closed_revenue = 0;
      for (std::size_t t = 0; t < T; ++t) closed_revenue += sp.base.prior[t] * w[t];
      CHECK(closed_revenue == priced.profit);  // zero costs: profit = revenue
    }
  }
}

TEST_CASE("relaxation optimum scan") {
  const SingleParamInstance sp = two_type_instance();
  const RelaxationOptimum opt = lp_relaxation_optimum(sp);
  CHECK(opt.value == 2);
  CHECK(opt.type_index == 0);  // tie at 2 resolves to the lower cutoff

  const SingleParamInstance single = make_single_param({Rational(3)}, {Rational(2)}, {Rational(1)},
                                                       {Rational(0)}, {{Rational(1)}});
  CHECK(lp_relaxation_optimum(single).value == 6);

  // concentrated prior prefers serving only the high type
  const SingleParamInstance top_heavy = make_single_param(
      {Rational(1), Rational(2)}, {Rational(1), Rational(3)},
      {Rational(1, 10), Rational(9, 10)}, {Rational(0)}, {{Rational(1, 2), Rational(1, 2)}});
  const RelaxationOptimum concentrated = lp_relaxation_optimum(top_heavy);
  CHECK(concentrated.value == Rational(18, 5));  // 2 * 2 * 9/10
  CHECK(concentrated.type_index == 1);
}

TEST_CASE("best single contract") {
  const SingleParamInstance sp = two_type_instance();
  const SingleContractResult best = best_single_contract(sp);
  REQUIRE(best.menu.contracts.size() == 1);
  CHECK(best.menu.contracts[0].action == 0);
  CHECK(best.menu.contracts[0].upfront == 2);
  CHECK(best.revenue == 2);
  CHECK(best.revenue == lp_relaxation_optimum(sp).value);

  // the instance is zero-cost here, so evaluating the posted contract
  // reproduces the revenue and the cutoff behaviour
  const IndirectOutcome out = indirect_choice_and_profit(best.menu, sp.base);
  CHECK(out.profit == best.revenue);
  REQUIRE(out.choices[0]);
  REQUIRE(out.choices[1]);

  const SingleParamInstance zeros = make_single_param(
      {Rational(1), Rational(2)}, {Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 2)},
      {Rational(0)}, {{Rational(1, 2), Rational(1, 2)}});
  CHECK(best_single_contract(zeros).revenue == 0);
}

TEST_CASE("posted contract cutoff: low types opt out") {
  const SingleParamInstance top_heavy = make_single_param(
      {Rational(1), Rational(2)}, {Rational(1), Rational(3)},
      {Rational(1, 10), Rational(9, 10)}, {Rational(0)}, {{Rational(1, 2), Rational(1, 2)}});
  const SingleContractResult best = best_single_contract(top_heavy);
  CHECK(best.cutoff_type == 1);
  const IndirectOutcome out = indirect_choice_and_profit(best.menu, top_heavy.base);
  CHECK_FALSE(out.choices[0]);
  REQUIRE(out.choices[1]);
  CHECK(out.profit == best.revenue);
}

TEST_CASE("single contract is revenue-optimal on zero-cost instances") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const SingleParamInstance sp =
        gen_random_single_param(1 + seed % 3, 1 + seed % 2, 1 + seed % 3, 9100 + seed, 6, true);
    const Rational exact = solve_exact(sp.base).profit;
    CHECK(best_single_contract(sp).revenue == exact);
  }
}

TEST_CASE("value and payment monotonicity of IC menus") {
  const SingleParamInstance sp = two_type_instance();

  DirectMenu posted;
  posted.contracts.assign(2, Contract::with_zero_usage(0, Rational(2), 2));
  CHECK(check_monotone(posted, sp));

  // two-price IC menus satisfy the monotone facts; general prices first go
  // through the normalization (contract values are linear in alpha only then)
  tariff::testing::SplitMix64 rng(3344);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SingleParamInstance rand_sp =
        gen_random_single_param(2 + seed % 2, 2, 2, 9200 + seed, 6, false);
    const DirectMenu menu = normalize_two_prices(
        tariff::testing::random_ic_menu(rng, rand_sp.base, 6), rand_sp.base);
    CHECK(check_monotone(menu, rand_sp));
  }

  // general prices are refused: they admit IC menus with decreasing payments
  // (e.g. v=(1),(2) with contracts (w=1,x=0) and (w=0,x=1))
  DirectMenu general;
  general.contracts = {Contract(0, Rational(1), {UsagePrice(Rational(1)), UsagePrice(Rational(0))}),
                       Contract::with_zero_usage(0, Rational(0), 2)};
  CHECK_THROWS_AS(check_monotone(general, sp), ValidationError);

  // a decreasing-payment menu is caught as an IC violation already
  DirectMenu decreasing;
  decreasing.contracts = {Contract::with_zero_usage(0, Rational(2), 2),
                          Contract::with_zero_usage(0, Rational(1), 2)};
  CHECK_FALSE(validate_menu(decreasing, sp.base, Regime::voluntary).ic_violations.empty());
  CHECK_THROWS_AS(check_monotone(decreasing, sp), MenuError);
}

TEST_CASE("profit gap: single contracts are not profit-optimal with costs") {
  const SingleParamInstance sp = gen_single_contract_profit_gap();
  CHECK(solve_exact(sp.base).profit == Rational(7, 6));

  // exhaustive posted-contract search over both actions, all exclusion
  // patterns, and the valuation breakpoints peaks at profit 1
  Rational best = 0;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
      std::vector<UsagePrice> usage(2, UsagePrice::exclude());
      for (std::size_t q = 0; q < 2; ++q)
        if ((mask >> q) & 1ULL) usage[q] = UsagePrice(Rational(0));
      std::vector<Rational> candidates = {Rational(0)};
      for (std::size_t t = 0; t < 2; ++t)
        candidates.push_back(contract_value(t, Contract(a, Rational(0), usage), sp.base));
      for (const Rational& w : candidates) {
        IndirectMenu menu;
        menu.contracts.push_back(Contract(a, w, usage));
        best = std::max(best, indirect_choice_and_profit(menu, sp.base).profit);
      }
    }
  }
  CHECK(best == 1);
}
