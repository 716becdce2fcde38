#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "tariff/lottery.hpp"

using namespace tariff;
using tariff::testing::SplitMix64;

namespace {

// Random lottery menu over `items` real items plus the trivial item 0.
struct RandomLotterySetup {
  LotteryMenu menu;
  std::vector<std::vector<Rational>> valuations;
  std::vector<Rational> mu;
};

RandomLotterySetup random_setup(SplitMix64& rng, std::size_t num_types, std::size_t items,
                                bool finite_prices) {
  RandomLotterySetup setup;
  setup.mu = tariff::detail::random_simplex_point(rng, num_types, /*positive=*/true);
  setup.valuations.assign(num_types, std::vector<Rational>(items + 1, Rational(0)));
  for (std::size_t t = 0; t < num_types; ++t)
    for (std::size_t q = 1; q <= items; ++q) setup.valuations[t][q] = Rational(rng.range(0, 8));
  for (std::size_t t = 0; t < num_types; ++t) {
    Lottery lot;
    lot.price = Rational(rng.range(0, 5));
    auto weights = tariff::detail::random_simplex_point(rng, items + 1, /*positive=*/false);
    lot.distribution = std::move(weights);
    lot.item_prices.assign(items + 1, UsagePrice(Rational(0)));
    for (std::size_t q = 1; q <= items; ++q) {
      if (!finite_prices && rng.range(0, 4) == 0)
        lot.item_prices[q] = UsagePrice::exclude();
      else
        lot.item_prices[q] = UsagePrice(Rational(rng.range(0, 18), 2));
    }
    setup.menu.lotteries.push_back(std::move(lot));
  }
  return setup;
}

}  // namespace

TEST_CASE("voluntary strip on the worked example") {
  // one type, items worth (4, 2) at prices (3, 5), half mass each, w = 1
  LotteryMenu menu;
  Lottery lot;
  lot.price = Rational(1);
  lot.distribution = {Rational(0), Rational(1, 2), Rational(1, 2)};
  lot.item_prices = {UsagePrice(Rational(0)), UsagePrice(Rational(3)), UsagePrice(Rational(5))};
  menu.lotteries = {lot};
  const std::vector<std::vector<Rational>> vals = {{Rational(0), Rational(4), Rational(2)}};
  const std::vector<Rational> mu = {Rational(1)};

  CHECK(lottery_utility(0, lot, vals, Regime::voluntary) == Rational(-1, 2));
  CHECK(lottery_revenue(0, lot, vals, Regime::voluntary) == Rational(5, 2));

  const LotteryMenu stripped = strip_usage_lottery(menu, vals, mu, Regime::voluntary);
  const Lottery& out = stripped.lotteries[0];
  CHECK(out.price == Rational(5, 2));  // 1 + 1/2 * 3
  CHECK(out.distribution ==
        std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(0)});  // rejected mass moved
  for (const auto& x : out.item_prices) CHECK(x.value() == 0);
  CHECK(lottery_utility(0, out, vals, Regime::voluntary) == Rational(-1, 2));
  CHECK(lottery_equiv_check(menu, stripped, vals, mu, Regime::voluntary));
}

TEST_CASE("mandatory strip on the worked example") {
  LotteryMenu menu;
  Lottery lot;
  lot.price = Rational(1);
  lot.distribution = {Rational(0), Rational(1, 2), Rational(1, 2)};
  lot.item_prices = {UsagePrice(Rational(0)), UsagePrice(Rational(3)), UsagePrice(Rational(5))};
  menu.lotteries = {lot};
  const std::vector<std::vector<Rational>> vals = {{Rational(0), Rational(4), Rational(2)}};
  const std::vector<Rational> mu = {Rational(1)};

  const LotteryMenu stripped = strip_usage_lottery(menu, vals, mu, Regime::mandatory);
  const Lottery& out = stripped.lotteries[0];
  CHECK(out.price == Rational(5));  // 1 + 1/2*3 + 1/2*5
  CHECK(out.distribution == lot.distribution);
  CHECK(lottery_equiv_check(menu, stripped, vals, mu, Regime::mandatory));

  LotteryMenu excluded = menu;
  excluded.lotteries[0].item_prices[1] = UsagePrice::exclude();
  CHECK_THROWS_AS(strip_usage_lottery(excluded, vals, mu, Regime::mandatory), ValidationError);
}

TEST_CASE("already-free menus are fixed points") {
  SplitMix64 rng(660);
  RandomLotterySetup setup = random_setup(rng, 2, 3, true);
  for (auto& lot : setup.menu.lotteries)
    for (auto& x : lot.item_prices) x = UsagePrice(Rational(0));
  for (const Regime mode : {Regime::voluntary, Regime::mandatory}) {
    const LotteryMenu out = strip_usage_lottery(setup.menu, setup.valuations, setup.mu, mode);
    for (std::size_t t = 0; t < 2; ++t) {
      CHECK(out.lotteries[t].price == setup.menu.lotteries[t].price);
      CHECK(out.lotteries[t].distribution == setup.menu.lotteries[t].distribution);
    }
  }
}

TEST_CASE("equivalence and dominance over random menus") {
  SplitMix64 rng(661);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t num_types = 1 + trial % 3;
    const std::size_t items = 1 + trial % 4;
    const bool finite = trial % 2 == 0;
    const RandomLotterySetup setup = random_setup(rng, num_types, items, finite);

    const LotteryMenu voluntary =
        strip_usage_lottery(setup.menu, setup.valuations, setup.mu, Regime::voluntary);
    CHECK(lottery_equiv_check(setup.menu, voluntary, setup.valuations, setup.mu, Regime::voluntary));
    // the transformed lottery is weakly worse for every other type
    for (std::size_t t = 0; t < num_types; ++t)
      for (std::size_t u = 0; u < num_types; ++u) {
        const Rational before =
            lottery_utility(u, setup.menu.lotteries[t], setup.valuations, Regime::voluntary);
        const Rational after =
            lottery_utility(u, voluntary.lotteries[t], setup.valuations, Regime::voluntary);
        if (u == t) CHECK(after == before);
        else CHECK(after <= before);
      }

    if (finite) {
      const LotteryMenu mandatory =
          strip_usage_lottery(setup.menu, setup.valuations, setup.mu, Regime::mandatory);
      CHECK(lottery_equiv_check(setup.menu, mandatory, setup.valuations, setup.mu,
                                Regime::mandatory));
    }
  }
}

TEST_CASE("IC menus stay IC after the voluntary strip") {
  SplitMix64 rng(662);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 30; ++trial) {
    const std::size_t num_types = 2 + trial % 2;
    RandomLotterySetup setup = random_setup(rng, num_types, 1 + trial % 3, false);
    // make the menu IC: every type gets a copy of its utility-max lottery
    LotteryMenu ic;
    for (std::size_t t = 0; t < num_types; ++t) {
      std::size_t best = 0;
      Rational best_util =
          lottery_utility(t, setup.menu.lotteries[0], setup.valuations, Regime::voluntary);
      for (std::size_t k = 1; k < num_types; ++k) {
        const Rational u =
            lottery_utility(t, setup.menu.lotteries[k], setup.valuations, Regime::voluntary);
        if (u > best_util) {
          best = k;
          best_util = u;
        }
      }
      ic.lotteries.push_back(setup.menu.lotteries[best]);
    }
    ++checked;
    const LotteryMenu out = strip_usage_lottery(ic, setup.valuations, setup.mu, Regime::voluntary);
    CHECK(lottery_equiv_check(ic, out, setup.valuations, setup.mu, Regime::voluntary));
    for (std::size_t t = 0; t < num_types; ++t)
      for (std::size_t k = 0; k < num_types; ++k)
        CHECK(lottery_utility(t, out.lotteries[t], setup.valuations, Regime::voluntary) >=
              lottery_utility(t, out.lotteries[k], setup.valuations, Regime::voluntary));
  }
  CHECK(checked == 30);
}

TEST_CASE("perturbed prices fail the equivalence check") {
  SplitMix64 rng(663);
  RandomLotterySetup setup = random_setup(rng, 2, 2, true);
  const LotteryMenu out =
      strip_usage_lottery(setup.menu, setup.valuations, setup.mu, Regime::voluntary);
  LotteryMenu shifted = out;
  shifted.lotteries[0].price += 1;
  CHECK_FALSE(lottery_equiv_check(setup.menu, shifted, setup.valuations, setup.mu,
                                  Regime::voluntary));
}

TEST_CASE("trivial item helper") {
  LotteryMenu bare;
  Lottery lot;
  lot.price = Rational(2);
  lot.distribution = {Rational(1, 2), Rational(1, 2)};
  lot.item_prices = {UsagePrice(Rational(1)), UsagePrice(Rational(2))};
  bare.lotteries = {lot};
  const std::vector<std::vector<Rational>> vals = {{Rational(3), Rational(4)}};

  const auto [menu, full_vals] = with_trivial_item(bare, vals);
  CHECK(menu.lotteries[0].distribution.size() == 3);
  CHECK(full_vals[0][0] == 0);
  validate_lottery_menu(menu, full_vals, {Rational(1)});

  // the bare menu fails validation (no zero-value trivial item)
  CHECK_THROWS_AS(validate_lottery_menu(bare, vals, {Rational(1)}), ValidationError);
}
