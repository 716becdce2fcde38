#pragma once

// Lottery pricing transform: when every item distribution is available for
// sale, per-item usage payments are redundant. The transform folds item
// payments into the lottery price; under voluntary usage, rejected items'
// probability mass moves to the trivial item.

#include <cstddef>
#include <utility>
#include <vector>

#include "tariff/model.hpp"

namespace tariff {

// One lottery: a price, a distribution over items, and per-item prices.
// Item 0 is the trivial item: zero value for every type.
struct Lottery {
  Rational price;
  std::vector<Rational> distribution;
  std::vector<UsagePrice> item_prices;
};

// One lottery per type.
struct LotteryMenu {
  std::vector<Lottery> lotteries;
};

inline void validate_lottery_menu(const LotteryMenu& menu,
                                  const std::vector<std::vector<Rational>>& valuations,
                                  const std::vector<Rational>& mu) {
  if (menu.lotteries.size() != mu.size() || valuations.size() != mu.size())
    throw ValidationError("lottery menu, valuations and prior disagree on the type count");
  if (valuations.empty() || valuations[0].empty())
    throw ValidationError("lottery valuations must cover at least the trivial item");
  const std::size_t items = valuations[0].size();
  for (const auto& row : valuations) {
    if (row.size() != items) throw ValidationError("lottery valuation rows differ in length");
    if (row[0] != 0) throw ValidationError("item 0 must be the zero-value trivial item");
  }
  for (const auto& lot : menu.lotteries) {
    if (lot.price < 0) throw ValidationError("lottery price must be nonnegative");
    if (lot.distribution.size() != items || lot.item_prices.size() != items)
      throw ValidationError("lottery distribution/prices differ from the item count");
    Rational total = 0;
    for (const auto& p : lot.distribution) {
      if (p < 0 || p > 1) throw ValidationError("lottery distribution entry outside [0,1]");
      total += p;
    }
    if (total != 1) throw ValidationError("lottery distribution sums to " + tariff::to_string(total) +
                                          ", expected 1");
  }
}

// Prepends a trivial item (index 0, zero value, zero mass, zero price) to a
// menu stated without one.
inline std::pair<LotteryMenu, std::vector<std::vector<Rational>>> with_trivial_item(
    const LotteryMenu& menu, const std::vector<std::vector<Rational>>& valuations) {
  LotteryMenu out = menu;
  for (auto& lot : out.lotteries) {
    lot.distribution.insert(lot.distribution.begin(), Rational(0));
    lot.item_prices.insert(lot.item_prices.begin(), UsagePrice(Rational(0)));
  }
  std::vector<std::vector<Rational>> vals = valuations;
  for (auto& row : vals) row.insert(row.begin(), Rational(0));
  return {std::move(out), std::move(vals)};
}

inline Rational lottery_utility(std::size_t t, const Lottery& lot,
                                const std::vector<std::vector<Rational>>& valuations, Regime mode) {
  Rational u = -lot.price;
  for (std::size_t q = 0; q < lot.distribution.size(); ++q) {
    const auto& x = lot.item_prices[q];
    if (mode == Regime::mandatory) {
      if (x.is_exclude())
        throw ValidationError("mandatory usage is undefined for an EXCLUDE item price");
      u += lot.distribution[q] * (valuations[t][q] - x.value());
    } else if (!x.is_exclude() && valuations[t][q] >= x.value()) {
      u += lot.distribution[q] * (valuations[t][q] - x.value());
    }
  }
  return u;
}

inline Rational lottery_revenue(std::size_t t, const Lottery& lot,
                                const std::vector<std::vector<Rational>>& valuations, Regime mode) {
  Rational r = lot.price;
  for (std::size_t q = 0; q < lot.distribution.size(); ++q) {
    const auto& x = lot.item_prices[q];
    if (mode == Regime::mandatory) {
      if (x.is_exclude())
        throw ValidationError("mandatory usage is undefined for an EXCLUDE item price");
      r += lot.distribution[q] * x.value();
    } else if (!x.is_exclude() && valuations[t][q] >= x.value()) {
      r += lot.distribution[q] * x.value();
    }
  }
  return r;
}

inline Rational lottery_menu_revenue(const LotteryMenu& menu,
                                     const std::vector<std::vector<Rational>>& valuations,
                                     const std::vector<Rational>& mu, Regime mode) {
  Rational total = 0;
  for (std::size_t t = 0; t < menu.lotteries.size(); ++t)
    total += mu[t] * lottery_revenue(t, menu.lotteries[t], valuations, mode);
  return total;
}

// Removes item payments. Voluntary: accepted items keep their mass at price
// zero and their payments fold into the lottery price; rejected items' mass
// moves to the trivial item. Mandatory: all payments fold into the price and
// the distribution is unchanged. Per-type utility and revenue are preserved
// exactly; other types find the transformed lottery weakly worse.
inline LotteryMenu strip_usage_lottery(const LotteryMenu& menu,
                                       const std::vector<std::vector<Rational>>& valuations,
                                       const std::vector<Rational>& mu, Regime mode) {
  validate_lottery_menu(menu, valuations, mu);
  LotteryMenu out;
  out.lotteries.reserve(menu.lotteries.size());
  for (std::size_t t = 0; t < menu.lotteries.size(); ++t) {
    const Lottery& lot = menu.lotteries[t];
    Lottery stripped;
    stripped.item_prices.assign(lot.item_prices.size(), UsagePrice(Rational(0)));
    stripped.price = lot.price;
    if (mode == Regime::mandatory) {
      stripped.distribution = lot.distribution;
      for (std::size_t q = 0; q < lot.distribution.size(); ++q) {
        if (lot.item_prices[q].is_exclude())
          throw ValidationError("mandatory usage is undefined for an EXCLUDE item price");
        stripped.price += lot.distribution[q] * lot.item_prices[q].value();
      }
    } else {
      stripped.distribution.assign(lot.distribution.size(), Rational(0));
      Rational rejected_mass = 0;
      for (std::size_t q = 0; q < lot.distribution.size(); ++q) {
        const auto& x = lot.item_prices[q];
        if (!x.is_exclude() && valuations[t][q] >= x.value()) {
          stripped.distribution[q] = lot.distribution[q];
          stripped.price += lot.distribution[q] * x.value();
        } else {
          rejected_mass += lot.distribution[q];
        }
      }
      stripped.distribution[0] += rejected_mass;
    }
    out.lotteries.push_back(std::move(stripped));
  }
  return out;
}

// Exact equivalence of two menus: every type's utility for its own lottery
// and the seller's expected revenue coincide. `mode` gives the payment
// semantics of the original menu (a stripped menu has zero item prices, so
// its side reads the same either way).
inline bool lottery_equiv_check(const LotteryMenu& before, const LotteryMenu& after,
                                const std::vector<std::vector<Rational>>& valuations,
                                const std::vector<Rational>& mu, Regime mode = Regime::voluntary) {
  if (before.lotteries.size() != after.lotteries.size()) return false;
  validate_lottery_menu(before, valuations, mu);
  validate_lottery_menu(after, valuations, mu);
  for (std::size_t t = 0; t < before.lotteries.size(); ++t) {
    if (lottery_utility(t, before.lotteries[t], valuations, mode) !=
        lottery_utility(t, after.lotteries[t], valuations, mode))
      return false;
  }
  return lottery_menu_revenue(before, valuations, mu, mode) ==
         lottery_menu_revenue(after, valuations, mu, mode);
}

}  // namespace tariff
