#include <catch2/catch_amalgamated.hpp>

#include "tariff/instances.hpp"
#include "tariff/io.hpp"

using namespace tariff;

TEST_CASE("rationals from JSON") {
  CHECK(rational_from_json(Json(3), "x") == 3);
  CHECK(rational_from_json(Json("3/4"), "x") == Rational(3, 4));
  CHECK(rational_from_json(Json("0.25"), "x") == Rational(1, 4));
  CHECK(rational_from_json(Json("0.9"), "x") == Rational(9, 10));
  CHECK_THROWS_AS(rational_from_json(Json(0.5), "x"), ValidationError);  // binary float
  CHECK_THROWS_AS(rational_from_json(Json("1/0"), "x"), ValidationError);
  CHECK_THROWS_AS(rational_from_json(Json(nullptr), "x"), ValidationError);
}

TEST_CASE("instance round-trip") {
  const Instance inst = gen_random(2, 2, 3, 99, 9);
  const Json j = instance_to_json(inst);
  const ParsedInstance parsed = parse_instance(j);
  CHECK(parsed.instance.prior == inst.prior);
  CHECK(parsed.instance.costs == inst.costs);
  CHECK(parsed.instance.transitions == inst.transitions);
  CHECK(parsed.instance.valuations == inst.valuations);
  CHECK_FALSE(parsed.single_param.has_value());
}

TEST_CASE("single-parameter instance round-trip") {
  const SingleParamInstance sp = gen_single_contract_profit_gap();
  const Json j = instance_to_json(sp.base, &sp);
  const ParsedInstance parsed = parse_instance(j);
  REQUIRE(parsed.single_param.has_value());
  CHECK(parsed.single_param->alpha == sp.alpha);
  CHECK(parsed.single_param->baseline == sp.baseline);
  CHECK(parsed.instance.valuations == sp.base.valuations);

  // derived valuations work without the explicit matrix
  Json no_v = j;
  no_v.erase("v");
  CHECK(parse_instance(no_v).instance.valuations == sp.base.valuations);

  // a mismatched matrix is rejected
  Json bad_v = j;
  bad_v["v"][0][0] = "100";
  CHECK_THROWS_AS(parse_instance(bad_v), ValidationError);
}

TEST_CASE("instance validation errors carry the field") {
  Json j = instance_to_json(gen_usage_gap());
  j["p"][0][0] = "2/5";  // row sums to 9/10
  try {
    parse_instance(j);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("row 0") != std::string::npos);
    CHECK(what.find("9/10") != std::string::npos);
  }

  Json missing = instance_to_json(gen_usage_gap());
  missing.erase("mu");
  CHECK_THROWS_AS(parse_instance(missing), ValidationError);

  Json negative_t = instance_to_json(gen_usage_gap());
  negative_t["T"] = 0;
  CHECK_THROWS_AS(parse_instance(negative_t), ValidationError);
}

TEST_CASE("menu round-trip with EXCLUDE markers") {
  const Instance inst = gen_usage_gap();
  IndirectMenu menu;
  menu.contracts = {Contract(0, Rational(3, 4), {UsagePrice(Rational(0)), UsagePrice::exclude()}),
                    Contract(0, Rational(1, 2), {UsagePrice(Rational(1, 2)), UsagePrice(Rational(0))})};
  const Json j = menu_to_json(menu);
  CHECK(j["contracts"][0]["x"][1] == "EXCLUDE");
  const IndirectMenu parsed = parse_menu(j, inst);
  REQUIRE(parsed.contracts.size() == 2);
  CHECK(parsed.contracts[0].upfront == Rational(3, 4));
  CHECK(parsed.contracts[0].usage[1].is_exclude());
  CHECK(parsed.contracts[1].usage[0].value() == Rational(1, 2));

  Json wrong_len = j;
  wrong_len["contracts"][0]["x"].push_back("0");
  CHECK_THROWS_AS(parse_menu(wrong_len, inst), ValidationError);

  Json negative = j;
  negative["contracts"][0]["w"] = "-1";
  CHECK_THROWS_AS(parse_menu(negative, inst), ValidationError);
}

TEST_CASE("solve results serialize with exact and decimal profit") {
  const SolveResult r = solve_exact(gen_usage_gap());
  const Json j = solve_result_to_json(r);
  CHECK(j["profit"]["rational"] == "3/4");
  CHECK(j["profit"]["decimal"] == "0.750000");
  CHECK(j["regime"] == "full");
  CHECK(j["menu"]["contracts"].size() == r.menu.contracts.size());
}
