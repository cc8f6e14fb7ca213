#include <gtest/gtest.h>

#include "randlab/battery.hpp"
#include "randlab/errors.hpp"
#include "randlab/spec_io.hpp"

using namespace randlab;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

}  // namespace

TEST(SpecIO, MeasureSpecsRoundTrip) {
  for (const auto& [name, mu] : measure_families()) {
    const Json j = to_json(mu.spec());
    const Measure back = Measure::from_spec(measure_spec_from_json(parse_json(j.dump())));
    EXPECT_TRUE(equal_to_depth(back, mu, 10)) << name;
    EXPECT_EQ(to_json(back.spec()).dump(), j.dump()) << name;
  }
}

TEST(SpecIO, ShortMeasureForms) {
  EXPECT_EQ(parse_measure("fair").mass(bs("01")), Rational(1, 4));
  EXPECT_EQ(parse_measure("bernoulli:1/3").mass(bs("1")), Rational(1, 3));
  EXPECT_EQ(parse_measure(R"({"kind": "split_table", "splits": [["", "0/1"]]})").mass(bs("1")), 0);
  EXPECT_THROW(parse_measure("bernoulli:7/3"), ParseError);
  EXPECT_THROW(parse_measure("coin"), ParseError);
}

TEST(SpecIO, MaterializedDerivedMeasures) {
  const Measure derived = to_measure(from_measures(Measure::bernoulli(Rational(1, 3)), Measure::fair_coin()));
  const Measure flat = materialize(derived, 6);
  EXPECT_TRUE(equal_to_depth(flat, derived, 6));
  const Json j = measure_json(derived, 6);
  EXPECT_EQ(j.at("kind"), "split_table");
  const Measure unlimited = materialize(Measure::split_table({}, 4), 2);
  EXPECT_EQ(unlimited.mass(BitString{}), 4);
}

TEST(SpecIO, JsonErrorsCarryLineAndColumn) {
  try {
    parse_json("{\n  \"kind\": ,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
  EXPECT_THROW(measure_spec_from_json(parse_json(R"({"kind": "dirac"})")), ParseError);
  EXPECT_THROW(measure_spec_from_json(parse_json(R"({"kind": "bernoulli", "p": 0.5})")), ParseError);
}

TEST(SpecIO, MartingaleForms) {
  EXPECT_EQ(parse_martingale("quotient:fair/bernoulli:1/3").capital(bs("1")), Rational(3, 2));
  EXPECT_EQ(parse_martingale("quotient:bernoulli:1/3/fair").capital(bs("1")), Rational(2, 3));
  EXPECT_EQ(parse_martingale("all_in:1@bernoulli:1/4").capital(bs("1")), 4);
  EXPECT_EQ(parse_martingale("identity").capital(bs("0101")), 1);
  EXPECT_NO_THROW(parse_martingale("battery:all_in_0"));
  EXPECT_THROW(parse_martingale("battery:nope"), ParseError);
  EXPECT_THROW(parse_martingale("all_in:2"), ParseError);
}

TEST(SpecIO, TestBundlesRoundTrip) {
  const Measure fair = Measure::fair_coin();
  const IntegralStep g = integral_with_own_bound(fair, 2, {0, 1, 0, 4});
  const BoundedMLTest t = integral_to_bounded_ml(g, 2);
  const VitaliTest v = bounded_ml_to_vitali(t);

  const TestBundle gb = test_bundle_from_json(parse_json(to_json(g, 4).dump()));
  ASSERT_TRUE(gb.integral);
  EXPECT_EQ(gb.integral->values, g.values);
  EXPECT_TRUE(equal_to_depth(gb.integral->bound, g.bound, 4));

  const TestBundle tb = test_bundle_from_json(parse_json(to_json(t, 4).dump()));
  ASSERT_TRUE(tb.bounded_ml);
  EXPECT_EQ(tb.bounded_ml->test.levels, t.test.levels);
  EXPECT_TRUE(equal_to_depth(tb.bounded_ml->bound, t.bound, 4));

  const TestBundle vb = test_bundle_from_json(parse_json(to_json(v, 4).dump()));
  ASSERT_TRUE(vb.vitali);
  EXPECT_EQ(vb.vitali->pieces, v.pieces);

  const TestBundle mb = test_bundle_from_json(parse_json(to_json(t.test).dump()));
  ASSERT_TRUE(mb.ml);
  EXPECT_EQ(mb.kind, "ml");
}

TEST(SpecIO, MartingaleTablesRoundTrip) {
  const Martingale m = battery_martingale("table_over_bernoulli_2_5");
  Json j = martingale_json(m, 5);
  j["kind"] = "martingale";
  const TestBundle b = test_bundle_from_json(parse_json(j.dump()));
  ASSERT_TRUE(b.martingale);
  for_each_string_upto(5, [&](const BitString& s) { EXPECT_EQ(b.martingale->capital(s), m.capital(s)) << s; });
}

TEST(SpecIO, BundleErrors) {
  EXPECT_THROW(test_bundle_from_json(parse_json(R"({"kind": "oracle"})")), ParseError);
  EXPECT_THROW(test_bundle_from_json(parse_json(R"({"kind": "ml", "levels": [["0", "01"]]})")), ParseError);
  EXPECT_THROW(
      test_bundle_from_json(parse_json(R"({"kind": "integral", "depth": 2, "values": ["0/1"], "bound": {"kind": "fair_coin"}})")),
      ParseError);
  EXPECT_THROW(read_text_file("/nonexistent/file"), ParseError);
}

TEST(SpecIO, CylinderSetJson) {
  const CylinderSet u(std::vector<BitString>{bs("011"), bs("100")});
  EXPECT_EQ(cylinder_set_from_json(to_json(u)), u);
  EXPECT_THROW(cylinder_set_from_json(parse_json(R"("011")")), ParseError);
}
