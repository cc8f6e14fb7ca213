#include <gtest/gtest.h>

#include "oracles.hpp"
#include "randlab/battery.hpp"
#include "randlab/errors.hpp"
#include "randlab/randomness_tests.hpp"

using namespace randlab;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

CylinderSet cyl(std::initializer_list<const char*> gens) {
  std::vector<BitString> v;
  for (const char* g : gens) v.push_back(BitString::parse(g));
  return CylinderSet(std::move(v));
}

const Measure kFair = Measure::fair_coin();

}  // namespace

TEST(CylinderSet, RejectsNonPrefixFreeGenerators) {
  EXPECT_THROW(cyl({"0", "01"}), ConstructionError);
  EXPECT_THROW(CylinderSet::parse("1\n10\n"), ParseError);
  EXPECT_NO_THROW(cyl({"00", "01", "1"}));
}

TEST(CylinderSet, ParseSkipsCommentsAndReportsLines) {
  const CylinderSet u = CylinderSet::parse("# U_1\n\n011\n100\n");
  EXPECT_EQ(u, cyl({"011", "100"}));
  try {
    CylinderSet::parse("01\n0x1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_EQ(CylinderSet::parse(u.serialize()), u);
}

TEST(CylinderSet, MassAndCoverage) {
  const CylinderSet u = cyl({"011", "100"});
  EXPECT_EQ(u.mass(kFair), Rational(1, 4));
  EXPECT_TRUE(u.covers(bs("0110")));
  EXPECT_TRUE(u.covers(bs("100")));
  EXPECT_FALSE(u.covers(bs("01")));
  EXPECT_EQ(u.mass_within(kFair, bs("0")), Rational(1, 8));
  EXPECT_EQ(u.mass_within(kFair, bs("01")), Rational(1, 8));
  EXPECT_EQ(u.mass_within(kFair, bs("0111")), Rational(1, 16));
  EXPECT_EQ(u.mass_within(kFair, bs("11")), 0);
}

TEST(CylinderSet, IndexMatchesDirectSums) {
  const Measure mu = Measure::bernoulli(Rational(2, 5));
  const CylinderSet u = cyl({"000", "0010", "01", "1101", "11100"});
  const CylinderMassIndex index(u, mu);
  for_each_string_upto(7, [&](const BitString& s) {
    Rational direct = 0;
    for (const auto& x : oracle::strings_of_length(7)) {
      const BitString p = BitString::parse(x);
      if (s.is_prefix_of(p) && u.covers(p)) direct += mu.mass(p);
    }
    EXPECT_EQ(index.within(s), direct) << s;
  });
}

TEST(CylinderSet, MergedJoinsSiblings) {
  EXPECT_EQ(cyl({"000", "001", "01", "11"}).merged(), cyl({"0", "11"}));
  EXPECT_EQ(cyl({"0", "1"}).merged(), cyl({""}));
}

TEST(Conversion, MartingaleToIntegralHandExample) {
  const Martingale m = Martingale::table(kFair, {{BitString{}, 2}, {bs("0"), 4}, {bs("1"), 0}});
  const SavingsPair sp = savings_transform(m, SavingsOptions{false, false});
  const IntegralStep g = martingale_to_integral(sp, 1);
  EXPECT_EQ(g.value(bs("0")), 3);
  EXPECT_EQ(g.value(bs("1")), 0);
  EXPECT_EQ(g.bound.mass(bs("0")), 2);
  EXPECT_EQ(g.integral(bs("0")), Rational(3, 2));
  EXPECT_EQ(g.witness_integral(bs("0")), Rational(2));
  EXPECT_TRUE(verify_test_bounds(g, 1).pass());
}

TEST(Conversion, IdentityMartingaleGivesZeroIntegral) {
  const SavingsPair sp = savings_transform(Martingale::constant(kFair, 1), SavingsOptions{false, false});
  const IntegralStep g = martingale_to_integral(sp, 4);
  for (const Rational& v : g.values) EXPECT_EQ(v, 0);
  EXPECT_TRUE(equal_to_depth(g.bound, kFair, 6));
}

TEST(Conversion, MarkovStep) {
  const IntegralStep g = integral_with_own_bound(kFair, 2, {0, 0, 0, 4});
  const BoundedMLTest t = integral_to_bounded_ml(g, 2);
  ASSERT_EQ(t.test.levels.size(), 2u);
  EXPECT_EQ(t.test.levels[0], cyl({"11"}));
  EXPECT_TRUE(t.test.levels[1].empty());
  EXPECT_EQ(t.test.levels[0].mass_within(kFair, bs("1")), Rational(1, 4));
  EXPECT_EQ(t.bound.mass(bs("1")), 1);
  EXPECT_TRUE(verify_test_bounds(t, 2).pass());
  const VitaliTest v = bounded_ml_to_vitali(t);
  EXPECT_EQ(v.pieces, t.test.levels);
  EXPECT_TRUE(verify_test_bounds(v, 2).pass());
  // Back to a martingale: M(11) = nu(11)/mu(11) = 1/(1/4).
  EXPECT_EQ(integral_to_martingale(g).capital(bs("11")), 4);
}

TEST(Conversion, ZeroIntegralHasEmptyLevels) {
  const IntegralStep g = integral_with_own_bound(kFair, 3, std::vector<Rational>(8, 0));
  const BoundedMLTest t = integral_to_bounded_ml(g, 4);
  for (const auto& level : t.test.levels) EXPECT_TRUE(level.empty());
  EXPECT_TRUE(bounded_ml_to_vitali(BoundedMLTest{MLTest{kFair, {}}, kFair}).pieces.empty());
}

TEST(Conversion, VitaliToIntegralCountsPieces) {
  const VitaliTest stacked{kFair, {cyl({"0"}), cyl({"0"})}, Measure::split_table({}, 2)};
  const IntegralStep g = vitali_to_integral(stacked, 1);
  EXPECT_EQ(g.values, (std::vector<Rational>{2, 0}));
  EXPECT_EQ(g.integral(BitString{}), 1);

  const VitaliTest apart{kFair, {cyl({"00"}), cyl({"01"})}, kFair};
  const IntegralStep h = vitali_to_integral(apart, 2);
  EXPECT_EQ(h.values, (std::vector<Rational>{1, 1, 0, 0}));
  EXPECT_EQ(h.integral(BitString{}), Rational(1, 2));
  EXPECT_THROW(vitali_to_integral(apart, 1), PreconditionError);
}

TEST(Conversion, ZeroIntegralWithBaseBoundIsUnitMartingale) {
  IntegralStep g;
  g.base = kFair;
  g.depth = 3;
  g.values.assign(8, 0);
  g.bound = kFair;
  const Martingale m = integral_to_martingale(g);
  for_each_string_upto(5, [&](const BitString& s) { EXPECT_EQ(m.capital(s), 1); });
}

TEST(VerifyBounds, PlainMLTest) {
  EXPECT_TRUE(verify_test_bounds(MLTest{kFair, {cyl({"0"})}}).pass());
  EXPECT_FALSE(verify_test_bounds(MLTest{kFair, {cyl({"0", "10"})}}).pass());
  EXPECT_TRUE(verify_test_bounds(MLTest{kFair, {}}).pass());
  const AuditReport r = verify_test_bounds(MLTest{kFair, {cyl({"00"}), cyl({"000"})}});
  EXPECT_TRUE(r.pass());
  bool schnorr = false;
  for (const auto& [k, v] : r.facts) schnorr = schnorr || (k == "schnorr_style" && v == "true");
  EXPECT_TRUE(schnorr);
}

TEST(VerifyBounds, BoundedTestFailsBelowTheRoot) {
  // U_1 = {0} against nu = fair coin: equality at ε, but at σ = 0
  // mu(U_1 ∩ [0]) = 1/2 > 2^-1 nu(0) = 1/4.
  const AuditReport r = verify_test_bounds(BoundedMLTest{MLTest{kFair, {cyl({"0"})}}, kFair}, 3);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.violations.front().where, bs("0"));
  EXPECT_TRUE(verify_test_bounds(BoundedMLTest{MLTest{kFair, {}}, kFair}, 3).pass());
}

TEST(VerifyBounds, IntegralWitnessIsChecked) {
  IntegralStep g = integral_with_own_bound(kFair, 2, {1, 2, 0, 1});
  EXPECT_TRUE(verify_test_bounds(g, 4).pass());
  g.witness = std::vector<Rational>{0, 0, 0, 0};
  EXPECT_FALSE(verify_test_bounds(g, 4).pass());
  g.witness.reset();
  g.values[0] = -1;
  EXPECT_FALSE(verify_test_bounds(g, 4).pass());
}

TEST(Chain, BatteryOutputsPassAndFinalCapitalDominatesCellAverages) {
  const std::size_t d = 8;
  for (const auto& [name, m] : martingale_battery()) {
    const SavingsPair sp = savings_transform(m);
    const IntegralStep g = martingale_to_integral(sp, d);
    EXPECT_TRUE(verify_test_bounds(g, d).pass()) << name;
    const BoundedMLTest t = integral_to_bounded_ml(g);
    EXPECT_TRUE(verify_test_bounds(t, d).pass()) << name;
    const VitaliTest v = bounded_ml_to_vitali(t);
    EXPECT_TRUE(verify_test_bounds(v, d).pass()) << name;
    const IntegralStep h = vitali_to_integral(v, d);
    EXPECT_TRUE(verify_test_bounds(h, d).pass()) << name;
    const Martingale back = integral_to_martingale(h);
    EXPECT_TRUE(check_fairness(back, d).pass()) << name;
    for_each_string(d, [&](const BitString& c) {
      const Rational mass = h.base.mass(c);
      if (mass == 0) return;
      EXPECT_GE(*back.capital(c), h.integral(c) / mass) << name << " at " << c;
    });
  }
}

TEST(Chain, SandwichAtEveryDepth) {
  for (const auto& [name, m] : martingale_battery()) {
    for (std::size_t d = 1; d <= 10; d += 3) {
      const IntegralStep g = martingale_to_integral(savings_transform(m), d);
      for_each_string_upto(d, [&](const BitString& s) {
        const Rational nu = g.bound.mass(s);
        EXPECT_LE(g.integral(s), nu) << name << " " << s;
        EXPECT_LE(nu, *g.witness_integral(s)) << name << " " << s;
      });
    }
  }
}

TEST(Chain, StrictThresholdLevels) {
  // Cells with g exactly 2^n stay outside U_n; one step above, inside.
  const IntegralStep g = integral_with_own_bound(kFair, 2, {2, Rational(9, 4), 4, 0});
  const BoundedMLTest t = integral_to_bounded_ml(g, 2);
  EXPECT_EQ(t.test.levels[0], cyl({"01", "10"}));
  EXPECT_TRUE(t.test.levels[1].empty());
}
