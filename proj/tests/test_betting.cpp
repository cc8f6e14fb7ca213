#include <gtest/gtest.h>

#include "oracles.hpp"
#include "randlab/battery.hpp"
#include "randlab/betting.hpp"
#include "randlab/errors.hpp"

using namespace randlab;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

CylinderSet cyl(std::initializer_list<const char*> gens) {
  std::vector<BitString> v;
  for (const char* g : gens) v.push_back(BitString::parse(g));
  return CylinderSet(std::move(v));
}

const Measure kFair = Measure::fair_coin();

Rational lost_stakes(const PlayResult& r) {
  Rational sum = 0;
  for (const auto& step : r.steps) {
    if (!step.won) sum += step.stake;
  }
  return sum;
}

/// The strategies the transport checks run over.
std::vector<std::pair<std::string, BettingStrategy>> strategies(const Measure& mu) {
  return {
      {"doubling_00", doubling_strategy(cyl({"00"}), mu)},
      {"doubling_three", doubling_strategy(cyl({"000", "0110", "111"}), mu)},
      {"bit_all_in", bit_all_in(bs("0110101"))},
      {"nonmonotone", bit_all_in(bs("101"), {4, 0, 2})},
      {"likelihood", likelihood_ratio(Measure::bernoulli(Rational(3, 4)), mu, 7)},
      {"zero_stake", zero_stake(5)},
      {"zero_bet", zero_bet()},
  };
}

}  // namespace

TEST(Payoff, ConditionalQuotient) {
  EXPECT_EQ(kl_payoff(kFair, {{2, true}, {6, false}}, 4, true), 1);
  const Measure mu = Measure::bernoulli(Rational(1, 3));
  EXPECT_EQ(kl_payoff(mu, {}, 0, true), 2);
  EXPECT_EQ(kl_payoff(mu, {}, 0, false), Rational(1, 2));
  EXPECT_FALSE(kl_payoff(null_one_measure(), {}, 0, true).has_value());
  EXPECT_FALSE(kl_payoff(null_one_measure(), {{0, true}}, 1, false).has_value());
  EXPECT_THROW(kl_payoff(mu, {{3, true}}, 3, false), PreconditionError);
}

TEST(Payoff, NonIndependentMeasure) {
  // P(x0=1) = 3/4, then fair given x0 = 1.
  const Measure mu = Measure::split_table({{BitString{}, Rational(3, 4)}, {bs("1"), Rational(1, 2)}, {bs("0"), Rational(1, 5)}});
  // Knowing x1 = 1: mu(x0=0, x1=1) = 1/4 * 1/5, mu(x0=1, x1=1) = 3/4 * 1/2.
  EXPECT_EQ(kl_payoff(mu, {{1, true}}, 0, false), (Rational(3, 8)) / (Rational(1, 20)));
}

TEST(DecidableSet, MassesAddOverIntersectionAndDifference) {
  const Measure mu = Measure::bernoulli(Rational(2, 5));
  const DecidableSet a = DecidableSet::from_cylinders(cyl({"00", "101"}));
  const DecidableSet b = DecidableSet::bit(2, true);
  EXPECT_EQ(a.intersection(b).mass(mu) + a.difference(b).mass(mu), a.mass(mu));
  EXPECT_EQ(DecidableSet::whole().mass(mu), 1);
  EXPECT_TRUE(DecidableSet::whole().difference(DecidableSet::whole()).is_empty());
  EXPECT_EQ(a.contains(bs("0")), std::nullopt);
  EXPECT_EQ(a.contains(bs("001")), true);
  EXPECT_EQ(a.contains(bs("100")), false);
  EXPECT_EQ(DecidableSet::cylinder(bs("01")).as_cylinder(), bs("01"));
}

TEST(Play, DoublingExamples) {
  const BettingStrategy s = doubling_strategy(cyl({"00"}), kFair);
  const PlayResult win = play(s, kFair, bs("00"));
  ASSERT_FALSE(win.steps.empty());
  EXPECT_EQ(win.steps[0].stake, Rational(1, 3));
  EXPECT_EQ(win.steps[0].payoff, 3);
  EXPECT_EQ(win.trace.values, (std::vector<Rational>{1, 2}));
  const PlayResult loss = play(s, kFair, bs("01"));
  EXPECT_EQ(loss.trace.values, (std::vector<Rational>{1, Rational(2, 3)}));
  const PlayResult none = play(doubling_strategy(CylinderSet{}, kFair), kFair, bs("0101"));
  EXPECT_TRUE(none.steps.empty());
  EXPECT_EQ(none.trace.values, (std::vector<Rational>{1}));
  EXPECT_THROW(doubling_strategy(cyl({"0", "10"}), kFair), PreconditionError);
}

TEST(Play, ZeroStakeKeepsCapital) {
  const PlayResult r = play(zero_stake(6), Measure::bernoulli(Rational(1, 3)), bs("110100"));
  EXPECT_EQ(r.steps.size(), 6u);
  for (const auto& v : r.trace.values) EXPECT_EQ(v, 1);
  EXPECT_EQ(r.halt, HaltReason::horizon);
}

TEST(Play, NonmonotoneAllInMatchesInverseMass) {
  const Measure mu = Measure::bernoulli(Rational(1, 3));
  const BettingStrategy s = bit_all_in(bs("10"), {3, 0});
  EXPECT_EQ(play(s, mu, bs("0001")).trace.values, (std::vector<Rational>{1, 3, Rational(9, 2)}));
  EXPECT_EQ(play(s, mu, bs("0000")).trace.values.back(), 0);
  EXPECT_EQ(play(s, mu, bs("00")).halt, HaltReason::undetermined);
  EXPECT_THROW(bit_all_in(bs("10"), {1, 1}), ConstructionError);
}

TEST(Play, LikelihoodRatioTracksQuotient) {
  const Measure model = Measure::bernoulli(Rational(3, 4));
  const BettingStrategy s = likelihood_ratio(model, kFair, 8);
  for (const auto& x : oracle::strings_of_length(8)) {
    const PlayResult r = play(s, kFair, BitString::parse(x));
    EXPECT_EQ(r.trace.values.back(), oracle::iid_mass(Rational(3, 4), x) * pow2(8)) << x;
  }
}

TEST(Play, ViolationsAbortTheTrace) {
  const BettingStrategy greedy = parse_decision_table("-\tbit:0=1\t2\n");
  const PlayResult r = play(greedy, kFair, bs("1"));
  EXPECT_EQ(r.halt, HaltReason::violation);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_FALSE(check_strategy(greedy, kFair, 2).pass());
  const BettingStrategy certain = parse_decision_table("-\tbit:0=0\t1/2\n");
  EXPECT_EQ(play(certain, null_one_measure(), bs("0")).halt, HaltReason::violation);
  const BettingStrategy whole = parse_decision_table("ε\twhole\t0\n");
  EXPECT_EQ(play(whole, kFair, bs("0")).halt, HaltReason::violation);
}

TEST(Play, DecisionTableParseErrors) {
  try {
    parse_decision_table("-\tbit:0=1\t1/2\n0\tcyl:0x\t1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_decision_table("-\tbit:0=1\n"), ParseError);
}

TEST(Doubling, ExhaustiveAtDepthTen) {
  const std::vector<CylinderSet> sets{cyl({"00"}), cyl({"0101", "11", "1000000"}), cyl({"01", "0011111111"}),
                                      cyl({"000000000", "111"})};
  for (const auto& u : sets) {
    const BettingStrategy s = doubling_strategy(u, kFair);
    const Rational m = u.mass(kFair);
    const Rational loser = (1 - 2 * m) / (1 - m);
    for_each_string(10, [&](const BitString& x) {
      const PlayResult r = play(s, kFair, x);
      for (const auto& v : r.trace.values) {
        EXPECT_GE(v, 0);
        EXPECT_LE(v, 2);
      }
      EXPECT_LE(lost_stakes(r), 1);
      const Rational& final = r.trace.values.back();
      if (u.covers(x)) {
        EXPECT_EQ(final, 2) << x;
      } else {
        EXPECT_EQ(final, loser) << x;
      }
    });
  }
}

TEST(Doubling, CombinedWagerConsistency) {
  // After losing on the first k generators, the capital equals one
  // combined wager of size m/(1-m) on their union, lost.
  const CylinderSet u = cyl({"000", "0110", "10", "11101"});
  const BettingStrategy s = doubling_strategy(u, kFair);
  for_each_string(8, [&](const BitString& x) {
    const PlayResult r = play(s, kFair, x);
    Rational union_mass = 0;
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      if (r.steps[k].won) break;
      union_mass += kFair.mass(u.generators()[k]);
      const Rational combined = union_mass / (1 - union_mass);
      EXPECT_EQ(r.trace.values[k + 1], 1 - combined) << x << " step " << k;
    }
  });
}

TEST(Cantor, DoublingKnowledgeMeasure) {
  const CantorView v = strategy_to_cantor(doubling_strategy(cyl({"00"}), kFair), kFair, 4);
  EXPECT_EQ(v.nu.mass(bs("1")), Rational(1, 4));
  EXPECT_EQ(v.nu.mass(bs("0")), Rational(3, 4));
  EXPECT_EQ(v.capital.capital(bs("1")), 2);
  EXPECT_EQ(v.capital.capital(bs("0")), Rational(2, 3));
}

TEST(Cantor, ZeroStakeIsConstant) {
  const CantorView v = strategy_to_cantor(zero_stake(4), kFair, 6);
  for_each_string_upto(6, [&](const BitString& s) {
    if (v.nu.mass(s) > 0) {
      EXPECT_EQ(v.capital.capital(s), 1);
    }
  });
}

TEST(Cantor, TransportedMartingalesAreFairAndReplayPlay) {
  const Measure mus[] = {kFair, Measure::bernoulli(Rational(1, 3))};
  for (const Measure& mu : mus) {
    for (const auto& [name, s] : strategies(mu)) {
      const std::size_t d = 9;
      const CantorView v = strategy_to_cantor(s, mu, d);
      EXPECT_TRUE(check_fairness(v.capital, d).pass()) << name;
      EXPECT_TRUE(check_additivity(v.nu, d).pass()) << name;
      EXPECT_TRUE(check_strategy(s, mu, d).pass()) << name;
      for_each_string(d, [&](const BitString& x) {
        if (mu.mass(x) == 0) return;
        const PlayResult r = play(s, mu, x);
        if (r.halt == HaltReason::undetermined) return;
        const CapitalTrace t = run(v.capital, r.trace.prefix);
        EXPECT_EQ(t.values, r.trace.values) << name << " " << x;
      });
    }
  }
}

TEST(Classify, Examples) {
  const StrategyClass bits = classify_strategy(bit_all_in(bs("01101")), kFair, 5);
  EXPECT_TRUE(bits.balanced);
  EXPECT_EQ(bits.exhaustive_trend, Rational(1, 32));
  EXPECT_FALSE(classify_strategy(doubling_strategy(cyl({"00"}), kFair), kFair, 3).balanced);
  const StrategyClass idle = classify_strategy(zero_bet(), kFair, 6);
  EXPECT_EQ(idle.exhaustive_trend, 1);
}

TEST(Classify, BalancedUnderFairCoinInducesFairCoin) {
  for (const auto& s : {bit_all_in(bs("011010")), bit_all_in(bs("110100"), {5, 3, 1, 0, 2, 4})}) {
    ASSERT_TRUE(classify_strategy(s, kFair, 6).balanced);
    EXPECT_TRUE(equal_to_depth(strategy_to_cantor(s, kFair, 6).nu, kFair, 6));
  }
}

TEST(Morphism, Examples) {
  const auto doubling = strategy_to_interval_morphism(doubling_strategy(cyl({"00"}), kFair), kFair, 3);
  EXPECT_EQ(doubling.at(BitString{}), (Interval{0, 1}));
  EXPECT_EQ(doubling.at(bs("0")), (Interval{0, Rational(3, 4)}));
  EXPECT_EQ(doubling.at(bs("1")), (Interval{Rational(3, 4), 1}));
  for (const auto& [h, iv] : strategy_to_interval_morphism(zero_bet(), kFair, 4)) {
    EXPECT_EQ(iv, (Interval{0, 1})) << h;
  }
}

TEST(Morphism, LengthsAreMassesAndSiblingsPartition) {
  const Measure mu = Measure::bernoulli(Rational(3, 7));
  for (const auto& [name, s] : strategies(mu)) {
    const CantorView v = strategy_to_cantor(s, mu, 7);
    const auto map = strategy_to_interval_morphism(s, mu, 7);
    for (const auto& [h, iv] : map) {
      EXPECT_EQ(iv.length(), v.nu.mass(h)) << name << " " << h;
      if (h.size() == 7) continue;
      const auto lo = map.find(h.child(false));
      const auto hi = map.find(h.child(true));
      if (lo != map.end() && hi != map.end()) {
        EXPECT_EQ(lo->second.lo, iv.lo);
        EXPECT_EQ(lo->second.hi, hi->second.lo);
        EXPECT_EQ(hi->second.hi, iv.hi);
      }
    }
  }
}
