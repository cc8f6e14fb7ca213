// Seeded property tests over hand-rolled generators of measures,
// martingales, request sets, regions and strategies.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "randlab/betting.hpp"
#include "randlab/cells.hpp"
#include "randlab/errors.hpp"
#include "randlab/machines.hpp"
#include "randlab/martingale.hpp"
#include "randlab/randomness_tests.hpp"

using namespace randlab;

namespace {

constexpr int kTrials = 40;

/// Split table over the strings of length < table_depth; with `positive`
/// every split lies strictly inside (0,1).
Measure random_measure(oracle::Gen& gen, bool positive, std::size_t table_depth = 4) {
  std::vector<std::pair<BitString, Rational>> splits;
  for_each_string_upto(table_depth - 1, [&](const BitString& s) {
    if (gen.below(3) == 0) return;
    splits.emplace_back(s, gen.unit(9, !positive));
  });
  return Measure::split_table(std::move(splits));
}

Measure random_base(oracle::Gen& gen) {
  switch (gen.below(3)) {
    case 0:
      return Measure::fair_coin();
    case 1:
      return Measure::bernoulli(gen.unit(7, false));
    default:
      return random_measure(gen, true);
  }
}

/// Kraft sum at most 1, outputs of length < 5.
RequestSet random_requests(oracle::Gen& gen) {
  RequestSet r;
  Rational budget = 1;
  const std::size_t count = gen.below(10);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 1 + gen.below(8);
    const Rational w = pow2(-static_cast<long>(n));
    if (w > budget) continue;
    budget -= w;
    r.requests.push_back({n, BitString::parse(gen.bits(gen.below(5)))});
  }
  return r;
}

}  // namespace

TEST(Properties, RandomMeasuresAreAdditive) {
  oracle::Gen gen(1);
  for (int t = 0; t < kTrials; ++t) {
    const Measure mu = random_measure(gen, false);
    EXPECT_TRUE(check_additivity(mu, 9).pass()) << mu.describe();
  }
}

TEST(Properties, QuotientsAreFairAndRoundTrip) {
  oracle::Gen gen(2);
  for (int t = 0; t < kTrials; ++t) {
    const Measure nu = random_measure(gen, false);
    const Measure mu = random_base(gen);
    const Martingale m = from_measures(nu, mu);
    EXPECT_TRUE(check_fairness(m, 9).pass());
    BitString w;
    EXPECT_TRUE(equal_to_depth(to_measure(m), nu, 9, &w)) << w;
  }
}

TEST(Properties, SavingsSandwichAndMonotonicity) {
  oracle::Gen gen(3);
  for (int t = 0; t < kTrials; ++t) {
    const Martingale m = from_measures(random_measure(gen, false), random_base(gen));
    const SavingsPair sp = savings_transform(m);
    EXPECT_TRUE(check_savings(sp, 9).pass());
    EXPECT_TRUE(check_fairness(sp.total(), 9).pass());
    EXPECT_EQ(sp.total().capital(BitString{}), 1);
  }
}

TEST(Properties, ChainOutputsPassTheirBounds) {
  oracle::Gen gen(4);
  const std::size_t d = 6;
  for (int t = 0; t < kTrials; ++t) {
    const Martingale m = from_measures(random_measure(gen, false), random_base(gen));
    const IntegralStep g = martingale_to_integral(savings_transform(m), d);
    ASSERT_TRUE(verify_test_bounds(g, d).pass());
    const BoundedMLTest b = integral_to_bounded_ml(g);
    EXPECT_TRUE(verify_test_bounds(b, d).pass());
    const VitaliTest v = bounded_ml_to_vitali(b);
    EXPECT_TRUE(verify_test_bounds(v, d).pass());
    const IntegralStep h = vitali_to_integral(v, d);
    EXPECT_TRUE(verify_test_bounds(h, d).pass());
    EXPECT_TRUE(check_fairness(integral_to_martingale(h), d).pass());
  }
}

TEST(Properties, MarkovLevelsCoverLargeIntegrand) {
  oracle::Gen gen(5);
  const std::size_t d = 5;
  for (int t = 0; t < kTrials; ++t) {
    const Measure mu = random_base(gen);
    std::vector<Rational> values;
    for (std::size_t i = 0; i < (std::size_t{1} << d); ++i) {
      Rational v(gen.below(40), 1 + gen.below(4));
      v.canonicalize();
      values.push_back(v);
    }
    const IntegralStep g = integral_with_own_bound(mu, d, values);
    const BoundedMLTest b = integral_to_bounded_ml(g);
    for (std::size_t n = 1; n <= b.test.levels.size(); ++n) {
      for_each_string(d, [&](const BitString& c) {
        EXPECT_EQ(b.test.levels[n - 1].covers(c), g.value(c) > pow2(static_cast<long>(n)));
      });
    }
  }
}

TEST(Properties, VilleMatchesBoundOnRandomMartingales) {
  oracle::Gen gen(6);
  for (int t = 0; t < kTrials; ++t) {
    const Martingale m = from_measures(random_measure(gen, false), random_base(gen));
    for (const Rational& c : {Rational(3, 2), Rational(2), Rational(5)}) {
      const VilleResult v = ville_audit(m, 8, c);
      EXPECT_TRUE(v.pass);
      EXPECT_LE(v.fraction, v.bound);
    }
  }
}

TEST(Properties, KraftChaitinHonorsRequests) {
  oracle::Gen gen(7);
  for (int t = 0; t < 300; ++t) {
    const RequestSet r = random_requests(gen);
    const PrefixFreeMachine m = kc_build(r);
    EXPECT_TRUE(check_kc(m, r).pass());
    EXPECT_EQ(m.kraft_sum(), r.kraft_sum());
    for (const auto& req : r.requests) EXPECT_LE(*complexity(m, req.output), req.length);
  }
}

TEST(Properties, NamesLandInTheirCells) {
  oracle::Gen gen(8);
  const std::vector<CellDecomposition> decs{CellDecomposition::binary_digits(), CellDecomposition::bary_grouped(3),
                                            CellDecomposition::bary_grouped(5), CellDecomposition::interleave(2)};
  for (const auto& dec : decs) {
    for (int t = 0; t < 200; ++t) {
      std::vector<Rational> p;
      for (std::size_t i = 0; i < dec.dim(); ++i) p.push_back(gen.unit(50, false));
      for (const auto policy : {BoundaryPolicy::strict, BoundaryPolicy::half_open}) {
        const NameResult r = name_of(dec, p, 8, policy);
        if (!r.name) {
          EXPECT_EQ(policy, BoundaryPolicy::strict);
          continue;
        }
        for (std::size_t k = 0; k <= 8; ++k) EXPECT_TRUE(dec.cell(r.name->prefix(k)).contains(p)) << dec.describe();
      }
    }
  }
}

TEST(Properties, OpenDecompositionsAreDisjointInnerCovers) {
  oracle::Gen gen(9);
  const CellDecomposition ter = CellDecomposition::bary_grouped(3);
  for (int t = 0; t < kTrials; ++t) {
    Rational a = gen.unit(20);
    Rational b = gen.unit(20);
    if (a > b) std::swap(a, b);
    const Region u = Region::interval(a, b);
    const OpenDecomposition o = decompose_open(ter, u, 7);
    Rational sum = 0;
    for (std::size_t i = 0; i < o.cells.size(); ++i) {
      const Box c = ter.cell(o.cells[i]);
      EXPECT_EQ(BaseMeasure::lebesgue().mass_within(c, u), ter.cell_mass(o.cells[i]));
      for (std::size_t j = 0; j < i; ++j) EXPECT_TRUE(c.intersect(ter.cell(o.cells[j])).empty());
      sum += ter.cell_mass(o.cells[i]);
    }
    EXPECT_EQ(sum, o.covered);
    EXPECT_EQ(o.covered + o.residual, b - a);
  }
}

TEST(Properties, TransferBoundsNest) {
  oracle::Gen gen(10);
  const CellDecomposition a = CellDecomposition::binary_digits();
  const CellDecomposition b = CellDecomposition::bary_grouped(3);
  const RefinementRelation rel = refine(a, b, 8, 3);
  for (int t = 0; t < kTrials; ++t) {
    const Measure nu = random_measure(gen, false);
    const auto kappa = transfer_measure(rel, nu);
    for (std::size_t i = 0; i < kappa.size(); ++i) {
      EXPECT_LE(kappa[i].low, kappa[i].high);
      const BitString& tau = kappa[i].target;
      if (tau.size() == 3) continue;
      const auto find = [&](const BitString& s) -> const KappaBounds& {
        for (const auto& k : kappa) {
          if (k.target == s) return k;
        }
        throw std::logic_error("missing target");
      };
      EXPECT_LE(find(tau.child(false)).low + find(tau.child(true)).low, kappa[i].high);
    }
  }
}

TEST(Properties, RandomStrategiesTransportToFairMartingales) {
  oracle::Gen gen(11);
  for (int t = 0; t < kTrials; ++t) {
    const Measure mu = random_base(gen);
    BettingStrategy s;
    if (gen.coin()) {
      const std::size_t n = 1 + gen.below(6);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < 8; ++i) order.push_back(i);
      std::shuffle(order.begin(), order.end(), gen.engine());
      order.resize(n);
      s = bit_all_in(BitString::parse(gen.bits(n)), order);
    } else {
      std::vector<BitString> gens;
      for (const auto& x : oracle::strings_of_length(4)) {
        if (gen.below(5) == 0) gens.push_back(BitString::parse(x));
      }
      const CylinderSet u(gens);
      if (u.mass(mu) > Rational(1, 2)) continue;
      s = doubling_strategy(u, mu);
    }
    const std::size_t d = 7;
    const CantorView v = strategy_to_cantor(s, mu, d);
    EXPECT_TRUE(check_strategy(s, mu, d).pass());
    EXPECT_TRUE(check_fairness(v.capital, d).pass());
    for_each_string(8, [&](const BitString& x) {
      const PlayResult r = play(s, mu, x);
      for (const auto& c : r.trace.values) EXPECT_GE(c, 0);
      if (r.halt == HaltReason::undetermined) return;
      EXPECT_EQ(run(v.capital, r.trace.prefix).values, r.trace.values);
    });
  }
}

TEST(Properties, DecidableSetAlgebraMatchesMembership) {
  oracle::Gen gen(12);
  const Measure mu = Measure::bernoulli(Rational(2, 5));
  auto random_set = [&] {
    std::vector<BitString> gens;
    for (const auto& x : oracle::strings_of_length(3)) {
      if (gen.coin()) gens.push_back(BitString::parse(x));
    }
    DecidableSet c = DecidableSet::from_cylinders(CylinderSet(gens));
    if (gen.coin()) c.intersect_with(DecidableSet::bit(3 + gen.below(3), gen.coin()));
    return c;
  };
  for (int t = 0; t < kTrials; ++t) {
    const DecidableSet a = random_set();
    const DecidableSet b = random_set();
    const DecidableSet both = a.intersection(b);
    const DecidableSet only = a.difference(b);
    Rational direct = 0;
    for (const auto& x : oracle::strings_of_length(6)) {
      const BitString s = BitString::parse(x);
      const bool in_a = *a.contains(s);
      const bool in_b = *b.contains(s);
      EXPECT_EQ(*both.contains(s), in_a && in_b);
      EXPECT_EQ(*only.contains(s), in_a && !in_b);
      if (in_a) direct += mu.mass(s);
    }
    EXPECT_EQ(a.mass(mu), direct);
    EXPECT_EQ(both.mass(mu) + only.mass(mu), a.mass(mu));
  }
}
