#include "randlab/battery.hpp"

#include "randlab/errors.hpp"

namespace randlab {

Measure null_one_measure() { return Measure::split_table({{BitString{}, Rational(0)}}); }

namespace {

Measure mixed_table() {
  return Measure::split_table({{BitString{}, Rational(3, 4)},
                               {BitString::parse("1"), Rational(1, 5)},
                               {BitString::parse("01"), Rational(2, 3)}});
}

}  // namespace

std::vector<NamedMeasure> measure_families() {
  return {
      {"fair_coin", Measure::fair_coin()},
      {"bernoulli(1/3)", Measure::bernoulli(Rational(1, 3))},
      {"bernoulli(3/4)", Measure::bernoulli(Rational(3, 4))},
      {"split_table", mixed_table()},
      {"split_table_null", null_one_measure()},
      {"interleave", Measure::interleave(Measure::bernoulli(Rational(1, 3)), Measure::fair_coin())},
  };
}

std::vector<NamedMartingale> martingale_battery() {
  const Measure fair = Measure::fair_coin();
  return {
      {"all_in_0", Martingale::all_in(fair, false)},
      {"bernoulli_2_3_over_fair", from_measures(Measure::bernoulli(Rational(2, 3)), fair)},
      {"fair_over_bernoulli_1_3", from_measures(fair, Measure::bernoulli(Rational(1, 3)))},
      {"interleave_over_fair",
       from_measures(Measure::interleave(Measure::bernoulli(Rational(1, 3)), fair), fair)},
      {"table_over_bernoulli_2_5", from_measures(mixed_table(), Measure::bernoulli(Rational(2, 5)))},
      {"identity", Martingale::constant(fair, Rational(1))},
  };
}

Martingale battery_martingale(const std::string& name) {
  std::string names;
  for (auto& entry : martingale_battery()) {
    if (entry.name == name) return entry.martingale;
    names += (names.empty() ? "" : ", ") + entry.name;
  }
  throw PreconditionError("no battery martingale '" + name + "' (" + names + ")");
}

}  // namespace randlab
