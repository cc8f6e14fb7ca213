#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "randlab/audit.hpp"
#include "randlab/bitstring.hpp"
#include "randlab/measure.hpp"
#include "randlab/rational.hpp"

namespace randlab {

inline constexpr std::size_t kDefaultEnumerationLimit = 20;

/// A capital function on finite strings, fair against `base()`.
///
/// capital(s) is nullopt ("undefined") on strings the recipe leaves
/// undefined; every library recipe is undefined exactly on the null
/// cylinders of the base measure. Explicit tables are taken verbatim so
/// that check_fairness can report impossibility violations in them.
class Martingale {
 public:
  using CapitalFn = std::function<std::optional<Rational>(const BitString&)>;

  /// Memoized wrapper around an arbitrary capital function.
  static Martingale from_function(Measure base, std::string label, CapitalFn fn);

  /// Explicit table. A string missing from the table holds the capital of
  /// its longest tabled prefix (1 if even ε is absent): the constant
  /// continuation, which is fair.
  static Martingale table(Measure base, std::map<BitString, Rational> entries);

  /// Stakes everything on `side` at every step: capital(s·side) =
  /// capital(s)/mu(side | s) and 0 on the other branch.
  static Martingale all_in(Measure base, bool side, const Rational& start = 1);

  static Martingale constant(Measure base, const Rational& c);

  std::optional<Rational> capital(const BitString& s) const;
  const Measure& base() const;
  const std::string& label() const;
  /// Non-empty for table martingales.
  const std::map<BitString, Rational>& table_entries() const;

  struct Impl;

 private:
  explicit Martingale(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// M(s) = nu(s)/mu(s) on mu-positive strings.
Martingale from_measures(const Measure& nu, const Measure& mu);

/// The measure nu with nu(s) = M(s)·mu(s), continued through null cylinders
/// by the three-case recursion
///   nu(s0) = M(s0)mu(s0)          if mu(s0) > 0
///          = nu(s) - M(s1)mu(s1)  if mu(s1) > 0
///          = 0                    otherwise
/// (and symmetrically for s1). nu(ε) = M(ε).
Measure to_measure(const Martingale& m);

struct SavingsOptions {
  /// Run on M + 1, which is strictly positive.
  bool shift_by_one = true;
  /// Scale so that N(ε) = 1; then f <= N <= f + 1 holds at the root too and
  /// N·mu is a probability measure.
  bool normalize = true;
};

/// N together with its savings account f: f <= N <= f + 1 and f is
/// nondecreasing along every path.
class SavingsPair {
 public:
  const Martingale& total() const { return total_; }
  std::optional<Rational> savings(const BitString& s) const;
  /// The transform ran on (M + shift) * scale.
  const Rational& shift() const { return shift_; }
  const Rational& scale() const { return scale_; }

 private:
  friend SavingsPair savings_transform(const Martingale& m, const SavingsOptions& options);
  struct State;
  Martingale total_;
  std::shared_ptr<State> state_;
  Rational shift_;
  Rational scale_;
  SavingsPair(Martingale total, std::shared_ptr<State> state, Rational shift, Rational scale);
};

/// Sets winnings aside: N(ε) = M(ε), f(ε) = 0,
///   N(si) = f(s) + (M(si)/M(s))·(N(s) - f(s)),  f(si) = max(f(s), N(si) - 1).
/// M here is the input after the shift and scaling selected in `options`.
/// Where M(s) = 0 the ratio is irrelevant (N(s) = f(s)) and N(si) = f(s).
SavingsPair savings_transform(const Martingale& m, const SavingsOptions& options = {});

/// f <= N <= f + 1 and f(s) <= f(si) wherever defined, for |s| <= depth.
AuditReport check_savings(const SavingsPair& sp, std::size_t depth);

struct CapitalTrace {
  BitString prefix;
  /// values[n] = capital after n bits; shorter than |prefix|+1 when a null
  /// cylinder is entered.
  std::vector<Rational> values;
  Rational max_attained;
  /// The trace entered a null cylinder (not random by nullity).
  bool null_hit = false;
};

CapitalTrace run(const Martingale& m, const BitString& x);

/// Exact fairness at every s with |s| < depth and impossibility (capital
/// defined iff mu(s) > 0) at every |s| <= depth.
AuditReport check_fairness(const Martingale& m, std::size_t depth);

struct VilleResult {
  Rational fraction;
  Rational bound;
  bool pass = false;
};

/// mu-mass of the length-n strings some prefix of which has capital >= c,
/// against the bound capital(ε)/c. Throws ResourceError when n > limit and
/// PreconditionError unless c > 0.
VilleResult ville_audit(const Martingale& m, std::size_t n, const Rational& c,
                        std::size_t limit = kDefaultEnumerationLimit);

/// Capital table of m down to `depth`, for serialization.
std::map<BitString, Rational> capital_table(const Martingale& m, std::size_t depth);

}  // namespace randlab
