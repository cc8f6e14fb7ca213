#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randlab/audit.hpp"
#include "randlab/bitstring.hpp"
#include "randlab/rational.hpp"

namespace randlab {

/// Construction recipe of a Measure. Everything but `derived` round-trips
/// through the textual MeasureSpec format (see spec_io.hpp).
struct MeasureSpec {
  enum class Kind { fair_coin, bernoulli, split_table, interleave, derived };

  Kind kind = Kind::fair_coin;
  /// Probability of a 1 at every coordinate (bernoulli).
  Rational p = Rational(1, 2);
  /// mu(s1)/mu(s) for listed s; 1/2 below the table (split_table).
  std::vector<std::pair<BitString, Rational>> splits;
  /// mu(ε); 1 for probability measures (split_table only).
  Rational total = 1;
  /// The two interleaved factors: even coordinates from [0], odd from [1].
  std::vector<MeasureSpec> factors;
  /// Human-readable provenance of a derived measure.
  std::string label;

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

/// A finite measure on Cantor space, given by exact cylinder masses.
///
/// Values are cheap handles to immutable shared state. Masses of derived
/// measures are memoized behind a lock, so a Measure can be read from
/// several threads at once.
class Measure {
 public:
  using MassFn = std::function<Rational(const BitString&)>;

  /// λ(s) = 2^{-|s|}.
  static Measure fair_coin();
  /// i.i.d. coordinates with P(bit = 1) = p. Throws ConstructionError unless 0 <= p <= 1.
  static Measure bernoulli(const Rational& p);
  /// Explicit conditional splits. Throws ConstructionError naming the string
  /// whose split lies outside [0,1], or if total < 0.
  static Measure split_table(std::vector<std::pair<BitString, Rational>> splits,
                             const Rational& total = 1);
  /// Alternates coordinates: bit 2k follows `first`, bit 2k+1 follows `second`.
  static Measure interleave(const Measure& first, const Measure& second);
  /// Wraps an additive mass function. The caller guarantees additivity and
  /// monotone nullity; check_additivity audits the claim.
  static Measure from_masses(std::string label, MassFn mass);
  static Measure from_spec(const MeasureSpec& spec);

  Measure();  // fair coin

  Rational mass(const BitString& s) const;
  Rational total() const { return mass(BitString{}); }
  /// mu(s1)/mu(s); the conventional 1/2 on null cylinders.
  Rational split(const BitString& s) const;
  /// mu(sb)/mu(s), or nullopt when mu(s) = 0.
  std::optional<Rational> conditional(const BitString& s, bool bit) const;
  bool is_null(const BitString& s) const { return mass(s) == 0; }

  /// P(bit = 1) when the coordinates are i.i.d. (fair coin, bernoulli).
  std::optional<Rational> iid_probability() const;

  const MeasureSpec& spec() const;
  std::string describe() const;

 private:
  struct Impl;
  explicit Measure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// mass(s0) + mass(s1) == mass(s) for |s| < depth, and nullity is inherited.
AuditReport check_additivity(const Measure& mu, std::size_t depth);

/// Extensional equality of all cylinder masses with |s| <= depth. On
/// mismatch, the first differing string is written to *witness.
bool equal_to_depth(const Measure& a, const Measure& b, std::size_t depth,
                    BitString* witness = nullptr);

}  // namespace randlab
