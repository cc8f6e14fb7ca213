#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace randlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "num/den" or a bare integer. Always returns a canonical value.
Rational parse_rational(std::string_view text);

/// Serializes as "num/den", including integers ("2/1").
std::string to_string(const Rational& q);

/// 2^exponent, exponent may be negative.
Rational pow2(long exponent);

/// q^k for k >= 0.
Rational pow(const Rational& q, unsigned long k);

/// Floor and ceiling of -log2(q) for q > 0. `exact` iff q is a power of two.
struct NegLog2 {
  long low = 0;
  long high = 0;
  bool exact = false;
};
NegLog2 neg_log2(const Rational& q);

/// log2(q) as a double, accurate for arbitrarily large numerators and
/// denominators. q must be positive.
double log2_approx(const Rational& q);

/// True iff the denominator is a power of two.
bool is_dyadic(const Rational& q);

}  // namespace randlab
