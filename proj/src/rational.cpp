#include "randlab/rational.hpp"

#include <cmath>

#include "randlab/errors.hpp"

namespace randlab {

namespace {

bool parse_integer(std::string_view text, Integer& out) {
  if (text.empty()) return false;
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return out.set_str(digits, 10) == 0;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

}  // namespace

Rational parse_rational(std::string_view raw) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  Integer num;
  Integer den = 1;
  if (slash == std::string::npos) {
    if (!parse_integer(text, num)) throw ParseError("not a rational: '" + text + "'");
  } else {
    if (!parse_integer(std::string_view(text).substr(0, slash), num) ||
        !parse_integer(std::string_view(text).substr(slash + 1), den)) {
      throw ParseError("not a rational: '" + text + "'");
    }
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational pow2(long exponent) {
  Integer p = 1;
  if (exponent >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return Rational(Integer(1), p);
}

Rational pow(const Rational& q, unsigned long k) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
  // Already coprime: powers of coprime integers stay coprime.
  Rational r;
  r.get_num() = num;
  r.get_den() = den;
  return r;
}

namespace {

// Bit length of a positive integer: floor(log2 n) + 1.
long bit_length(const Integer& n) { return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)); }

bool is_power_of_two(const Integer& n) {
  return n > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

}  // namespace

NegLog2 neg_log2(const Rational& q) {
  if (q <= 0) throw PreconditionError("neg_log2 of a non-positive value");
  const Integer& num = q.get_num();
  const Integer& den = q.get_den();
  NegLog2 out;
  if (is_power_of_two(num) && is_power_of_two(den)) {
    out.low = out.high = (bit_length(den) - 1) - (bit_length(num) - 1);
    out.exact = true;
    return out;
  }
  // -log2 q = log2 den - log2 num. Find k = floor(-log2 q): the largest k with 2^k <= den/num.
  long k = (bit_length(den) - 1) - (bit_length(num) - 1) + 1;
  // Step down until 2^k * num <= den.
  while (true) {
    const Rational probe = pow2(k) * Rational(num);
    if (probe <= Rational(den)) break;
    --k;
  }
  out.low = k;
  out.high = k + 1;
  out.exact = false;
  return out;
}

double log2_approx(const Rational& q) {
  if (q <= 0) throw PreconditionError("log2 of a non-positive value");
  long exp_num = 0;
  long exp_den = 0;
  const double mant_num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  const double mant_den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log2(mant_num) - std::log2(mant_den) + static_cast<double>(exp_num - exp_den);
}

bool is_dyadic(const Rational& q) { return is_power_of_two(q.get_den()); }

}  // namespace randlab
