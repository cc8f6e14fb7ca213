#pragma once

// Brute-force reference computations. They share only BitString and
// Rational with the library and compute everything by direct enumeration or
// digit arithmetic.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "randlab/bitstring.hpp"
#include "randlab/rational.hpp"

namespace oracle {

using randlab::BitString;
using randlab::Rational;

inline Rational iid_mass(const Rational& p, const std::string& s) {
  Rational m = 1;
  for (char c : s) m *= (c == '1') ? p : Rational(1 - p);
  return m;
}

inline std::vector<std::string> strings_of_length(std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      next.push_back(s + "0");
      next.push_back(s + "1");
    }
    out.swap(next);
  }
  return out;
}

/// Binary expansion of x in [0,1); nullopt when x = k/2^j for some
/// 0 < x < 1 and j <= n (x sits on an interior cell boundary).
inline std::optional<std::string> binary_name(Rational x, std::size_t n) {
  for (std::size_t j = 1; j <= n; ++j) {
    Rational scaled = x * Rational(mpz_class(1) << j);
    if (scaled.get_den() == 1 && x > 0 && x < 1) return std::nullopt;
  }
  std::string name;
  for (std::size_t i = 0; i < n; ++i) {
    x *= 2;
    if (x >= 1) {
      name.push_back('1');
      x -= 1;
    } else {
      name.push_back('0');
    }
  }
  return name;
}

inline std::vector<unsigned> bary_digits_of(Rational x, unsigned b, std::size_t count) {
  std::vector<unsigned> digits;
  for (std::size_t i = 0; i < count; ++i) {
    x *= b;
    mpz_class d = x.get_num() / x.get_den();
    digits.push_back(static_cast<unsigned>(d.get_ui()));
    x -= Rational(d);
  }
  return digits;
}

/// The dyadic interval of s.
inline std::pair<Rational, Rational> dyadic(const std::string& s) {
  Rational lo = 0;
  Rational w = 1;
  for (char c : s) {
    w /= 2;
    if (c == '1') lo += w;
  }
  return {lo, lo + w};
}

/// Maximal dyadic intervals of depth <= d inside [lo, hi), left to right.
inline std::vector<std::string> dyadic_cover(const Rational& lo, const Rational& hi, std::size_t d) {
  std::vector<std::string> out;
  auto inside = [&](const std::string& s) {
    const auto [a, b] = dyadic(s);
    return a >= lo && b <= hi;
  };
  for (std::size_t n = 0; n <= d; ++n) {
    for (const auto& s : strings_of_length(n)) {
      if (!inside(s)) continue;
      bool parent_inside = false;
      for (std::size_t k = 0; k < s.size(); ++k) parent_inside = parent_inside || inside(s.substr(0, k));
      if (!parent_inside) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return dyadic(a).first < dyadic(b).first;
  });
  return out;
}

/// Seeded generator with the helpers the property tests need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 1; }
  /// A rational in [0,1] with a denominator up to max_den; the endpoints
  /// come up with probability about 1/8 each.
  Rational unit(unsigned max_den = 12, bool allow_ends = true) {
    if (allow_ends) {
      const auto r = below(8);
      if (r == 0) return 0;
      if (r == 1) return 1;
    }
    const unsigned den = 2 + static_cast<unsigned>(below(max_den - 1));
    const unsigned num = 1 + static_cast<unsigned>(below(den - 1));
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  std::string bits(std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(coin() ? '1' : '0');
    return s;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
