#include "randlab/bitstring.hpp"

#include <algorithm>

#include "randlab/errors.hpp"

namespace randlab {

BitString BitString::parse(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw ParseError("bit string contains '" + std::string(1, text[i]) + "'", 1, i + 1);
    }
  }
  return BitString(std::string(text));
}

BitString BitString::from_index(std::uint64_t index, std::size_t length) {
  std::string bits(length, '0');
  for (std::size_t i = 0; i < length; ++i) {
    if ((index >> (length - 1 - i)) & 1U) bits[i] = '1';
  }
  return BitString(std::move(bits));
}

BitString BitString::child(bool bit) const {
  BitString out = *this;
  out.push_back(bit);
  return out;
}

BitString BitString::prefix(std::size_t n) const { return BitString(bits_.substr(0, n)); }

BitString BitString::parent() const {
  if (bits_.empty()) throw PreconditionError("the empty string has no parent");
  return BitString(bits_.substr(0, bits_.size() - 1));
}

BitString BitString::concat(const BitString& tail) const { return BitString(bits_ + tail.bits_); }

bool BitString::is_prefix_of(const BitString& other) const {
  return bits_.size() <= other.bits_.size() &&
         std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::size_t BitString::count_ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), '1'));
}

std::uint64_t BitString::index() const {
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

std::ostream& operator<<(std::ostream& os, const BitString& s) {
  return os << (s.empty() ? std::string("ε") : s.str());
}

}  // namespace randlab
