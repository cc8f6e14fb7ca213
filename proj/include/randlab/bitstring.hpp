#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace randlab {

/// A finite binary string. Stored as '0'/'1' characters so that the
/// lexicographic order of the storage is the order used to lay out
/// prefix-free sets: every extension of s sorts in one contiguous block
/// directly after s.
class BitString {
 public:
  BitString() = default;

  /// Throws ParseError on any character other than '0' and '1'.
  static BitString parse(std::string_view text);

  /// The length-`length` string whose bits are the binary digits of
  /// `index`, most significant first.
  static BitString from_index(std::uint64_t index, std::size_t length);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }

  BitString child(bool bit) const;
  BitString prefix(std::size_t n) const;
  /// Requires a non-empty string.
  BitString parent() const;
  BitString concat(const BitString& tail) const;

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void pop_back() { bits_.pop_back(); }

  /// Non-strict prefix relation (s ⪯ t).
  bool is_prefix_of(const BitString& other) const;

  std::size_t count_ones() const;
  /// Inverse of from_index; requires size() <= 64.
  std::uint64_t index() const;

  const std::string& str() const { return bits_; }

  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  explicit BitString(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

std::ostream& operator<<(std::ostream& os, const BitString& s);

/// Calls f(s) for every string of length exactly `length`, in lexicographic order.
template <class F>
void for_each_string(std::size_t length, F&& f) {
  const std::uint64_t count = std::uint64_t{1} << length;
  for (std::uint64_t i = 0; i < count; ++i) f(BitString::from_index(i, length));
}

/// Calls f(s) for every string with |s| <= max_length, shortest first.
template <class F>
void for_each_string_upto(std::size_t max_length, F&& f) {
  for (std::size_t n = 0; n <= max_length; ++n) for_each_string(n, f);
}

}  // namespace randlab

template <>
struct std::hash<randlab::BitString> {
  std::size_t operator()(const randlab::BitString& s) const noexcept {
    return std::hash<std::string>{}(s.str());
  }
};
