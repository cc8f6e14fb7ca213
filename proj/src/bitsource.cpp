#include "randlab/bitsource.hpp"

#include <charconv>
#include <random>

#include "randlab/errors.hpp"
#include "randlab/spec_io.hpp"

namespace randlab {

namespace {

std::uint64_t parse_seed(std::string_view text, std::size_t column) {
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("bad seed '" + std::string(text) + "'", 1, column);
  }
  return seed;
}

BitString bits_of(std::string_view text) {
  std::string clean;
  for (char c : text) {
    if (c == '0' || c == '1') {
      clean.push_back(c);
    } else if (c != ' ' && c != '\n' && c != '\r' && c != '\t') {
      throw ParseError(std::string("unexpected character '") + c + "' in bit source");
    }
  }
  return BitString::parse(clean);
}

}  // namespace

BitSourceSpec BitSourceSpec::parse(std::string_view text) {
  BitSourceSpec spec;
  if (text.starts_with("prng:")) {
    spec.kind = Kind::prng;
    spec.seed = parse_seed(text.substr(5), 6);
  } else if (text.starts_with("bernoulli:")) {
    spec.kind = Kind::bernoulli;
    const std::string_view rest = text.substr(10);
    const auto comma = rest.find(",seed=");
    if (comma == std::string_view::npos) throw ParseError("expected bernoulli:P,seed=S", 1, 11);
    spec.p = parse_rational(rest.substr(0, comma));
    if (spec.p < 0 || spec.p > 1) throw ParseError("bernoulli parameter outside [0,1]", 1, 11);
    if (spec.p.get_den() > Integer(1) << 62) throw ParseError("bernoulli denominator too large", 1, 11);
    spec.seed = parse_seed(rest.substr(comma + 6), 11 + comma + 6);
  } else if (text == "champernowne") {
    spec.kind = Kind::champernowne;
  } else if (text.starts_with("file:")) {
    spec.kind = Kind::file;
    spec.path = std::string(text.substr(5));
  } else if (text.starts_with("literal:")) {
    spec.kind = Kind::literal;
    spec.bits = bits_of(text.substr(8));
  } else {
    throw ParseError("unknown bit source '" + std::string(text) +
                         "' (prng:SEED, bernoulli:P,seed=S, champernowne, file:PATH, literal:BITS)",
                     1, 1);
  }
  return spec;
}

std::string BitSourceSpec::describe() const {
  switch (kind) {
    case Kind::prng:
      return "prng:" + std::to_string(seed);
    case Kind::bernoulli:
      return "bernoulli:" + to_string(p) + ",seed=" + std::to_string(seed);
    case Kind::champernowne:
      return "champernowne";
    case Kind::file:
      return "file:" + path;
    case Kind::literal:
      return "literal:" + bits.str();
  }
  return "?";
}

std::optional<std::size_t> BitSourceSpec::available() const {
  if (kind == Kind::literal) return bits.size();
  if (kind == Kind::file) return bits_of(read_text_file(path)).size();
  return std::nullopt;
}

BitString generate(const BitSourceSpec& spec, std::size_t length) {
  BitString out;
  switch (spec.kind) {
    case BitSourceSpec::Kind::prng: {
      std::mt19937_64 rng(spec.seed);
      while (out.size() < length) {
        const std::uint64_t word = rng();
        for (int b = 63; b >= 0 && out.size() < length; --b) out.push_back((word >> b) & 1U);
      }
      break;
    }
    case BitSourceSpec::Kind::bernoulli: {
      // Exact: bit = 1 iff a uniform draw from [0, den) falls below num.
      std::mt19937_64 rng(spec.seed);
      const std::uint64_t num = spec.p.get_num().get_ui();
      const std::uint64_t den = spec.p.get_den().get_ui();
      const std::uint64_t limit = UINT64_MAX - UINT64_MAX % den;
      while (out.size() < length) {
        std::uint64_t draw = rng();
        while (draw >= limit) draw = rng();
        out.push_back(draw % den < num);
      }
      break;
    }
    case BitSourceSpec::Kind::champernowne: {
      for (std::uint64_t k = 1; out.size() < length; ++k) {
        int top = 63;
        while (((k >> top) & 1U) == 0) --top;
        for (int b = top; b >= 0 && out.size() < length; --b) out.push_back((k >> b) & 1U);
      }
      break;
    }
    case BitSourceSpec::Kind::file:
    case BitSourceSpec::Kind::literal: {
      BitString all;
      if (spec.kind == BitSourceSpec::Kind::literal) {
        all = spec.bits;
      } else {
        all = bits_of(read_text_file(spec.path));
      }
      if (all.size() < length) {
        throw PreconditionError("bit source " + spec.describe() + " has " + std::to_string(all.size()) +
                                " bits, " + std::to_string(length) + " requested");
      }
      out = all.prefix(length);
      break;
    }
  }
  return out;
}

}  // namespace randlab
