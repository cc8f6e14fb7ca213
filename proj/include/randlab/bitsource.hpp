#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "randlab/bitstring.hpp"
#include "randlab/rational.hpp"

namespace randlab {

/// A reproducible stream of bits.
struct BitSourceSpec {
  enum class Kind { prng, bernoulli, champernowne, file, literal };

  Kind kind = Kind::prng;
  std::uint64_t seed = 0;
  Rational p = Rational(1, 2);
  std::string path;
  BitString bits;

  /// "prng:SEED", "bernoulli:P,seed=S", "champernowne", "file:PATH",
  /// "literal:BITS".
  static BitSourceSpec parse(std::string_view text);
  std::string describe() const;
  /// Length of a finite source (file, literal); nullopt for generators.
  /// Reads the file for file sources.
  std::optional<std::size_t> available() const;
};

/// The first `length` bits. Same spec, same bits. Throws PreconditionError
/// if a finite source is shorter than `length`.
BitString generate(const BitSourceSpec& spec, std::size_t length);

}  // namespace randlab
