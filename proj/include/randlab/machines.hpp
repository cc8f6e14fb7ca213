#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "randlab/audit.hpp"
#include "randlab/bitstring.hpp"
#include "randlab/cells.hpp"
#include "randlab/measure.hpp"
#include "randlab/rational.hpp"

namespace randlab {

/// A finite machine given by its table codeword -> output.
class PrefixFreeMachine {
 public:
  using Entry = std::pair<BitString, BitString>;

  PrefixFreeMachine() = default;
  /// Throws ConstructionError on a repeated codeword, a Kraft sum above 1,
  /// or (unless `relaxed`) a domain that is not prefix-free.
  static PrefixFreeMachine from_table(std::vector<Entry> entries, bool relaxed = false);
  /// Lines "codeword<TAB>output"; "ε" or "-" for the empty string.
  static PrefixFreeMachine parse(std::string_view text, bool relaxed = false);
  std::string serialize() const;

  /// Sorted by codeword.
  const std::vector<Entry>& entries() const { return entries_; }
  bool relaxed() const { return relaxed_; }
  Rational kraft_sum() const;
  std::size_t max_output_length() const;

 private:
  std::vector<Entry> entries_;
  bool relaxed_ = false;
};

struct Request {
  std::size_t length = 0;
  BitString output;
  friend bool operator==(const Request&, const Request&) = default;
};

struct RequestSet {
  std::vector<Request> requests;

  /// Lines "n<TAB>sigma".
  static RequestSet parse(std::string_view text);
  Rational kraft_sum() const;
};

/// K_M(σ): the shortest codeword printing σ; nullopt stands for +∞.
std::optional<std::size_t> complexity(const PrefixFreeMachine& m, const BitString& s);

/// meas_M(σ) = Σ 2^-|τ| over codewords τ whose output extends σ.
Rational semimeasure(const PrefixFreeMachine& m, const BitString& s);

/// Kraft–Chaitin: one codeword of length exactly n per request (n, σ),
/// allocated online from a pool of free strings of pairwise distinct
/// lengths. Throws PreconditionError if Σ 2^-n > 1.
PrefixFreeMachine kc_build(const RequestSet& r);

/// Prefix-freeness, Kraft sum <= 1, a length-n codeword for every request,
/// and superadditivity of meas_M.
AuditReport check_kc(const PrefixFreeMachine& m, const RequestSet& r);

/// meas(σ) >= meas(σ0) + meas(σ1) for all |σ| < depth.
AuditReport check_semimeasure(const PrefixFreeMachine& m, std::size_t depth);

struct MachineClass {
  /// meas_M(ε) is an exact finite sum.
  bool computable_measure = true;
  /// Present when a measure was supplied.
  std::optional<bool> bounded;
  /// First σ with meas(σ) > ν(σ).
  std::optional<BitString> witness;
  /// max meas(σ)/ν(σ) over the checked σ with ν(σ) > 0.
  Rational max_ratio;
};

/// Checks meas(σ) <= ν(σ) at every prefix of every output (elsewhere
/// meas vanishes).
MachineClass classify_machine(const PrefixFreeMachine& m, const std::optional<Measure>& nu);

struct DeficiencyRow {
  std::size_t n = 0;
  BitString prefix;
  Rational mass;
  NegLog2 neg_log_mass;
  std::optional<std::size_t> k;
  /// nullopt is -∞ (no codeword prints the prefix).
  std::optional<long> d_low;
  std::optional<long> d_high;
};

struct DeficiencyTrace {
  std::vector<DeficiencyRow> rows;
  /// The point lies in a null cell: not random by nullity.
  bool null_cell = false;
  std::size_t null_depth = 0;
  /// Set when the point has no name of the requested length.
  std::optional<std::size_t> undetermined_depth;
};

/// d_n = -log2 μ([x↾n]) - K_M(x↾n) for n = 1..N, stopping at a null cell.
DeficiencyTrace deficiency_trace(const PrefixFreeMachine& m, const CellDecomposition& dec, const BitString& name);
DeficiencyTrace deficiency_trace(const PrefixFreeMachine& m, const CellDecomposition& dec,
                                 const std::vector<Rational>& point, std::size_t n,
                                 BoundaryPolicy policy = BoundaryPolicy::strict);

}  // namespace randlab
