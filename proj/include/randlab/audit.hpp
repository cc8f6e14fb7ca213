#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "randlab/bitstring.hpp"

namespace randlab {

struct Violation {
  BitString where;
  std::string what;
};

/// Outcome of an exhaustive finite-depth check. Violations are data; the
/// first `kMaxRecorded` are kept verbatim, the rest only counted.
struct AuditReport {
  static constexpr std::size_t kMaxRecorded = 64;

  std::string check;
  std::size_t depth = 0;
  std::size_t nodes_checked = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;
  /// Named classification results ("schnorr_style" -> "true", ...).
  std::vector<std::pair<std::string, std::string>> facts;

  bool pass() const { return violation_count == 0; }
  void add_violation(const BitString& where, std::string what);
  void merge(const AuditReport& other);
  std::string summary() const;
};

}  // namespace randlab
