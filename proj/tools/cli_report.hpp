#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "randlab/audit.hpp"
#include "randlab/rational.hpp"
#include "randlab/spec_io.hpp"

namespace randlab::cli {

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// "≈0.1887" style approximation for human readers.
std::string approx(const Rational& q);
std::string approx(double x);

Json rational_json(const Rational& q);

/// The JSON run report. Everything except elapsed_ms is a function of the
/// inputs.
class RunReport {
 public:
  RunReport(std::string command, const std::vector<std::string>& argv);

  /// Records the digest of a canonical serialization of an input object.
  void add_digest(const std::string& name, const Json& canonical);
  void add_check(const AuditReport& audit);
  void add_check(const std::string& name, bool pass, Json detail = Json::object());
  Json& results() { return results_; }

  bool all_pass() const { return all_pass_; }
  std::string render() const;

 private:
  Json head_;
  Json digests_ = Json::object();
  Json checks_ = Json::array();
  Json results_ = Json::object();
  bool all_pass_ = true;
  std::chrono::steady_clock::time_point start_;
};

Json audit_json(const AuditReport& audit);

/// Writes `text` to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text);

}  // namespace randlab::cli
