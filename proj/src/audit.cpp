#include "randlab/audit.hpp"

#include <sstream>

namespace randlab {

void AuditReport::add_violation(const BitString& where, std::string what) {
  ++violation_count;
  if (violations.size() < kMaxRecorded) violations.push_back({where, std::move(what)});
}

void AuditReport::merge(const AuditReport& other) {
  nodes_checked += other.nodes_checked;
  for (const auto& v : other.violations) {
    if (violations.size() < kMaxRecorded) violations.push_back(v);
  }
  violation_count += other.violation_count;
  facts.insert(facts.end(), other.facts.begin(), other.facts.end());
}

std::string AuditReport::summary() const {
  std::ostringstream os;
  os << check << " depth=" << depth << " nodes=" << nodes_checked
     << " violations=" << violation_count << (pass() ? " PASS" : " FAIL");
  return os.str();
}

}  // namespace randlab
