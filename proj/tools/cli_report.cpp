#include "cli_report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "randlab/errors.hpp"

namespace randlab::cli {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string approx(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "≈%.6g", x);
  return buf;
}

std::string approx(const Rational& q) { return approx(q.get_d()); }

Json rational_json(const Rational& q) { return to_string(q); }

RunReport::RunReport(std::string command, const std::vector<std::string>& argv)
    : start_(std::chrono::steady_clock::now()) {
  head_["command"] = std::move(command);
  head_["argv"] = argv;
}

void RunReport::add_digest(const std::string& name, const Json& canonical) {
  digests_[name] = "fnv1a:" + fnv1a_hex(canonical.dump());
}

Json audit_json(const AuditReport& audit) {
  Json j;
  j["check"] = audit.check;
  j["pass"] = audit.pass();
  j["depth"] = audit.depth;
  j["nodes_checked"] = audit.nodes_checked;
  j["violation_count"] = audit.violation_count;
  Json list = Json::array();
  for (const auto& v : audit.violations) list.push_back({{"at", v.where.empty() ? "ε" : v.where.str()}, {"what", v.what}});
  j["violations"] = std::move(list);
  if (!audit.facts.empty()) {
    Json facts = Json::object();
    for (const auto& [k, v] : audit.facts) facts[k] = v;
    j["facts"] = std::move(facts);
  }
  return j;
}

void RunReport::add_check(const AuditReport& audit) {
  all_pass_ = all_pass_ && audit.pass();
  checks_.push_back(audit_json(audit));
}

void RunReport::add_check(const std::string& name, bool pass, Json detail) {
  all_pass_ = all_pass_ && pass;
  Json j;
  j["check"] = name;
  j["pass"] = pass;
  for (auto& [k, v] : detail.items()) j[k] = v;
  checks_.push_back(std::move(j));
}

std::string RunReport::render() const {
  Json j = head_;
  j["digests"] = digests_;
  j["checks"] = checks_;
  j["results"] = results_;
  j["pass"] = all_pass_;
  const auto elapsed = std::chrono::steady_clock::now() - start_;
  j["elapsed_ms"] = static_cast<long long>(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
  return j.dump(2) + "\n";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

}  // namespace randlab::cli
