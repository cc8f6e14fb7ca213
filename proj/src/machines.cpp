#include "randlab/machines.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "randlab/errors.hpp"

namespace randlab {

namespace {

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream is(line);
  for (std::string f; is >> f;) fields.push_back(f);
  return fields;
}

BitString parse_word(const std::string& text) {
  if (text == "ε" || text == "-") return BitString{};
  return BitString::parse(text);
}

std::string word_text(const BitString& s) { return s.empty() ? "ε" : s.str(); }

// Calls f(line_no, fields) for each non-blank, non-comment line.
template <typename F>
void for_each_record(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto fields = fields_of(line);
    if (!fields.empty()) f(line_no, fields);
  }
}

}  // namespace

PrefixFreeMachine PrefixFreeMachine::from_table(std::vector<Entry> entries, bool relaxed) {
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const BitString& a = entries[i - 1].first;
    const BitString& b = entries[i].first;
    if (a == b) throw ConstructionError("codeword '" + a.str() + "' appears twice");
    if (!relaxed && a.is_prefix_of(b)) {
      throw ConstructionError("domain is not prefix-free: '" + word_text(a) + "' is a prefix of '" + b.str() + "'");
    }
  }
  PrefixFreeMachine m;
  m.entries_ = std::move(entries);
  m.relaxed_ = relaxed;
  if (m.kraft_sum() > 1) throw ConstructionError("Kraft sum " + to_string(m.kraft_sum()) + " exceeds 1");
  return m;
}

PrefixFreeMachine PrefixFreeMachine::parse(std::string_view text, bool relaxed) {
  std::vector<Entry> entries;
  for_each_record(text, [&](std::size_t line_no, const std::vector<std::string>& fields) {
    if (fields.size() != 2) throw ParseError("expected 'codeword<TAB>output'", line_no, 1);
    try {
      entries.emplace_back(parse_word(fields[0]), parse_word(fields[1]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no, 1);
    }
  });
  try {
    return from_table(std::move(entries), relaxed);
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
}

std::string PrefixFreeMachine::serialize() const {
  std::ostringstream os;
  for (const auto& [code, out] : entries_) os << word_text(code) << '\t' << word_text(out) << '\n';
  return os.str();
}

Rational PrefixFreeMachine::kraft_sum() const {
  Rational total = 0;
  for (const auto& entry : entries_) total += pow2(-static_cast<long>(entry.first.size()));
  return total;
}

std::size_t PrefixFreeMachine::max_output_length() const {
  std::size_t n = 0;
  for (const auto& entry : entries_) n = std::max(n, entry.second.size());
  return n;
}

RequestSet RequestSet::parse(std::string_view text) {
  RequestSet r;
  for_each_record(text, [&](std::size_t line_no, const std::vector<std::string>& fields) {
    if (fields.size() != 2) throw ParseError("expected 'n<TAB>sigma'", line_no, 1);
    std::size_t used = 0;
    unsigned long n = 0;
    try {
      n = std::stoul(fields[0], &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != fields[0].size() || fields[0].front() == '-') {
      throw ParseError("bad request length '" + fields[0] + "'", line_no, 1);
    }
    try {
      r.requests.push_back({n, parse_word(fields[1])});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no, fields[0].size() + 2);
    }
  });
  return r;
}

Rational RequestSet::kraft_sum() const {
  Rational total = 0;
  for (const auto& q : requests) total += pow2(-static_cast<long>(q.length));
  return total;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> complexity(const PrefixFreeMachine& m, const BitString& s) {
  std::optional<std::size_t> best;
  for (const auto& [code, out] : m.entries()) {
    if (out == s && (!best || code.size() < *best)) best = code.size();
  }
  return best;
}

Rational semimeasure(const PrefixFreeMachine& m, const BitString& s) {
  Rational total = 0;
  for (const auto& [code, out] : m.entries()) {
    if (s.is_prefix_of(out)) total += pow2(-static_cast<long>(code.size()));
  }
  return total;
}

PrefixFreeMachine kc_build(const RequestSet& r) {
  const Rational kraft = r.kraft_sum();
  if (kraft > 1) throw PreconditionError("request set has Kraft sum " + to_string(kraft) + " > 1");
  // Free strings, keyed by length; lengths are pairwise distinct.
  std::map<std::size_t, BitString> free{{0, BitString{}}};
  std::vector<PrefixFreeMachine::Entry> entries;
  entries.reserve(r.requests.size());
  for (const auto& q : r.requests) {
    const std::size_t n = q.length;
    if (const auto hit = free.find(n); hit != free.end()) {
      entries.emplace_back(hit->second, q.output);
      free.erase(hit);
      continue;
    }
    auto it = free.lower_bound(n);
    if (it == free.begin()) throw PreconditionError("Kraft–Chaitin ran out of space");
    --it;
    BitString tau = it->second;
    free.erase(it);
    // τ0^k goes out; τ1, τ01, ..., τ0^{k-1}1 become free.
    while (tau.size() < n) {
      free.emplace(tau.size() + 1, tau.child(true));
      tau.push_back(false);
    }
    entries.emplace_back(std::move(tau), q.output);
  }
  return PrefixFreeMachine::from_table(std::move(entries));
}

AuditReport check_semimeasure(const PrefixFreeMachine& m, std::size_t depth) {
  AuditReport report;
  report.check = "semimeasure";
  report.depth = depth;
  // meas vanishes off the prefixes of outputs, so only those can fail.
  std::set<BitString> nodes;
  for (const auto& [code, out] : m.entries()) {
    for (std::size_t n = 0; n <= out.size() && n < depth; ++n) nodes.insert(out.prefix(n));
  }
  for (const auto& s : nodes) {
    ++report.nodes_checked;
    const Rational parent = semimeasure(m, s);
    const Rational children = semimeasure(m, s.child(false)) + semimeasure(m, s.child(true));
    if (children > parent) {
      report.add_violation(s, "meas(s0)+meas(s1) = " + to_string(children) + " > meas(s) = " + to_string(parent));
    }
  }
  return report;
}

AuditReport check_kc(const PrefixFreeMachine& m, const RequestSet& r) {
  AuditReport report = check_semimeasure(m, m.max_output_length() + 1);
  report.check = "kraft_chaitin";
  const auto& entries = m.entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    ++report.nodes_checked;
    if (entries[i - 1].first.is_prefix_of(entries[i].first)) {
      report.add_violation(entries[i].first, "domain not prefix-free");
    }
  }
  if (m.kraft_sum() > 1) report.add_violation(BitString{}, "Kraft sum exceeds 1");
  if (m.kraft_sum() != r.kraft_sum()) {
    report.add_violation(BitString{}, "meas(ε) = " + to_string(m.kraft_sum()) + " but requests sum to " +
                                          to_string(r.kraft_sum()));
  }
  // Each request needs its own codeword of the requested length.
  std::multiset<std::pair<std::size_t, BitString>> available;
  for (const auto& [code, out] : entries) available.emplace(code.size(), out);
  for (const auto& q : r.requests) {
    ++report.nodes_checked;
    const auto it = available.find({q.length, q.output});
    if (it == available.end()) {
      report.add_violation(q.output, "no codeword of length " + std::to_string(q.length) + " prints it");
      continue;
    }
    available.erase(it);
    const auto k = complexity(m, q.output);
    if (!k || *k > q.length) report.add_violation(q.output, "K exceeds the requested length");
  }
  return report;
}

MachineClass classify_machine(const PrefixFreeMachine& m, const std::optional<Measure>& nu) {
  MachineClass out;
  out.computable_measure = true;
  out.max_ratio = 0;
  if (!nu) return out;
  std::set<BitString> nodes;
  for (const auto& [code, output] : m.entries()) {
    for (std::size_t n = 0; n <= output.size(); ++n) nodes.insert(output.prefix(n));
  }
  out.bounded = true;
  for (const auto& s : nodes) {
    const Rational meas = semimeasure(m, s);
    const Rational bound = nu->mass(s);
    if (bound > 0) out.max_ratio = std::max(out.max_ratio, Rational(meas / bound));
    if (meas > bound && *out.bounded) {
      out.bounded = false;
      out.witness = s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

DeficiencyTrace deficiency_trace(const PrefixFreeMachine& m, const CellDecomposition& dec, const BitString& name) {
  DeficiencyTrace trace;
  for (std::size_t n = 1; n <= name.size(); ++n) {
    DeficiencyRow row;
    row.n = n;
    row.prefix = name.prefix(n);
    row.mass = dec.cell_mass(row.prefix);
    if (row.mass == 0) {
      trace.null_cell = true;
      trace.null_depth = n;
      trace.rows.push_back(std::move(row));
      break;
    }
    row.neg_log_mass = neg_log2(row.mass);
    row.k = complexity(m, row.prefix);
    if (row.k) {
      row.d_low = row.neg_log_mass.low - static_cast<long>(*row.k);
      row.d_high = row.neg_log_mass.high - static_cast<long>(*row.k);
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

DeficiencyTrace deficiency_trace(const PrefixFreeMachine& m, const CellDecomposition& dec,
                                 const std::vector<Rational>& point, std::size_t n, BoundaryPolicy policy) {
  const NameResult named = name_of(dec, point, n, policy);
  if (!named.name) {
    DeficiencyTrace trace;
    trace.undetermined_depth = named.boundary_depth;
    return trace;
  }
  return deficiency_trace(m, dec, *named.name);
}

}  // namespace randlab
