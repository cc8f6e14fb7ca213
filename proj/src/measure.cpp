#include "randlab/measure.hpp"

#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>
#include <variant>

#include "randlab/errors.hpp"

namespace randlab {

namespace {

struct FairCoin {};

struct Bernoulli {
  Rational p;
};

struct SplitTable {
  std::unordered_map<BitString, Rational> splits;
  Rational total;
  std::size_t max_key_length = 0;
};

struct Interleaved {
  Measure first;
  Measure second;
};

struct Derived {
  Measure::MassFn fn;
  mutable std::shared_mutex lock;
  mutable std::unordered_map<BitString, Rational> memo;
};

Rational bernoulli_mass(const Rational& p, const BitString& s) {
  const std::size_t ones = s.count_ones();
  const std::size_t zeros = s.size() - ones;
  return pow(p, ones) * pow(Rational(1) - p, zeros);
}

std::string spec_text(const MeasureSpec& spec) {
  switch (spec.kind) {
    case MeasureSpec::Kind::fair_coin:
      return "fair_coin";
    case MeasureSpec::Kind::bernoulli:
      return "bernoulli(" + to_string(spec.p) + ")";
    case MeasureSpec::Kind::split_table: {
      std::ostringstream os;
      os << "split_table{";
      bool first = true;
      for (const auto& [s, v] : spec.splits) {
        os << (first ? "" : ", ") << (s.empty() ? "ε" : s.str()) << "→" << to_string(v);
        first = false;
      }
      os << "}";
      if (spec.total != 1) os << "*" << to_string(spec.total);
      return os.str();
    }
    case MeasureSpec::Kind::interleave:
      return "interleave(" + spec_text(spec.factors.at(0)) + ", " + spec_text(spec.factors.at(1)) + ")";
    case MeasureSpec::Kind::derived:
      return spec.label;
  }
  return "?";
}

}  // namespace

struct Measure::Impl {
  MeasureSpec spec;
  std::variant<FairCoin, Bernoulli, SplitTable, Interleaved, Derived> body;

  Rational mass(const BitString& s) const {
    if (std::holds_alternative<FairCoin>(body)) return pow2(-static_cast<long>(s.size()));
    if (const auto* b = std::get_if<Bernoulli>(&body)) return bernoulli_mass(b->p, s);
    if (const auto* t = std::get_if<SplitTable>(&body)) return table_mass(*t, s);
    if (const auto* il = std::get_if<Interleaved>(&body)) {
      BitString even;
      BitString odd;
      for (std::size_t i = 0; i < s.size(); ++i) (i % 2 == 0 ? even : odd).push_back(s[i]);
      Rational a = il->first.mass(even);
      if (a == 0) return a;
      return a * il->second.mass(odd);
    }
    return derived_mass(std::get<Derived>(body), s);
  }

  static Rational table_mass(const SplitTable& t, const BitString& s) {
    Rational m = t.total;
    BitString node;
    const std::size_t tabled = std::min(s.size(), t.max_key_length + 1);
    for (std::size_t i = 0; i < tabled; ++i) {
      if (m == 0) return m;
      const auto it = t.splits.find(node);
      const Rational split = it == t.splits.end() ? Rational(1, 2) : it->second;
      m *= s[i] ? split : Rational(1) - split;
      node.push_back(s[i]);
    }
    if (s.size() > tabled) m *= pow2(-static_cast<long>(s.size() - tabled));
    return m;
  }

  static Rational derived_mass(const Derived& d, const BitString& s) {
    {
      std::shared_lock read(d.lock);
      const auto it = d.memo.find(s);
      if (it != d.memo.end()) return it->second;
    }
    // Computed outside the lock: the function may recurse into this measure.
    Rational value = d.fn(s);
    std::unique_lock write(d.lock);
    return d.memo.emplace(s, std::move(value)).first->second;
  }
};

Measure::Measure() : Measure(fair_coin()) {}

Measure Measure::fair_coin() {
  static const Measure instance = [] {
    auto impl = std::make_shared<Impl>();
    impl->spec.kind = MeasureSpec::Kind::fair_coin;
    impl->body = FairCoin{};
    return Measure(std::move(impl));
  }();
  return instance;
}

Measure Measure::bernoulli(const Rational& p) {
  if (p < 0 || p > 1) throw ConstructionError("bernoulli parameter " + to_string(p) + " outside [0,1]");
  auto impl = std::make_shared<Impl>();
  impl->spec.kind = MeasureSpec::Kind::bernoulli;
  impl->spec.p = p;
  impl->body = Bernoulli{p};
  return Measure(std::move(impl));
}

Measure Measure::split_table(std::vector<std::pair<BitString, Rational>> splits, const Rational& total) {
  if (total < 0) throw ConstructionError("negative total mass " + to_string(total));
  SplitTable table;
  table.total = total;
  for (const auto& [s, v] : splits) {
    if (v < 0 || v > 1) {
      throw ConstructionError("split at '" + s.str() + "' is " + to_string(v) + ", outside [0,1]");
    }
    if (!table.splits.emplace(s, v).second) {
      throw ConstructionError("duplicate split for '" + s.str() + "'");
    }
    table.max_key_length = std::max(table.max_key_length, s.size());
  }
  auto impl = std::make_shared<Impl>();
  impl->spec.kind = MeasureSpec::Kind::split_table;
  impl->spec.splits = std::move(splits);
  impl->spec.total = total;
  impl->body = std::move(table);
  return Measure(std::move(impl));
}

Measure Measure::interleave(const Measure& first, const Measure& second) {
  auto impl = std::make_shared<Impl>();
  impl->spec.kind = MeasureSpec::Kind::interleave;
  impl->spec.factors = {first.spec(), second.spec()};
  impl->body = Interleaved{first, second};
  return Measure(std::move(impl));
}

Measure Measure::from_masses(std::string label, MassFn mass) {
  auto impl = std::make_shared<Impl>();
  impl->spec.kind = MeasureSpec::Kind::derived;
  impl->spec.label = std::move(label);
  impl->body.emplace<Derived>().fn = std::move(mass);
  return Measure(std::move(impl));
}

Measure Measure::from_spec(const MeasureSpec& spec) {
  switch (spec.kind) {
    case MeasureSpec::Kind::fair_coin:
      return fair_coin();
    case MeasureSpec::Kind::bernoulli:
      return bernoulli(spec.p);
    case MeasureSpec::Kind::split_table:
      return split_table(spec.splits, spec.total);
    case MeasureSpec::Kind::interleave:
      if (spec.factors.size() != 2) throw ConstructionError("interleave needs exactly two factors");
      return interleave(from_spec(spec.factors[0]), from_spec(spec.factors[1]));
    case MeasureSpec::Kind::derived:
      break;
  }
  throw ConstructionError("derived measure '" + spec.label + "' cannot be rebuilt from its spec");
}

Rational Measure::mass(const BitString& s) const { return impl_->mass(s); }

Rational Measure::split(const BitString& s) const {
  const Rational m = mass(s);
  if (m == 0) return Rational(1, 2);
  return mass(s.child(true)) / m;
}

std::optional<Rational> Measure::conditional(const BitString& s, bool bit) const {
  if (const auto* b = std::get_if<Bernoulli>(&impl_->body)) {
    if (is_null(s)) return std::nullopt;
    return bit ? b->p : Rational(1) - b->p;
  }
  if (std::holds_alternative<FairCoin>(impl_->body)) return Rational(1, 2);
  const Rational m = mass(s);
  if (m == 0) return std::nullopt;
  return mass(s.child(bit)) / m;
}

std::optional<Rational> Measure::iid_probability() const {
  if (std::holds_alternative<FairCoin>(impl_->body)) return Rational(1, 2);
  if (const auto* b = std::get_if<Bernoulli>(&impl_->body)) return b->p;
  return std::nullopt;
}

const MeasureSpec& Measure::spec() const { return impl_->spec; }

std::string Measure::describe() const { return spec_text(impl_->spec); }

AuditReport check_additivity(const Measure& mu, std::size_t depth) {
  AuditReport report;
  report.check = "additivity";
  report.depth = depth;
  for_each_string_upto(depth == 0 ? 0 : depth - 1, [&](const BitString& s) {
    if (depth == 0) return;
    ++report.nodes_checked;
    const Rational m = mu.mass(s);
    const Rational m0 = mu.mass(s.child(false));
    const Rational m1 = mu.mass(s.child(true));
    if (m0 + m1 != m) {
      report.add_violation(s, "mass(s0)+mass(s1) = " + to_string(m0 + m1) + " but mass(s) = " + to_string(m));
    }
    if (m0 < 0 || m1 < 0) report.add_violation(s, "negative child mass");
    if (m == 0 && (m0 != 0 || m1 != 0)) report.add_violation(s, "null cylinder has a non-null child");
  });
  return report;
}

bool equal_to_depth(const Measure& a, const Measure& b, std::size_t depth, BitString* witness) {
  bool equal = true;
  for (std::size_t n = 0; n <= depth && equal; ++n) {
    for_each_string(n, [&](const BitString& s) {
      if (!equal) return;
      if (a.mass(s) != b.mass(s)) {
        equal = false;
        if (witness != nullptr) *witness = s;
      }
    });
  }
  return equal;
}

}  // namespace randlab
