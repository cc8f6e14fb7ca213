#include "randlab/martingale.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "randlab/errors.hpp"

namespace randlab {

struct Martingale::Impl {
  Measure base;
  std::string label;
  CapitalFn fn;
  bool memoize = true;
  std::map<BitString, Rational> table;
  mutable std::shared_mutex lock;
  mutable std::unordered_map<BitString, std::optional<Rational>> memo;

  std::optional<Rational> capital(const BitString& s) const {
    if (!memoize) return fn(s);
    {
      std::shared_lock read(lock);
      const auto it = memo.find(s);
      if (it != memo.end()) return it->second;
    }
    auto value = fn(s);
    std::unique_lock write(lock);
    return memo.emplace(s, std::move(value)).first->second;
  }
};

namespace {

std::shared_ptr<Martingale::Impl> make_impl(Measure base, std::string label, Martingale::CapitalFn fn,
                                            bool memoize) {
  auto impl = std::make_shared<Martingale::Impl>();
  impl->base = std::move(base);
  impl->label = std::move(label);
  impl->fn = std::move(fn);
  impl->memoize = memoize;
  return impl;
}

}  // namespace

Martingale Martingale::from_function(Measure base, std::string label, CapitalFn fn) {
  return Martingale(make_impl(std::move(base), std::move(label), std::move(fn), true));
}

Martingale Martingale::table(Measure base, std::map<BitString, Rational> entries) {
  for (const auto& [s, v] : entries) {
    if (v < 0) throw ConstructionError("negative capital " + to_string(v) + " at '" + s.str() + "'");
  }
  auto shared = std::make_shared<const std::map<BitString, Rational>>(entries);
  auto impl = make_impl(
      std::move(base), "table",
      [shared](const BitString& s) -> std::optional<Rational> {
        for (std::size_t n = s.size() + 1; n-- > 0;) {
          const auto it = shared->find(s.prefix(n));
          if (it != shared->end()) return it->second;
        }
        return Rational(1);
      },
      false);
  impl->table = std::move(entries);
  return Martingale(std::move(impl));
}

Martingale Martingale::all_in(Measure base, bool side, const Rational& start) {
  const Measure mu = base;
  const Rational total = mu.total();
  return Martingale(make_impl(
      std::move(base), std::string("all_in(") + (side ? "1" : "0") + ")",
      [mu, side, start, total](const BitString& s) -> std::optional<Rational> {
        const Rational m = mu.mass(s);
        if (m == 0) return std::nullopt;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s[i] != side) return Rational(0);
        }
        return start * total / m;
      },
      false));
}

Martingale Martingale::constant(Measure base, const Rational& c) {
  const Measure mu = base;
  return Martingale(make_impl(
      std::move(base), "constant(" + to_string(c) + ")",
      [mu, c](const BitString& s) -> std::optional<Rational> {
        if (mu.is_null(s)) return std::nullopt;
        return c;
      },
      false));
}

std::optional<Rational> Martingale::capital(const BitString& s) const { return impl_->capital(s); }
const Measure& Martingale::base() const { return impl_->base; }
const std::string& Martingale::label() const { return impl_->label; }
const std::map<BitString, Rational>& Martingale::table_entries() const { return impl_->table; }

Martingale from_measures(const Measure& nu, const Measure& mu) {
  return Martingale::from_function(mu, "quotient(" + nu.describe() + " / " + mu.describe() + ")",
                                   [nu, mu](const BitString& s) -> std::optional<Rational> {
                                     const Rational m = mu.mass(s);
                                     if (m == 0) return std::nullopt;
                                     return nu.mass(s) / m;
                                   });
}

Measure to_measure(const Martingale& m) {
  const Measure mu = m.base();
  auto weighted = [m, mu](const BitString& s) -> Rational {
    const auto c = m.capital(s);
    if (!c) throw PreconditionError("martingale undefined on positive cylinder '" + s.str() + "'");
    return *c * mu.mass(s);
  };
  return Measure::from_masses("measure_of(" + m.label() + ")", [mu, weighted](const BitString& s) -> Rational {
    if (!mu.is_null(s)) return weighted(s);
    if (s.empty()) return Rational(0);
    BitString sibling = s.parent();
    sibling.push_back(!s[s.size() - 1]);
    if (!mu.is_null(sibling)) return weighted(s.parent()) - weighted(sibling);
    return Rational(0);
  });
}

// ---------------------------------------------------------------------------

struct SavingsPair::State {
  explicit State(Martingale m) : shifted(std::move(m)) {}
  Martingale shifted;
  mutable std::mutex lock;
  mutable std::unordered_map<BitString, std::pair<Rational, Rational>> memo;  // (N, f)

  std::optional<std::pair<Rational, Rational>> get(const BitString& s) const {
    const Measure& mu = shifted.base();
    if (mu.is_null(s)) return std::nullopt;
    std::lock_guard guard(lock);
    const auto hit = memo.find(s);
    if (hit != memo.end()) return hit->second;
    // Longest memoized prefix, then walk down.
    std::size_t k = s.size();
    while (k > 0 && memo.find(s.prefix(k)) == memo.end()) --k;
    BitString node = s.prefix(k);
    auto it = memo.find(node);
    if (it == memo.end()) {
      const Rational n0 = value_of(node);
      it = memo.emplace(node, std::make_pair(n0, Rational(0))).first;
    }
    std::pair<Rational, Rational> current = it->second;
    Rational m_node = value_of(node);
    for (std::size_t i = k; i < s.size(); ++i) {
      const BitString next = node.child(s[i]);
      const Rational m_next = value_of(next);
      const auto& [n, f] = current;
      Rational n_next = m_node == 0 ? f : f + (m_next / m_node) * (n - f);
      Rational f_next = std::max(f, Rational(n_next - 1));
      current = {std::move(n_next), std::move(f_next)};
      memo.emplace(next, current);
      node = next;
      m_node = m_next;
    }
    return current;
  }

  Rational value_of(const BitString& s) const {
    const auto c = shifted.capital(s);
    if (!c) throw PreconditionError("martingale undefined on positive cylinder '" + s.str() + "'");
    return *c;
  }
};

SavingsPair::SavingsPair(Martingale total, std::shared_ptr<State> state, Rational shift, Rational scale)
    : total_(std::move(total)), state_(std::move(state)), shift_(std::move(shift)), scale_(std::move(scale)) {}

std::optional<Rational> SavingsPair::savings(const BitString& s) const {
  const auto v = state_->get(s);
  if (!v) return std::nullopt;
  return v->second;
}

SavingsPair savings_transform(const Martingale& m, const SavingsOptions& options) {
  const Rational shift = options.shift_by_one ? Rational(1) : Rational(0);
  Rational scale = 1;
  if (options.normalize) {
    const auto root = m.capital(BitString{});
    if (!root || *root + shift == 0) throw PreconditionError("cannot normalize a martingale with zero root capital");
    scale = 1 / (*root + shift);
  }
  Martingale shifted = m;
  if (shift != 0 || scale != 1) {
    shifted = Martingale::from_function(
        m.base(), "(" + m.label() + "+" + to_string(shift) + ")*" + to_string(scale),
        [m, shift, scale](const BitString& s) -> std::optional<Rational> {
          const auto c = m.capital(s);
          if (!c) return std::nullopt;
          return (*c + shift) * scale;
        });
  }
  auto state = std::make_shared<SavingsPair::State>(shifted);
  Martingale total = Martingale::from_function(m.base(), "savings_total(" + m.label() + ")",
                                               [state](const BitString& s) -> std::optional<Rational> {
                                                 const auto v = state->get(s);
                                                 if (!v) return std::nullopt;
                                                 return v->first;
                                               });
  return SavingsPair(std::move(total), std::move(state), shift, scale);
}

// ---------------------------------------------------------------------------

CapitalTrace run(const Martingale& m, const BitString& x) {
  CapitalTrace trace;
  trace.prefix = x;
  for (std::size_t n = 0; n <= x.size(); ++n) {
    const auto c = m.capital(x.prefix(n));
    if (!c) {
      trace.null_hit = true;
      break;
    }
    if (trace.values.empty() || *c > trace.max_attained) trace.max_attained = *c;
    trace.values.push_back(*c);
  }
  return trace;
}

AuditReport check_fairness(const Martingale& m, std::size_t depth) {
  AuditReport report;
  report.check = "fairness";
  report.depth = depth;
  const Measure& mu = m.base();
  for_each_string_upto(depth, [&](const BitString& s) {
    ++report.nodes_checked;
    const Rational ms = mu.mass(s);
    const auto cs = m.capital(s);
    if (cs.has_value() != (ms > 0)) {
      report.add_violation(s, ms > 0 ? "capital undefined on a positive cylinder"
                                     : "capital defined on a null cylinder");
    }
    if (cs && *cs < 0) report.add_violation(s, "negative capital " + to_string(*cs));
    if (s.size() >= depth || !cs || ms == 0) return;
    Rational weighted = 0;
    for (bool b : {false, true}) {
      const BitString child = s.child(b);
      const Rational mc = mu.mass(child);
      if (mc == 0) continue;
      const auto cc = m.capital(child);
      if (cc) weighted += *cc * mc;
    }
    if (weighted != *cs * ms) {
      report.add_violation(s, "M(s0)mu(s0)+M(s1)mu(s1) = " + to_string(weighted) + " but M(s)mu(s) = " +
                                  to_string(*cs * ms));
    }
  });
  return report;
}

AuditReport check_savings(const SavingsPair& sp, std::size_t depth) {
  AuditReport report;
  report.check = "savings";
  report.depth = depth;
  for_each_string_upto(depth, [&](const BitString& s) {
    const auto n = sp.total().capital(s);
    const auto f = sp.savings(s);
    if (!n || !f) return;
    ++report.nodes_checked;
    if (*f > *n) report.add_violation(s, "f = " + to_string(*f) + " above N = " + to_string(*n));
    if (*n > *f + 1) report.add_violation(s, "N = " + to_string(*n) + " above f + 1 = " + to_string(*f + 1));
    if (s.empty()) return;
    const auto up = sp.savings(s.parent());
    if (up && *f < *up) report.add_violation(s, "f drops from " + to_string(*up) + " to " + to_string(*f));
  });
  return report;
}

namespace {

void ville_walk(const Martingale& m, const BitString& s, std::size_t n, const Rational& c, Rational& fraction) {
  const Rational ms = m.base().mass(s);
  if (ms == 0) return;
  const auto cap = m.capital(s);
  if (cap && *cap >= c) {
    fraction += ms;
    return;
  }
  if (s.size() == n) return;
  ville_walk(m, s.child(false), n, c, fraction);
  ville_walk(m, s.child(true), n, c, fraction);
}

}  // namespace

VilleResult ville_audit(const Martingale& m, std::size_t n, const Rational& c, std::size_t limit) {
  if (n > limit) {
    throw ResourceError("exhaustive Ville audit at n=" + std::to_string(n) + " exceeds the depth limit " +
                        std::to_string(limit));
  }
  if (c <= 0) throw PreconditionError("Ville threshold must be positive");
  const auto start = m.capital(BitString{});
  if (!start) throw PreconditionError("martingale undefined at the root");
  VilleResult result;
  result.fraction = 0;
  ville_walk(m, BitString{}, n, c, result.fraction);
  result.bound = *start / c;
  result.pass = result.fraction <= result.bound;
  return result;
}

std::map<BitString, Rational> capital_table(const Martingale& m, std::size_t depth) {
  std::map<BitString, Rational> out;
  for_each_string_upto(depth, [&](const BitString& s) {
    if (const auto c = m.capital(s)) out.emplace(s, *c);
  });
  return out;
}

}  // namespace randlab
