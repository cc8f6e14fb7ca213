#include "randlab/betting.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "randlab/errors.hpp"

namespace randlab {

namespace {

constexpr std::size_t kMaxFreePositions = 20;

}  // namespace

Pattern Pattern::cylinder(const BitString& s) {
  Pattern p;
  p.fixed_.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) p.fixed_.emplace_back(i, s[i]);
  return p;
}

bool Pattern::constrain(std::size_t index, bool bit) {
  if (fixed_.empty() || fixed_.back().first < index) {
    fixed_.emplace_back(index, bit);
    return true;
  }
  const auto it = std::lower_bound(fixed_.begin(), fixed_.end(), index,
                                   [](const auto& entry, std::size_t i) { return entry.first < i; });
  if (it != fixed_.end() && it->first == index) return it->second == bit;
  fixed_.insert(it, {index, bit});
  return true;
}

std::optional<bool> Pattern::value(std::size_t index) const {
  const auto it = std::lower_bound(fixed_.begin(), fixed_.end(), index,
                                   [](const auto& entry, std::size_t i) { return entry.first < i; });
  if (it != fixed_.end() && it->first == index) return it->second;
  return std::nullopt;
}

std::optional<BitString> Pattern::as_prefix() const {
  if (!fixed_.empty() && fixed_.back().first + 1 != fixed_.size()) return std::nullopt;
  BitString s;
  for (const auto& [i, b] : fixed_) s.push_back(b);
  return s;
}

std::optional<bool> Pattern::matches(const BitString& x) const {
  bool undecided = false;
  for (const auto& [i, b] : fixed_) {
    if (i >= x.size()) {
      undecided = true;
    } else if (x[i] != b) {
      return false;
    }
  }
  if (undecided) return std::nullopt;
  return true;
}

Rational Pattern::mass(const Measure& mu) const {
  if (const auto p = mu.iid_probability()) {
    std::size_t ones = 0;
    for (const auto& entry : fixed_) ones += entry.second ? 1 : 0;
    return pow(*p, ones) * pow(Rational(1) - *p, fixed_.size() - ones);
  }
  if (const auto prefix = as_prefix()) return mu.mass(*prefix);
  const std::size_t length = fixed_.back().first + 1;
  const std::size_t free = length - fixed_.size();
  if (free > kMaxFreePositions) {
    throw ResourceError("pattern mass needs 2^" + std::to_string(free) + " cylinders");
  }
  Rational total = 0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << free); ++k) {
    BitString s;
    std::size_t next_free = 0;
    std::size_t f = 0;
    for (std::size_t i = 0; i < length; ++i) {
      if (f < fixed_.size() && fixed_[f].first == i) {
        s.push_back(fixed_[f++].second);
      } else {
        s.push_back((k >> (free - 1 - next_free++)) & 1U);
      }
    }
    total += mu.mass(s);
  }
  return total;
}

std::string Pattern::describe() const {
  if (fixed_.empty()) return "whole";
  if (const auto prefix = as_prefix()) return "[" + prefix->str() + "]";
  std::ostringstream os;
  for (std::size_t k = 0; k < fixed_.size(); ++k) {
    os << (k > 0 ? "," : "") << "x" << fixed_[k].first << "=" << (fixed_[k].second ? 1 : 0);
  }
  return os.str();
}

// ---------------------------------------------------------------------------

DecidableSet DecidableSet::whole() {
  DecidableSet s;
  s.parts_.emplace_back();
  return s;
}

DecidableSet DecidableSet::empty() { return DecidableSet{}; }

DecidableSet DecidableSet::cylinder(const BitString& prefix) { return from_pattern(Pattern::cylinder(prefix)); }

DecidableSet DecidableSet::bit(std::size_t index, bool side) {
  Pattern p;
  p.constrain(index, side);
  return from_pattern(std::move(p));
}

DecidableSet DecidableSet::from_cylinders(const CylinderSet& u) {
  DecidableSet s;
  for (const auto& g : u.generators()) s.parts_.push_back(Pattern::cylinder(g));
  return s;
}

DecidableSet DecidableSet::from_pattern(Pattern p) {
  DecidableSet s;
  s.parts_.push_back(std::move(p));
  return s;
}

void DecidableSet::intersect_with(const DecidableSet& other) {
  if (other.parts_.size() == 1) {
    const Pattern& p = other.parts_.front();
    std::vector<Pattern> kept;
    kept.reserve(parts_.size());
    for (auto& q : parts_) {
      bool ok = true;
      for (const auto& [i, b] : p.fixed()) ok = ok && q.constrain(i, b);
      if (ok) kept.push_back(std::move(q));
    }
    parts_ = std::move(kept);
    return;
  }
  std::vector<Pattern> out;
  for (const auto& q : parts_) {
    for (const auto& p : other.parts_) {
      Pattern r = q;
      bool ok = true;
      for (const auto& [i, b] : p.fixed()) ok = ok && r.constrain(i, b);
      if (ok) out.push_back(std::move(r));
    }
  }
  parts_ = std::move(out);
}

void DecidableSet::subtract(const DecidableSet& other) {
  for (const auto& p : other.parts_) {
    std::vector<Pattern> out;
    out.reserve(parts_.size());
    for (auto& q : parts_) {
      bool compatible = true;
      for (const auto& [i, b] : p.fixed()) {
        const auto v = q.value(i);
        if (v && *v != b) {
          compatible = false;
          break;
        }
      }
      if (!compatible) {
        out.push_back(std::move(q));
        continue;
      }
      // q ∖ p splits on each position p fixes and q leaves free.
      std::vector<std::pair<std::size_t, bool>> open;
      for (const auto& [i, b] : p.fixed()) {
        if (!q.value(i)) open.emplace_back(i, b);
      }
      Pattern rest = std::move(q);
      for (std::size_t k = 0; k < open.size(); ++k) {
        const auto [i, b] = open[k];
        if (k + 1 == open.size()) {
          rest.constrain(i, !b);
          out.push_back(std::move(rest));
          break;
        }
        Pattern piece = rest;
        piece.constrain(i, !b);
        out.push_back(std::move(piece));
        rest.constrain(i, b);
      }
    }
    parts_ = std::move(out);
  }
}

DecidableSet DecidableSet::intersection(const DecidableSet& other) const {
  DecidableSet s = *this;
  s.intersect_with(other);
  return s;
}

DecidableSet DecidableSet::difference(const DecidableSet& other) const {
  DecidableSet s = *this;
  s.subtract(other);
  return s;
}

Rational DecidableSet::mass(const Measure& mu) const {
  Rational total = 0;
  for (const auto& p : parts_) total += p.mass(mu);
  return total;
}

std::optional<bool> DecidableSet::contains(const BitString& x) const {
  bool undecided = false;
  for (const auto& p : parts_) {
    const auto m = p.matches(x);
    if (!m) {
      undecided = true;
    } else if (*m) {
      return true;
    }
  }
  if (undecided) return std::nullopt;
  return false;
}

std::optional<BitString> DecidableSet::as_cylinder() const {
  if (parts_.size() != 1) return std::nullopt;
  return parts_.front().as_prefix();
}

std::string DecidableSet::describe() const {
  if (parts_.empty()) return "empty";
  std::string out;
  for (std::size_t k = 0; k < parts_.size(); ++k) out += (k > 0 ? " | " : "") + parts_[k].describe();
  return out;
}

// ---------------------------------------------------------------------------

std::optional<Rational> kl_payoff(const Measure& mu, const std::vector<std::pair<std::size_t, bool>>& known,
                                  std::size_t target, bool side) {
  Pattern b;
  for (const auto& [i, v] : known) {
    if (i == target) throw PreconditionError("target bit " + std::to_string(target) + " is already known");
    if (!b.constrain(i, v)) return std::nullopt;
  }
  Pattern win = b;
  win.constrain(target, side);
  Pattern lose = b;
  lose.constrain(target, !side);
  const Rational mw = win.mass(mu);
  if (mw == 0 || b.mass(mu) == 0) return std::nullopt;
  return lose.mass(mu) / mw;
}

// ---------------------------------------------------------------------------

namespace {

struct Resolution {
  Rational cond;
  std::optional<DecidableSet> intersection;
};

// μ(A | B). Shortcut: an i.i.d. measure and a single fresh bit.
Resolution conditional_of(const DecidableSet& a, const BettingState& state, const Measure& mu) {
  if (const auto p = mu.iid_probability(); p && a.parts().size() == 1 && a.parts().front().fixed().size() == 1) {
    const auto [index, side] = a.parts().front().fixed().front();
    const bool fresh = std::none_of(state.knowledge.parts().begin(), state.knowledge.parts().end(),
                                    [index = index](const Pattern& q) { return q.value(index).has_value(); });
    if (fresh) return {side ? *p : Rational(1 - *p), std::nullopt};
  }
  DecidableSet inter = state.knowledge.intersection(a);
  Rational cond = inter.mass(mu) / state.knowledge_mass;
  return {std::move(cond), std::move(inter)};
}

std::string bet_label(const Bet& bet) { return bet.description.empty() ? bet.event.describe() : bet.description; }

// Checks that do not depend on the outcome; returns the complaint.
std::optional<std::string> stake_problem(const Bet& bet, const BettingState& state) {
  if (bet.stake < 0) return "negative stake " + to_string(bet.stake);
  if (bet.stake > state.capital) {
    return "stake " + to_string(bet.stake) + " exceeds capital " + to_string(state.capital);
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::horizon:
      return "horizon";
    case HaltReason::idle:
      return "idle";
    case HaltReason::undetermined:
      return "undetermined";
    case HaltReason::null_knowledge:
      return "null_knowledge";
    case HaltReason::violation:
      return "violation";
  }
  return "?";
}

PlayResult play(const BettingStrategy& s, const Measure& mu, const BitString& x) {
  PlayResult result;
  BettingState state{BitString{}, s.start_capital, DecidableSet::whole(), mu.total()};
  result.trace.values.push_back(state.capital);
  result.trace.max_attained = state.capital;
  auto finish = [&](HaltReason reason, std::string message) {
    result.halt = reason;
    result.message = std::move(message);
    result.trace.prefix = state.history;
    return result;
  };
  for (std::size_t step = 0;; ++step) {
    if (step >= s.horizon) return finish(HaltReason::horizon, "");
    auto bet = s.decide(state);
    if (!bet) return finish(HaltReason::idle, "");
    if (auto problem = stake_problem(*bet, state)) return finish(HaltReason::violation, *problem);
    if (state.knowledge_mass == 0) return finish(HaltReason::null_knowledge, "knowledge set has measure 0");
    const auto member = bet->event.contains(x);
    if (!member) {
      return finish(HaltReason::undetermined, "sample too short to settle '" + bet_label(*bet) + "'");
    }
    auto resolution = conditional_of(bet->event, state, mu);
    const Rational& cond = resolution.cond;
    if (cond <= 0 || cond >= 1) {
      return finish(HaltReason::violation,
                    "bet on '" + bet_label(*bet) + "' has conditional probability " + to_string(cond));
    }
    PlayStep record;
    record.event = bet_label(*bet);
    record.stake = bet->stake;
    record.won = *member;
    record.payoff = (1 - cond) / cond;
    if (*member) {
      state.capital += bet->stake * record.payoff;
      if (resolution.intersection) {
        state.knowledge = std::move(*resolution.intersection);
      } else {
        state.knowledge.intersect_with(bet->event);
      }
      state.knowledge_mass *= cond;
    } else {
      state.capital -= bet->stake;
      state.knowledge.subtract(bet->event);
      state.knowledge_mass *= 1 - cond;
    }
    state.history.push_back(*member);
    record.capital = state.capital;
    record.knowledge_mass = state.knowledge_mass;
    result.trace.values.push_back(state.capital);
    if (state.capital > result.trace.max_attained) result.trace.max_attained = state.capital;
    result.steps.push_back(std::move(record));
  }
}

// ---------------------------------------------------------------------------

namespace {

struct TreeNode {
  Rational mass;
  Rational capital;
  bool betting = false;
  Rational cond;
};

struct Tree {
  std::size_t depth = 0;
  std::unordered_map<BitString, TreeNode> nodes;
  AuditReport report;
};

void grow(const BettingStrategy& s, const Measure& mu, BettingState state, Tree& tree, bool audit) {
  TreeNode& node = tree.nodes[state.history];
  node.mass = state.knowledge_mass;
  node.capital = state.capital;
  ++tree.report.nodes_checked;
  if (state.capital < 0) tree.report.add_violation(state.history, "negative capital " + to_string(state.capital));
  if (state.history.size() >= tree.depth || state.history.size() >= s.horizon || state.knowledge_mass == 0) return;
  auto bet = s.decide(state);
  if (!bet) return;
  if (auto problem = stake_problem(*bet, state)) {
    tree.report.add_violation(state.history, *problem);
    return;
  }
  DecidableSet win = state.knowledge.intersection(bet->event);
  const Rational win_mass = win.mass(mu);
  const Rational cond = win_mass / state.knowledge_mass;
  if (cond <= 0 || cond >= 1) {
    tree.report.add_violation(state.history,
                              "bet on '" + bet_label(*bet) + "' has conditional probability " + to_string(cond));
    return;
  }
  DecidableSet lose = state.knowledge.difference(bet->event);
  const Rational lose_mass = audit ? lose.mass(mu) : Rational(state.knowledge_mass - win_mass);
  if (win_mass + lose_mass != state.knowledge_mass) {
    tree.report.add_violation(state.history, "mu(B0)+mu(B1) = " + to_string(win_mass + lose_mass) +
                                                 " but mu(B) = " + to_string(state.knowledge_mass));
  }
  node.betting = true;
  node.cond = cond;
  const Rational payoff = (1 - cond) / cond;
  BettingState lost{state.history.child(false), state.capital - bet->stake, std::move(lose), lose_mass};
  BettingState won{state.history.child(true), state.capital + bet->stake * payoff, std::move(win), win_mass};
  grow(s, mu, std::move(lost), tree, audit);
  grow(s, mu, std::move(won), tree, audit);
}

std::shared_ptr<const Tree> build_tree(const BettingStrategy& s, const Measure& mu, std::size_t depth, bool audit) {
  auto tree = std::make_shared<Tree>();
  tree->depth = depth;
  tree->report.check = "strategy";
  tree->report.depth = depth;
  grow(s, mu, BettingState{BitString{}, s.start_capital, DecidableSet::whole(), mu.total()}, *tree, audit);
  return tree;
}

// The deepest tabled prefix of σ and whether σ continues it along the
// all-wins branch of the stake-0 idle bet.
std::pair<const TreeNode*, bool> locate(const Tree& tree, const BitString& s) {
  for (std::size_t n = s.size() + 1; n-- > 0;) {
    const auto it = tree.nodes.find(s.prefix(n));
    if (it == tree.nodes.end()) continue;
    bool ones = true;
    for (std::size_t i = n; i < s.size(); ++i) ones = ones && s[i];
    return {&it->second, ones};
  }
  return {nullptr, false};
}

}  // namespace

CantorView strategy_to_cantor(const BettingStrategy& s, const Measure& mu, std::size_t depth) {
  auto tree = build_tree(s, mu, depth, false);
  if (!tree->report.pass()) {
    const auto& v = tree->report.violations.front();
    throw PreconditionError("strategy '" + s.label + "' violates its invariants at history '" + v.where.str() +
                            "': " + v.what);
  }
  Measure nu = Measure::from_masses("knowledge(" + s.label + ")", [tree](const BitString& sigma) -> Rational {
    const auto [node, ones] = locate(*tree, sigma);
    return ones ? node->mass : Rational(0);
  });
  Martingale capital =
      Martingale::from_function(nu, "capital(" + s.label + ")", [tree](const BitString& sigma) -> std::optional<Rational> {
        const auto [node, ones] = locate(*tree, sigma);
        if (!ones || node->mass == 0) return std::nullopt;
        return node->capital;
      });
  return CantorView{std::move(nu), std::move(capital)};
}

StrategyClass classify_strategy(const BettingStrategy& s, const Measure& mu, std::size_t depth) {
  const auto tree = build_tree(s, mu, depth, false);
  StrategyClass out;
  out.exhaustive_trend = 0;
  for (const auto& [sigma, node] : tree->nodes) {
    if (node.betting && node.cond != Rational(1, 2)) out.balanced = false;
    if (!node.betting && node.mass > out.exhaustive_trend) out.exhaustive_trend = node.mass;
  }
  return out;
}

std::map<BitString, Interval> strategy_to_interval_morphism(const BettingStrategy& s, const Measure& mu,
                                                            std::size_t depth) {
  const auto tree = build_tree(s, mu, depth, false);
  std::map<BitString, Interval> out;
  std::vector<std::pair<BitString, Interval>> stack{{BitString{}, Interval{Rational(0), mu.total()}}};
  while (!stack.empty()) {
    auto [sigma, range] = std::move(stack.back());
    stack.pop_back();
    const auto [node, ones] = locate(*tree, sigma);
    const Rational mass = ones ? node->mass : Rational(0);
    if (mass == 0) continue;
    out.emplace(sigma, range);
    if (sigma.size() >= depth) continue;
    const Rational zero_mass = [&] {
      const auto [child, child_ones] = locate(*tree, sigma.child(false));
      return child_ones ? child->mass : Rational(0);
    }();
    const Rational split = range.lo + zero_mass;
    stack.emplace_back(sigma.child(true), Interval{split, range.hi});
    stack.emplace_back(sigma.child(false), Interval{range.lo, split});
  }
  return out;
}

AuditReport check_strategy(const BettingStrategy& s, const Measure& mu, std::size_t depth) {
  return build_tree(s, mu, depth, true)->report;
}

// ---------------------------------------------------------------------------

BettingStrategy doubling_strategy(const CylinderSet& u, const Measure& mu) {
  const Rational total = u.mass(mu);
  if (total > Rational(1, 2)) {
    throw PreconditionError("doubling strategy needs mu(U) <= 1/2, got " + to_string(total));
  }
  struct Target {
    DecidableSet event;
    Rational mass;
    std::string label;
  };
  auto targets = std::make_shared<std::vector<Target>>();
  for (const auto& g : u.generators()) {
    Rational m = mu.mass(g);
    if (m > 0) targets->push_back({DecidableSet::cylinder(g), std::move(m), "[" + g.str() + "]"});
  }
  BettingStrategy s;
  s.label = "doubling";
  s.horizon = targets->size();
  s.decide = [targets](const BettingState& state) -> std::optional<Bet> {
    const std::size_t k = state.history.size();
    if (k >= targets->size() || state.history.count_ones() > 0) return std::nullopt;
    const Target& t = (*targets)[k];
    // Earlier generators are disjoint from this one, so A ∩ B = A.
    Rational stake = (2 - state.capital) * t.mass / (state.knowledge_mass - t.mass);
    return Bet{t.event, std::move(stake), t.label};
  };
  return s;
}

BettingStrategy bit_all_in(const BitString& sides, std::vector<std::size_t> order) {
  if (order.empty()) {
    for (std::size_t i = 0; i < sides.size(); ++i) order.push_back(i);
  }
  if (order.size() != sides.size()) throw ConstructionError("bit order and side sequence differ in length");
  if (std::set<std::size_t>(order.begin(), order.end()).size() != order.size()) {
    throw ConstructionError("bit strategies may not bet on a bit twice");
  }
  BettingStrategy s;
  s.label = "bit_all_in(" + sides.str() + ")";
  s.horizon = sides.size();
  s.decide = [sides, order](const BettingState& state) -> std::optional<Bet> {
    const std::size_t k = state.history.size();
    if (k >= order.size()) return std::nullopt;
    return Bet{DecidableSet::bit(order[k], sides[k]), state.capital,
               "bit " + std::to_string(order[k]) + " = " + (sides[k] ? "1" : "0")};
  };
  return s;
}

namespace {

std::optional<Rational> next_one(const Measure& m, const BettingState& state, std::size_t n) {
  if (const auto p = m.iid_probability()) return *p;
  const auto prefix = state.knowledge.as_cylinder();
  if (!prefix || prefix->size() != n) return std::nullopt;
  return m.conditional(*prefix, true);
}

}  // namespace

BettingStrategy likelihood_ratio(const Measure& model, const Measure& mu, std::size_t horizon) {
  BettingStrategy s;
  s.label = "likelihood_ratio(" + model.describe() + " / " + mu.describe() + ")";
  s.horizon = horizon;
  s.decide = [model, mu, horizon](const BettingState& state) -> std::optional<Bet> {
    const std::size_t n = state.history.size();
    if (n >= horizon) return std::nullopt;
    const auto mu1 = next_one(mu, state, n);
    if (!mu1 || *mu1 <= 0 || *mu1 >= 1) return std::nullopt;
    const Rational nu1 = next_one(model, state, n).value_or(*mu1);
    const bool side = nu1 >= *mu1;
    Rational stake = side ? Rational(state.capital * (nu1 - *mu1) / (1 - *mu1))
                          : Rational(state.capital * (*mu1 - nu1) / *mu1);
    return Bet{DecidableSet::bit(n, side), std::move(stake),
               "bit " + std::to_string(n) + " = " + (side ? "1" : "0")};
  };
  return s;
}

BettingStrategy zero_stake(std::size_t n) {
  BettingStrategy s;
  s.label = "zero_stake(" + std::to_string(n) + ")";
  s.horizon = n;
  s.decide = [n](const BettingState& state) -> std::optional<Bet> {
    const std::size_t k = state.history.size();
    if (k >= n) return std::nullopt;
    return Bet{DecidableSet::bit(k, true), Rational(0), "bit " + std::to_string(k) + " = 1"};
  };
  return s;
}

BettingStrategy zero_bet() {
  BettingStrategy s;
  s.label = "zero_bet";
  s.horizon = 0;
  s.decide = [](const BettingState&) -> std::optional<Bet> { return std::nullopt; };
  return s;
}

BettingStrategy decision_table(std::map<BitString, Bet> table, const Rational& start) {
  std::size_t horizon = 0;
  for (const auto& [history, bet] : table) horizon = std::max(horizon, history.size() + 1);
  auto shared = std::make_shared<const std::map<BitString, Bet>>(std::move(table));
  BettingStrategy s;
  s.label = "decision_table";
  s.start_capital = start;
  s.horizon = horizon;
  s.decide = [shared](const BettingState& state) -> std::optional<Bet> {
    const auto it = shared->find(state.history);
    if (it == shared->end()) return std::nullopt;
    return it->second;
  };
  return s;
}

BettingStrategy parse_decision_table(std::string_view text) {
  std::map<BitString, Bet> table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::istringstream is(line);
    for (std::string f; is >> f;) fields.push_back(f);
    if (fields.size() != 3) throw ParseError("expected 'history<TAB>event<TAB>stake'", line_no, 1);
    try {
      const BitString history = (fields[0] == "-" || fields[0] == "ε") ? BitString{} : BitString::parse(fields[0]);
      Bet bet;
      const std::string& ev = fields[1];
      if (ev == "whole") {
        bet.event = DecidableSet::whole();
      } else if (ev.starts_with("bit:")) {
        const auto eq = ev.find('=');
        if (eq == std::string::npos || eq + 2 != ev.size() || (ev.back() != '0' && ev.back() != '1')) {
          throw ParseError("bit events look like bit:I=B");
        }
        bet.event = DecidableSet::bit(std::stoul(ev.substr(4, eq - 4)), ev.back() == '1');
      } else if (ev.starts_with("cyl:")) {
        std::vector<BitString> gens;
        std::istringstream gs(ev.substr(4));
        for (std::string g; std::getline(gs, g, ',');) gens.push_back(BitString::parse(g));
        bet.event = DecidableSet::from_cylinders(CylinderSet(std::move(gens)));
      } else {
        throw ParseError("unknown event '" + ev + "' (whole, bit:I=B, cyl:s1,s2)");
      }
      bet.description = ev;
      bet.stake = parse_rational(fields[2]);
      if (!table.emplace(history, std::move(bet)).second) throw ParseError("duplicate history");
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no, 1);
    } catch (const std::logic_error& e) {
      throw ParseError(std::string("bad number: ") + e.what(), line_no, 1);
    } catch (const ConstructionError& e) {
      throw ParseError(e.what(), line_no, 1);
    }
  }
  return decision_table(std::move(table));
}

}  // namespace randlab
