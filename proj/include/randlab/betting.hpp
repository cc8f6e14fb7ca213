#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randlab/audit.hpp"
#include "randlab/bitstring.hpp"
#include "randlab/cells.hpp"
#include "randlab/martingale.hpp"
#include "randlab/measure.hpp"
#include "randlab/randomness_tests.hpp"
#include "randlab/rational.hpp"

namespace randlab {

/// Partial assignment of bit positions, i.e. the set of sequences that agree
/// with it. Kept sorted by position.
class Pattern {
 public:
  Pattern() = default;
  static Pattern cylinder(const BitString& s);

  /// Adds x_index = bit. Returns false (leaving the pattern unchanged) if the
  /// opposite value is already fixed.
  bool constrain(std::size_t index, bool bit);
  std::optional<bool> value(std::size_t index) const;
  const std::vector<std::pair<std::size_t, bool>>& fixed() const { return fixed_; }

  /// Positions 0..k-1 are fixed and nothing else; returns that prefix.
  std::optional<BitString> as_prefix() const;
  /// nullopt when x is too short to decide.
  std::optional<bool> matches(const BitString& x) const;
  Rational mass(const Measure& mu) const;
  std::string describe() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::vector<std::pair<std::size_t, bool>> fixed_;
};

/// Finite union of pairwise disjoint patterns: a clopen, hence decidable,
/// subset of Cantor space.
class DecidableSet {
 public:
  static DecidableSet whole();
  static DecidableSet empty();
  static DecidableSet cylinder(const BitString& s);
  static DecidableSet bit(std::size_t index, bool side);
  static DecidableSet from_cylinders(const CylinderSet& u);
  static DecidableSet from_pattern(Pattern p);

  const std::vector<Pattern>& parts() const { return parts_; }
  bool is_empty() const { return parts_.empty(); }

  void intersect_with(const DecidableSet& other);
  void subtract(const DecidableSet& other);
  DecidableSet intersection(const DecidableSet& other) const;
  DecidableSet difference(const DecidableSet& other) const;

  Rational mass(const Measure& mu) const;
  std::optional<bool> contains(const BitString& x) const;
  /// The prefix when the set is a single cylinder.
  std::optional<BitString> as_cylinder() const;
  std::string describe() const;

 private:
  std::vector<Pattern> parts_;
};

/// The fair per-unit payoff for betting that x_target = side, knowing the
/// bits in `known`: mu(opposite | known)/mu(side | known). nullopt when the
/// known event or the side is null. Throws PreconditionError if target is
/// already known.
std::optional<Rational> kl_payoff(const Measure& mu, const std::vector<std::pair<std::size_t, bool>>& known,
                                  std::size_t target, bool side);

struct Bet {
  DecidableSet event;
  Rational stake;
  std::string description;
};

struct BettingState {
  /// Win (1) / loss (0) record so far.
  BitString history;
  Rational capital;
  /// B_σ.
  DecidableSet knowledge;
  Rational knowledge_mass;
};

/// A strategy is a decision rule on states; returning nullopt stops betting.
/// `horizon` caps the number of bets.
struct BettingStrategy {
  using DecideFn = std::function<std::optional<Bet>(const BettingState&)>;

  std::string label;
  Rational start_capital = 1;
  std::size_t horizon = 0;
  DecideFn decide;
};

/// Bets on the generators of U in order, each stake lifting the capital to
/// exactly 2 on a win. Null generators are skipped. Throws
/// PreconditionError if mu(U) > 1/2.
BettingStrategy doubling_strategy(const CylinderSet& u, const Measure& mu);

/// Bets everything on x_{order[k]} = sides[k] at step k. `order` defaults to
/// 0, 1, 2, ...
BettingStrategy bit_all_in(const BitString& sides, std::vector<std::size_t> order = {});

/// Bets on bit n at step n so that the capital tracks model(x↾n)/mu(x↾n).
BettingStrategy likelihood_ratio(const Measure& model, const Measure& mu, std::size_t horizon);

/// Bets stake 0 on bits 0..n-1.
BettingStrategy zero_stake(std::size_t n);

/// Never bets.
BettingStrategy zero_bet();

/// Explicit decisions keyed by history.
BettingStrategy decision_table(std::map<BitString, Bet> table, const Rational& start = 1);

/// Lines "history<TAB>event<TAB>stake": history a bit string or "ε"/"-",
/// event "whole", "bit:I=B" or "cyl:s1,s2,...".
BettingStrategy parse_decision_table(std::string_view text);

enum class HaltReason { horizon, idle, undetermined, null_knowledge, violation };
std::string to_string(HaltReason reason);

struct PlayStep {
  std::string event;
  Rational stake;
  bool won = false;
  /// Per-unit winnings μ(B∖A)/μ(A∩B).
  Rational payoff;
  Rational capital;
  Rational knowledge_mass;
};

struct PlayResult {
  std::vector<PlayStep> steps;
  /// Capital indexed by the win/loss history.
  CapitalTrace trace;
  HaltReason halt = HaltReason::horizon;
  std::string message;
};

/// Plays against the sample x. Stops at the horizon, at the first idle
/// step, when x is too short to settle an event, or on a strategy
/// violation (stake above capital, conditional probability outside (0,1)).
PlayResult play(const BettingStrategy& s, const Measure& mu, const BitString& x);

struct CantorView {
  /// ν(σ) = μ(B_σ).
  Measure nu;
  /// Capital after history σ, a martingale on (2^ω, ν).
  Martingale capital;
};

/// Histories longer than d, or where the strategy stops, continue as the
/// stake-0 bet on the whole space: ν(σ1) = ν(σ), ν(σ0) = 0. Throws
/// PreconditionError if the strategy violates its invariants within depth d.
CantorView strategy_to_cantor(const BettingStrategy& s, const Measure& mu, std::size_t depth);

struct StrategyClass {
  bool balanced = true;
  /// max over |σ| = d of μ(B_σ).
  Rational exhaustive_trend;
};

StrategyClass classify_strategy(const BettingStrategy& s, const Measure& mu, std::size_t depth);

/// B_ε -> (0,1), B_σ0 -> (a, a + μ(B_σ0)), B_σ1 -> (a + μ(B_σ0), b). Only
/// histories of positive knowledge mass are listed.
std::map<BitString, Interval> strategy_to_interval_morphism(const BettingStrategy& s, const Measure& mu,
                                                            std::size_t depth);

/// Knowledge additivity over all histories of length < depth, plus the
/// no-debt and conditional-probability invariants.
AuditReport check_strategy(const BettingStrategy& s, const Measure& mu, std::size_t depth);

}  // namespace randlab
