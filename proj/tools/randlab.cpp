// randlab: audits, conversions, betting runs and deficiency traces from the
// command line. Exit status: 0 all checks pass, 1 a mathematical check
// failed, 2 usage or parse error, 3 resource limit.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_report.hpp"
#include "randlab/battery.hpp"
#include "randlab/betting.hpp"
#include "randlab/bitsource.hpp"
#include "randlab/cells.hpp"
#include "randlab/errors.hpp"
#include "randlab/machines.hpp"
#include "randlab/martingale.hpp"
#include "randlab/measure.hpp"
#include "randlab/randomness_tests.hpp"
#include "randlab/spec_io.hpp"

namespace randlab::cli {
namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

/// Raised for command-line misuse that CLI11 cannot see (bad combinations).
class UsageError : public Error {
 public:
  using Error::Error;
};

std::size_t depth_limit() {
  const char* env = std::getenv("RANDLAB_DEPTH_LIMIT");
  if (env == nullptr || *env == '\0') return kDefaultEnumerationLimit;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0 || v > 62) throw UsageError("RANDLAB_DEPTH_LIMIT must be an integer in 1..62");
  return v;
}

void require_depth(std::size_t depth, const std::string& what) {
  const std::size_t limit = depth_limit();
  if (depth > limit) {
    throw ResourceError(what + " at depth " + std::to_string(depth) + " exceeds the enumeration cap " +
                        std::to_string(limit) + " (RANDLAB_DEPTH_LIMIT raises it)");
  }
}

std::vector<Rational> parse_point(const std::string& text) {
  std::vector<Rational> point;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) point.push_back(parse_rational(part));
  if (point.empty()) throw ParseError("empty point", 1, 1);
  return point;
}

BoundaryPolicy parse_policy(const std::string& text) {
  if (text == "strict") return BoundaryPolicy::strict;
  if (text == "half_open") return BoundaryPolicy::half_open;
  throw ParseError("unknown boundary policy '" + text + "' (strict, half_open)", 1, 1);
}

BaseMeasure parse_base(const std::string& text, std::size_t dim) {
  if (text == "lebesgue") return BaseMeasure::lebesgue(dim);
  if (dim != 1) throw UsageError("a pushed-forward binary base exists in dimension 1 only");
  return BaseMeasure::binary(parse_measure(text));
}

CellDecomposition parse_cells(const std::string& kind, const std::string& base) {
  std::size_t dim = 1;
  if (kind.starts_with("interleave:")) dim = std::stoul(kind.substr(11));
  return CellDecomposition::parse(kind, parse_base(base, dim));
}

std::string name_text(const BitString& s) { return s.empty() ? "ε" : s.str(); }

/// Exact when it fits on a line, else a marked power-of-two approximation.
std::string short_rational(const Rational& q) {
  std::string exact = to_string(q);
  if (exact.size() <= 48 || q <= 0) return exact;
  char buf[64];
  std::snprintf(buf, sizeof buf, "≈2^%.4f", log2_approx(q));
  return buf;
}

// ---------------------------------------------------------------------------
// audit

struct AuditOptions {
  std::string measure;
  std::string martingale;
  std::string test;
  std::vector<std::string> checks;
  std::size_t depth = 12;
  std::size_t n = 12;
  std::vector<std::string> c{"2"};
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::string run;
  std::string trace;
  std::string out;
};

/// Bits drawn exactly from mu: bit 1 with probability mu(s1)/mu(s).
BitString sample_path(const Measure& mu, std::size_t n, gmp_randclass& rng) {
  BitString s;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = mu.conditional(s, true);
    if (!p) break;
    const Integer draw = rng.get_z_range(p->get_den());
    s.push_back(draw < p->get_num());
  }
  return s;
}

Json ville_json(const VilleResult& v, const Rational& c, std::size_t n) {
  Json j;
  j["n"] = n;
  j["c"] = rational_json(c);
  j["fraction"] = rational_json(v.fraction);
  j["bound"] = rational_json(v.bound);
  j["fraction_approx"] = approx(v.fraction);
  return j;
}

void add_trace_csv(const Martingale& m, const BitString& x, const std::string& path) {
  const CapitalTrace t = run(m, x);
  std::ostringstream csv;
  csv << "step,prefix,capital_num,capital_den\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    csv << i << ',' << x.prefix(i).str() << ',' << t.values[i].get_num().get_str() << ','
        << t.values[i].get_den().get_str() << '\n';
  }
  emit(path, csv.str());
}

int cmd_audit(const AuditOptions& o, const std::vector<std::string>& argv) {
  RunReport report("audit", argv);
  std::optional<Measure> mu;
  std::optional<Martingale> m;
  if (!o.measure.empty()) mu = parse_measure(o.measure);
  if (!o.martingale.empty()) m = parse_martingale(o.martingale);
  std::optional<TestBundle> bundle;
  if (!o.test.empty()) bundle = test_bundle_from_json(parse_json(read_text_file(o.test)));
  if (!mu && !m && !bundle) throw UsageError("audit needs --measure, --martingale or --test");

  std::vector<std::string> checks = o.checks;
  if (checks.empty()) {
    if (mu) checks.push_back("additivity");
    if (m) checks.push_back("fairness");
    if (bundle) checks.push_back("bounds");
  }
  const std::size_t digest_depth = std::min<std::size_t>(o.depth, 8);
  if (mu) report.add_digest("measure", measure_json(*mu, digest_depth));
  if (m) report.add_digest("martingale", martingale_json(*m, digest_depth));
  if (bundle) report.add_digest("test", parse_json(read_text_file(o.test)));

  auto need_martingale = [&](const std::string& check) -> const Martingale& {
    if (!m) throw UsageError("check '" + check + "' needs --martingale");
    return *m;
  };
  for (const std::string& check : checks) {
    if (check == "additivity") {
      require_depth(o.depth, "additivity audit");
      report.add_check(check_additivity(mu ? *mu : need_martingale(check).base(), o.depth));
    } else if (check == "fairness") {
      require_depth(o.depth, "fairness audit");
      report.add_check(check_fairness(need_martingale(check), o.depth));
    } else if (check == "savings") {
      require_depth(o.depth, "savings audit");
      const SavingsPair sp = savings_transform(need_martingale(check));
      AuditReport fair = check_fairness(sp.total(), o.depth);
      fair.check = "savings_fairness";
      report.add_check(fair);
      report.add_check(check_savings(sp, o.depth));
    } else if (check == "roundtrip") {
      require_depth(o.depth, "round trip");
      const Martingale& mart = need_martingale(check);
      const Measure nu = to_measure(mart);
      report.add_check(check_additivity(nu, o.depth));
      if (!mu) throw UsageError("check 'roundtrip' needs --measure for the expected nu");
      BitString witness;
      const bool same = equal_to_depth(nu, *mu, o.depth, &witness);
      Json detail;
      if (!same) detail["first_difference"] = name_text(witness);
      report.add_check("roundtrip", same, detail);
    } else if (check == "ville") {
      const Martingale& mart = need_martingale(check);
      for (const std::string& ctext : o.c) {
        const Rational c = parse_rational(ctext);
        if (o.samples > 0) {
          // Statistical: the capital(ε)/c bound holds in expectation only.
          gmp_randclass rng(gmp_randinit_mt);
          rng.seed(static_cast<unsigned long>(o.seed));
          std::size_t hits = 0;
          const auto start = mart.capital(BitString{});
          if (!start) throw PreconditionError("martingale undefined at the root");
          for (std::size_t k = 0; k < o.samples; ++k) {
            const BitString x = sample_path(mart.base(), o.n, rng);
            const CapitalTrace t = run(mart, x);
            if (t.max_attained >= c) ++hits;
          }
          const Rational frac(static_cast<long>(hits), static_cast<long>(o.samples));
          Json detail;
          detail["statistical"] = true;
          detail["samples"] = o.samples;
          detail["seed"] = o.seed;
          detail["n"] = o.n;
          detail["c"] = rational_json(c);
          detail["fraction"] = rational_json(frac);
          detail["bound"] = rational_json(*start / c);
          report.add_check("ville_sampled", true, detail);
          continue;
        }
        const VilleResult v = ville_audit(mart, o.n, c, depth_limit());
        report.add_check("ville", v.pass, ville_json(v, c, o.n));
      }
    } else if (check == "bounds") {
      if (!bundle) throw UsageError("check 'bounds' needs --test");
      require_depth(o.depth, "test bound audit");
      if (bundle->martingale) report.add_check(check_fairness(*bundle->martingale, o.depth));
      if (bundle->ml) report.add_check(verify_test_bounds(*bundle->ml));
      if (bundle->bounded_ml) report.add_check(verify_test_bounds(*bundle->bounded_ml, o.depth));
      if (bundle->vitali) report.add_check(verify_test_bounds(*bundle->vitali, o.depth));
      if (bundle->integral) report.add_check(verify_test_bounds(*bundle->integral, o.depth));
    } else {
      throw UsageError("unknown check '" + check + "' (additivity, fairness, savings, roundtrip, ville, bounds)");
    }
  }
  if (!o.run.empty()) {
    add_trace_csv(need_martingale("run"), BitString::parse(o.run), o.trace);
  }
  emit(o.out, report.render());
  return report.all_pass() ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------
// convert

const std::vector<std::string> kStages{"martingale", "savings", "integral", "bounded_ml", "vitali"};
const std::multimap<std::string, std::string> kEdges{
    {"martingale", "savings"}, {"savings", "integral"},   {"integral", "bounded_ml"},
    {"bounded_ml", "vitali"},  {"vitali", "integral"},    {"integral", "martingale"},
};
const char* const kChain = "martingale -> savings -> integral -> bounded_ml -> vitali -> integral -> martingale";

std::vector<std::string> shortest_path(const std::string& from, const std::string& to) {
  std::map<std::string, std::string> parent{{from, ""}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string at = queue.front();
    queue.pop_front();
    if (at == to) break;
    const auto [lo, hi] = kEdges.equal_range(at);
    for (auto it = lo; it != hi; ++it) {
      if (parent.emplace(it->second, at).second) queue.push_back(it->second);
    }
  }
  if (!parent.contains(to)) {
    throw UsageError("no conversion path from " + from + " to " + to + "; the chain is " + kChain);
  }
  std::vector<std::string> path;
  for (std::string at = to; at != from; at = parent.at(at)) path.push_back(at);
  std::reverse(path.begin(), path.end());
  return path;
}

struct Stage {
  std::string kind;
  std::optional<Martingale> martingale;
  std::optional<SavingsPair> savings;
  std::optional<IntegralStep> integral;
  std::optional<BoundedMLTest> bounded_ml;
  std::optional<VitaliTest> vitali;
};

Json stage_json(const Stage& s, std::size_t depth) {
  if (s.martingale) {
    Json j = martingale_json(*s.martingale, depth);
    j["kind"] = "martingale";
    return j;
  }
  if (s.savings) {
    Json j = martingale_json(s.savings->total(), depth);
    j["kind"] = "savings";
    j["shift"] = rational_json(s.savings->shift());
    j["scale"] = rational_json(s.savings->scale());
    Json f = Json::object();
    for_each_string_upto(depth, [&](const BitString& p) {
      if (const auto v = s.savings->savings(p)) f[p.str()] = to_string(*v);
    });
    j["savings"] = std::move(f);
    return j;
  }
  if (s.integral) return to_json(*s.integral, depth);
  if (s.bounded_ml) return to_json(*s.bounded_ml, depth);
  return to_json(*s.vitali, depth);
}

void verify_stage(const Stage& s, std::size_t depth, RunReport& report) {
  auto tagged = [&](AuditReport a) {
    a.check = s.kind + ":" + a.check;
    report.add_check(a);
  };
  if (s.martingale) tagged(check_fairness(*s.martingale, depth));
  if (s.savings) {
    tagged(check_fairness(s.savings->total(), depth));
    tagged(check_savings(*s.savings, depth));
  }
  if (s.integral) tagged(verify_test_bounds(*s.integral, depth));
  if (s.bounded_ml) tagged(verify_test_bounds(*s.bounded_ml, depth));
  if (s.vitali) tagged(verify_test_bounds(*s.vitali, depth));
}

Stage advance(const Stage& s, const std::string& to, std::size_t depth) {
  Stage next;
  next.kind = to;
  if (to == "savings") {
    next.savings = savings_transform(*s.martingale);
  } else if (to == "integral" && s.savings) {
    next.integral = martingale_to_integral(*s.savings, depth);
  } else if (to == "integral") {
    next.integral = vitali_to_integral(*s.vitali, depth);
  } else if (to == "bounded_ml") {
    next.bounded_ml = integral_to_bounded_ml(*s.integral);
  } else if (to == "vitali") {
    next.vitali = bounded_ml_to_vitali(*s.bounded_ml);
  } else {
    next.martingale = integral_to_martingale(*s.integral);
  }
  return next;
}

struct ConvertOptions {
  std::string martingale;
  std::string test;
  std::vector<std::string> to;
  std::size_t depth = 8;
  std::vector<std::string> transfer;
  std::size_t refine_depth = 12;
  std::size_t target_depth = 4;
  std::string out;
  std::string report;
};

void transfer_report(const BoundedMLTest& test, const ConvertOptions& o, RunReport& report) {
  std::string a_kind = "binary";
  std::string b_kind = "ternary";
  for (const std::string& t : o.transfer) {
    if (t.starts_with("A=")) {
      a_kind = t.substr(2);
    } else if (t.starts_with("B=")) {
      b_kind = t.substr(2);
    } else {
      throw UsageError("--transfer takes A=KIND and B=KIND");
    }
  }
  require_depth(o.refine_depth, "refinement");
  const Measure& mu = test.test.base;
  const bool fair = mu.iid_probability() == Rational(1, 2);
  const BaseMeasure base = fair ? BaseMeasure::lebesgue() : BaseMeasure::binary(mu);
  const CellDecomposition a = CellDecomposition::parse(a_kind, base);
  const CellDecomposition b = CellDecomposition::parse(b_kind, base);
  if (!equal_to_depth(pushforward(a), mu, std::min<std::size_t>(o.refine_depth, 10))) {
    throw UsageError("the test's base measure is not the pushforward of " + a.describe() + " on " + base.describe());
  }
  const RefinementRelation rel = refine(a, b, o.refine_depth, o.target_depth);
  const std::vector<KappaBounds> kappa = transfer_measure(rel, test.bound);
  Json rows = Json::array();
  for (std::size_t i = 0; i < rel.entries.size(); ++i) {
    const RefinementEntry& e = rel.entries[i];
    Json row;
    row["target"] = name_text(e.target);
    row["sources"] = e.sources.size();
    row["covered"] = rational_json(e.covered);
    row["residual"] = rational_json(e.residual);
    row["kappa_low"] = rational_json(kappa[i].low);
    row["kappa_high"] = rational_json(kappa[i].high);
    rows.push_back(std::move(row));
  }
  Json t;
  t["a"] = a.describe();
  t["b"] = b.describe();
  t["base"] = base.describe();
  t["depth"] = o.refine_depth;
  t["target_depth"] = o.target_depth;
  t["kappa"] = std::move(rows);
  report.results()["transfer"] = std::move(t);
  report.add_check(check_transfer_bound(rel, test));
}

int cmd_convert(const ConvertOptions& o, const std::vector<std::string>& argv) {
  RunReport report("convert", argv);
  require_depth(o.depth, "conversion");
  Stage current;
  if (!o.martingale.empty() == !o.test.empty()) throw UsageError("convert needs exactly one of --martingale, --test");
  if (!o.martingale.empty()) {
    current.kind = "martingale";
    current.martingale = parse_martingale(o.martingale);
    report.add_digest("input", martingale_json(*current.martingale, std::min<std::size_t>(o.depth, 8)));
  } else {
    const Json j = parse_json(read_text_file(o.test));
    report.add_digest("input", j);
    TestBundle b = test_bundle_from_json(j);
    current.kind = b.kind;
    current.martingale = std::move(b.martingale);
    current.bounded_ml = std::move(b.bounded_ml);
    current.vitali = std::move(b.vitali);
    current.integral = std::move(b.integral);
    if (b.kind == "ml") {
      throw UsageError("a plain ml test carries no bounding measure; no conversion path leaves it (the chain is " +
                       std::string(kChain) + ")");
    }
  }
  for (const std::string& stop : o.to) {
    if (std::find(kStages.begin(), kStages.end(), stop) == kStages.end()) {
      throw UsageError("unknown target '" + stop + "'; the chain is " + kChain);
    }
  }
  if (o.to.empty()) throw UsageError("convert needs --to");

  std::vector<std::string> taken{current.kind};
  std::optional<BoundedMLTest> last_bounded = current.bounded_ml;
  verify_stage(current, o.depth, report);
  for (const std::string& stop : o.to) {
    const std::vector<std::string> path = stop == current.kind ? std::vector<std::string>{} : shortest_path(current.kind, stop);
    for (const std::string& kind : path) {
      current = advance(current, kind, o.depth);
      taken.push_back(kind);
      verify_stage(current, o.depth, report);
      if (current.bounded_ml) last_bounded = current.bounded_ml;
      if (current.vitali) {
        report.results()["vitali_pieces"] = current.vitali->pieces.size();
      }
    }
  }
  report.results()["path"] = taken;
  if (current.bounded_ml) report.results()["levels"] = current.bounded_ml->test.levels.size();
  if (!o.transfer.empty()) {
    if (!last_bounded) throw UsageError("--transfer needs a bounded_ml stage on the conversion path");
    transfer_report(*last_bounded, o, report);
  }
  const Json output = stage_json(current, o.depth);
  if (o.out.empty()) {
    report.results()["output"] = output;
  } else {
    emit(o.out, output.dump(2) + "\n");
    report.add_digest("output", output);
  }
  emit(o.report, report.render());
  return report.all_pass() ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------
// bet

struct BetOptions {
  std::string strategy;
  std::string measure = "fair";
  std::string source;
  std::optional<std::size_t> length;
  std::string trace;
  std::string report;
};

BettingStrategy parse_strategy(const std::string& text, const Measure& mu, std::size_t length) {
  if (text.starts_with("doubling:")) {
    return doubling_strategy(CylinderSet::parse(read_text_file(text.substr(9))), mu);
  }
  if (text.starts_with("bit_all_in:")) return bit_all_in(BitString::parse(text.substr(11)));
  if (text.starts_with("likelihood_ratio:")) return likelihood_ratio(parse_measure(text.substr(17)), mu, length);
  if (text.starts_with("zero_stake:")) return zero_stake(std::stoul(text.substr(11)));
  if (text == "zero_stake") return zero_stake(length);
  if (text == "zero_bet") return zero_bet();
  if (text.starts_with("table:")) return parse_decision_table(read_text_file(text.substr(6)));
  throw ParseError("unknown strategy '" + text +
                       "' (doubling:FILE, bit_all_in:BITS, likelihood_ratio:MEASURE, zero_stake[:N], zero_bet, "
                       "table:FILE)",
                   1, 1);
}

int cmd_bet(const BetOptions& o, const std::vector<std::string>& argv) {
  RunReport report("bet", argv);
  const BitSourceSpec source = BitSourceSpec::parse(o.source);
  std::size_t length = 0;
  if (o.length) {
    length = *o.length;
  } else if (const auto available = source.available()) {
    length = *available;
  } else {
    throw UsageError("--length is required for the unbounded source " + source.describe());
  }
  const Measure mu = parse_measure(o.measure);
  const BettingStrategy strategy = parse_strategy(o.strategy.empty() ? "zero_stake" : o.strategy, mu, length);
  const BitString x = generate(source, length);
  report.add_digest("measure", measure_json(mu, 8));
  report.add_digest("bits", Json(x.str()));

  const PlayResult result = play(strategy, mu, x);
  std::ostringstream csv;
  csv << "step,prefix,capital_num,capital_den,event,won\n";
  csv << "0,," << strategy.start_capital.get_num().get_str() << ',' << strategy.start_capital.get_den().get_str()
      << ",,\n";
  BitString history;
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const PlayStep& step = result.steps[i];
    history.push_back(step.won);
    csv << i + 1 << ',' << history.str() << ',' << step.capital.get_num().get_str() << ','
        << step.capital.get_den().get_str() << ",\"" << step.event << "\"," << (step.won ? 1 : 0) << '\n';
  }
  const Rational final_capital = result.trace.values.back();
  const bool nullity = result.halt == HaltReason::null_knowledge;
  std::string growth = "-inf";
  if (final_capital > 0 && length > 0) {
    growth = approx((log2_approx(final_capital) - log2_approx(strategy.start_capital)) / static_cast<double>(length));
  }
  std::ostringstream summary;
  summary << "# summary: strategy=" << strategy.label << " source=" << source.describe() << " length=" << length
          << " bits=" << (x.size() <= 64 ? x.str() : x.prefix(64).str() + "...") << " steps=" << result.steps.size()
          << " max_capital=" << short_rational(result.trace.max_attained)
          << " final_capital=" << short_rational(final_capital)
          << " growth_per_bit=" << growth << " null=" << (nullity ? "true" : "false")
          << " halt=" << to_string(result.halt) << '\n';
  if (o.trace.empty() || o.trace == "-") {
    std::cout << csv.str() << summary.str() << std::flush;
  } else {
    emit(o.trace, csv.str());
    std::cout << summary.str() << std::flush;
  }

  Json& r = report.results();
  r["strategy"] = strategy.label;
  r["source"] = source.describe();
  r["length"] = length;
  r["steps"] = result.steps.size();
  r["max_capital"] = rational_json(result.trace.max_attained);
  r["final_capital"] = rational_json(final_capital);
  r["growth_per_bit"] = growth;
  r["null"] = nullity;
  r["halt"] = to_string(result.halt);
  const bool ok = result.halt != HaltReason::violation;
  Json detail;
  if (!ok) detail["message"] = result.message;
  report.add_check("strategy_invariants", ok, detail);
  if (!o.report.empty()) emit(o.report, report.render());
  if (!ok) std::cerr << "strategy violation: " << result.message << '\n';
  return ok ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------
// deficiency

struct DeficiencyOptions {
  std::string machine;
  std::string requests;
  std::string cells = "binary";
  std::string base = "lebesgue";
  std::string point;
  std::string name;
  std::size_t n = 8;
  std::string policy = "strict";
  std::string out;
};

std::string bound_text(const std::optional<long>& v) { return v ? std::to_string(*v) : "-inf"; }

int cmd_deficiency(const DeficiencyOptions& o) {
  if (!o.machine.empty() == !o.requests.empty()) throw UsageError("deficiency needs exactly one of --machine, --requests");
  const PrefixFreeMachine m = o.machine.empty() ? kc_build(RequestSet::parse(read_text_file(o.requests)))
                                                : PrefixFreeMachine::parse(read_text_file(o.machine));
  const CellDecomposition dec = parse_cells(o.cells, o.base);
  DeficiencyTrace trace;
  if (!o.name.empty()) {
    trace = deficiency_trace(m, dec, BitString::parse(o.name));
  } else if (!o.point.empty()) {
    trace = deficiency_trace(m, dec, parse_point(o.point), o.n, parse_policy(o.policy));
  } else {
    throw UsageError("deficiency needs --point or --name");
  }
  if (trace.undetermined_depth) {
    std::cerr << "point is undetermined: it lies on a cell boundary at depth " << *trace.undetermined_depth << '\n';
    return kUsage;
  }
  std::ostringstream csv;
  csv << "n,neg_log_mass_low,neg_log_mass_high,K,d_low,d_high\n";
  for (const DeficiencyRow& row : trace.rows) {
    csv << row.n << ',';
    if (row.mass == 0) {
      csv << "inf,inf," << (row.k ? std::to_string(*row.k) : "inf") << ",inf,inf\n";
      continue;
    }
    csv << row.neg_log_mass.low << ',' << row.neg_log_mass.high << ',' << (row.k ? std::to_string(*row.k) : "inf")
        << ',' << bound_text(row.d_low) << ',' << bound_text(row.d_high) << '\n';
  }
  emit(o.out, csv.str());
  if (trace.null_cell) {
    std::cerr << "non-random-by-nullity: the cell of depth " << trace.null_depth << " has measure 0\n";
    return kCheckFailed;
  }
  return kPass;
}

// ---------------------------------------------------------------------------
// name

struct NameOptions {
  std::string cells = "binary";
  std::string base = "lebesgue";
  std::string point;
  std::size_t n = 8;
  std::string policy = "strict";
};

int cmd_name(const NameOptions& o) {
  const CellDecomposition dec = parse_cells(o.cells, o.base);
  const std::vector<Rational> point = parse_point(o.point);
  if (point.size() != dec.dim()) throw UsageError("the point has the wrong dimension for " + dec.describe());
  const NameResult r = name_of(dec, point, o.n, parse_policy(o.policy));
  if (!r.name) {
    std::cout << "undetermined boundary_depth=" << r.boundary_depth << '\n';
    std::cerr << "point lies on a cell boundary at depth " << r.boundary_depth << '\n';
    return kUsage;
  }
  std::ostringstream cell;
  for (const Interval& side : dec.cell(*r.name).sides) {
    cell << (cell.tellp() > 0 ? " * " : "") << '[' << to_string(side.lo) << ", " << to_string(side.hi) << ')';
  }
  std::cout << r.name->str() << " cell=" << cell.str() << " mass=" << to_string(dec.cell_mass(*r.name)) << '\n';
  return kPass;
}

// ---------------------------------------------------------------------------
// refine

struct RefineOptions {
  std::string a = "binary";
  std::string b = "ternary";
  std::string base = "lebesgue";
  std::size_t depth = 12;
  std::size_t target_depth = 4;
  std::string nu;
  std::string max_residual;
  std::string out;
};

int cmd_refine(const RefineOptions& o, const std::vector<std::string>& argv) {
  RunReport report("refine", argv);
  require_depth(o.depth, "refinement");
  const BaseMeasure base = parse_base(o.base, 1);
  const CellDecomposition a = CellDecomposition::parse(o.a, base);
  const CellDecomposition b = CellDecomposition::parse(o.b, base);
  const RefinementRelation rel = refine(a, b, o.depth, o.target_depth);
  std::optional<std::vector<KappaBounds>> kappa;
  if (!o.nu.empty()) kappa = transfer_measure(rel, parse_measure(o.nu));
  Json rows = Json::array();
  Rational worst = 0;
  for (std::size_t i = 0; i < rel.entries.size(); ++i) {
    const RefinementEntry& e = rel.entries[i];
    Json row;
    row["target"] = name_text(e.target);
    Json sources = Json::array();
    for (const BitString& s : e.sources) sources.push_back(name_text(s));
    row["sources"] = std::move(sources);
    row["boundary"] = e.boundary.size();
    row["target_mass"] = rational_json(e.target_mass);
    row["covered"] = rational_json(e.covered);
    row["residual"] = rational_json(e.residual);
    if (kappa) {
      row["kappa_low"] = rational_json((*kappa)[i].low);
      row["kappa_high"] = rational_json((*kappa)[i].high);
    }
    worst = std::max(worst, e.residual);
    rows.push_back(std::move(row));
  }
  report.results()["a"] = a.describe();
  report.results()["b"] = b.describe();
  report.results()["base"] = base.describe();
  report.results()["max_residual"] = rational_json(worst);
  report.results()["entries"] = std::move(rows);
  if (!o.max_residual.empty()) {
    const Rational cap = parse_rational(o.max_residual);
    Json detail;
    detail["max_residual"] = rational_json(worst);
    detail["allowed"] = rational_json(cap);
    report.add_check("residual", worst <= cap, detail);
  }
  emit(o.out, report.render());
  return report.all_pass() ? kPass : kCheckFailed;
}

}  // namespace
}  // namespace randlab::cli

int main(int argc, char** argv) {
  using namespace randlab;
  using namespace randlab::cli;
  std::vector<std::string> args(argv + 1, argv + argc);

  CLI::App app{"randlab: exact finite-depth computable randomness"};
  app.require_subcommand(1);

  AuditOptions audit;
  CLI::App* audit_cmd = app.add_subcommand("audit", "additivity, fairness, savings, Ville and test-bound audits");
  audit_cmd->add_option("--measure", audit.measure, "fair | bernoulli:P | file:PATH | inline JSON");
  audit_cmd->add_option("--martingale", audit.martingale, "quotient:NU/MU | all_in:B | identity | battery:NAME | file:PATH");
  audit_cmd->add_option("--test", audit.test, "serialized test (JSON)");
  audit_cmd->add_option("--check", audit.checks, "additivity | fairness | savings | roundtrip | ville | bounds");
  audit_cmd->add_option("--depth", audit.depth, "exhaustive depth")->capture_default_str();
  audit_cmd->add_option("--n", audit.n, "Ville horizon")->capture_default_str();
  audit_cmd->add_option("--c", audit.c, "Ville thresholds")->capture_default_str();
  audit_cmd->add_option("--samples", audit.samples, "Monte Carlo Ville with this many seeded paths (statistical)");
  audit_cmd->add_option("--seed", audit.seed, "seed for --samples")->capture_default_str();
  audit_cmd->add_option("--run", audit.run, "emit the capital trace along these bits");
  audit_cmd->add_option("--trace", audit.trace, "CSV path for --run (default stdout)");
  audit_cmd->add_option("--out", audit.out, "report path (default stdout)");

  ConvertOptions convert;
  CLI::App* convert_cmd = app.add_subcommand("convert", "walk the test conversion chain");
  convert_cmd->add_option("--martingale", convert.martingale, "input martingale spec");
  convert_cmd->add_option("--test", convert.test, "input test file (JSON)");
  convert_cmd->add_option("--to", convert.to, "target kind(s), visited in order")->delimiter(',');
  convert_cmd->add_option("--depth", convert.depth, "cell depth of the step functions and the checks")->capture_default_str();
  convert_cmd->add_option("--transfer", convert.transfer, "A=KIND B=KIND: κ bounds for the bounded_ml stage")->expected(1, 2);
  convert_cmd->add_option("--refine-depth", convert.refine_depth, "A-cell depth for --transfer")->capture_default_str();
  convert_cmd->add_option("--target-depth", convert.target_depth, "B-cell depth for --transfer")->capture_default_str();
  convert_cmd->add_option("--out", convert.out, "write the converted test here instead of into the report");
  convert_cmd->add_option("--report", convert.report, "report path (default stdout)");

  BetOptions bet;
  CLI::App* bet_cmd = app.add_subcommand("bet", "play a strategy against a bit stream");
  bet_cmd->add_option("--strategy", bet.strategy,
                      "doubling:FILE | bit_all_in:BITS | likelihood_ratio:MEASURE | zero_stake[:N] | zero_bet | table:FILE");
  bet_cmd->add_option("--measure", bet.measure, "measure the bets are fair against")->capture_default_str();
  bet_cmd->add_option("--source", bet.source, "prng:SEED | bernoulli:P,seed=S | champernowne | file:PATH | literal:BITS")
      ->required();
  bet_cmd->add_option("--length", bet.length, "bits to draw (default: all of a finite source)");
  bet_cmd->add_option("--trace", bet.trace, "CSV path (default stdout)");
  bet_cmd->add_option("--report", bet.report, "JSON report path");

  DeficiencyOptions def;
  CLI::App* def_cmd = app.add_subcommand("deficiency", "randomness deficiency along the name of a point");
  def_cmd->add_option("--machine", def.machine, "machine table file");
  def_cmd->add_option("--requests", def.requests, "request set file (built with Kraft-Chaitin)");
  def_cmd->add_option("--cells", def.cells, "binary | ternary | bary:B | interleave:D")->capture_default_str();
  def_cmd->add_option("--base", def.base, "lebesgue or a measure pushed onto binary cells")->capture_default_str();
  def_cmd->add_option("--point", def.point, "x or x1,x2,... as rationals");
  def_cmd->add_option("--name", def.name, "the name directly");
  def_cmd->add_option("--n", def.n, "name length for --point")->capture_default_str();
  def_cmd->add_option("--policy", def.policy, "strict | half_open")->capture_default_str();
  def_cmd->add_option("--out", def.out, "CSV path (default stdout)");

  NameOptions name;
  CLI::App* name_cmd = app.add_subcommand("name", "the binary name of a point");
  name_cmd->add_option("--cells", name.cells, "binary | ternary | bary:B | interleave:D")->capture_default_str();
  name_cmd->add_option("--base", name.base, "lebesgue or a measure pushed onto binary cells")->capture_default_str();
  name_cmd->add_option("--point", name.point, "x or x1,x2,... as rationals")->required();
  name_cmd->add_option("--n", name.n, "name length")->capture_default_str();
  name_cmd->add_option("--policy", name.policy, "strict | half_open")->capture_default_str();

  RefineOptions refine_opts;
  CLI::App* refine_cmd = app.add_subcommand("refine", "cover B-cells by A-cells");
  refine_cmd->add_option("--a", refine_opts.a, "source decomposition")->capture_default_str();
  refine_cmd->add_option("--b", refine_opts.b, "target decomposition")->capture_default_str();
  refine_cmd->add_option("--base", refine_opts.base, "lebesgue or a measure pushed onto binary cells")->capture_default_str();
  refine_cmd->add_option("--depth", refine_opts.depth, "A-cell depth")->capture_default_str();
  refine_cmd->add_option("--target-depth", refine_opts.target_depth, "B-cell depth")->capture_default_str();
  refine_cmd->add_option("--nu", refine_opts.nu, "measure on A-names to transfer");
  refine_cmd->add_option("--max-residual", refine_opts.max_residual, "fail if some residual exceeds this");
  refine_cmd->add_option("--out", refine_opts.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*audit_cmd) return cmd_audit(audit, args);
    if (*convert_cmd) return cmd_convert(convert, args);
    if (*bet_cmd) return cmd_bet(bet, args);
    if (*def_cmd) return cmd_deficiency(def);
    if (*name_cmd) return cmd_name(name);
    if (*refine_cmd) return cmd_refine(refine_opts, args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kUsage;
  } catch (const ConstructionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
