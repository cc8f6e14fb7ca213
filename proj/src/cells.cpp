#include "randlab/cells.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "randlab/errors.hpp"

namespace randlab {

bool Box::empty() const {
  return std::any_of(sides.begin(), sides.end(), [](const Interval& i) { return i.empty(); });
}

bool Box::contains(const std::vector<Rational>& point) const {
  if (point.size() != sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (point[i] < sides[i].lo || point[i] >= sides[i].hi) return false;
  }
  return true;
}

bool Box::touches(const std::vector<Rational>& point) const {
  if (point.size() != sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (point[i] < sides[i].lo || point[i] > sides[i].hi) return false;
  }
  return true;
}

Box Box::intersect(const Box& other) const {
  Box out;
  out.sides.reserve(sides.size());
  for (std::size_t i = 0; i < sides.size(); ++i) {
    out.sides.push_back({std::max(sides[i].lo, other.sides[i].lo), std::min(sides[i].hi, other.sides[i].hi)});
  }
  return out;
}

// ---------------------------------------------------------------------------

Region::Region(std::size_t dim, std::vector<Box> boxes) : dim_(dim) {
  for (auto& box : boxes) {
    if (box.dim() != dim) throw ConstructionError("box of dimension " + std::to_string(box.dim()) + " in a region of dimension " + std::to_string(dim));
    for (const auto& side : box.sides) {
      if (side.lo < 0 || side.hi > 1) {
        throw ConstructionError("interval [" + randlab::to_string(side.lo) + ", " + randlab::to_string(side.hi) +
                                ") leaves [0,1]");
      }
    }
    if (!box.empty()) boxes_.push_back(std::move(box));
  }
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    for (std::size_t k = i + 1; k < boxes_.size(); ++k) {
      if (!boxes_[i].intersect(boxes_[k]).empty()) throw ConstructionError("region boxes overlap");
    }
  }
  if (dim == 1) {
    std::sort(boxes_.begin(), boxes_.end(),
              [](const Box& x, const Box& y) { return x.sides[0].lo < y.sides[0].lo; });
    std::vector<Box> merged;
    for (auto& box : boxes_) {
      if (!merged.empty() && merged.back().sides[0].hi == box.sides[0].lo) {
        merged.back().sides[0].hi = box.sides[0].hi;
      } else {
        merged.push_back(std::move(box));
      }
    }
    boxes_ = std::move(merged);
  }
}

Region Region::interval(const Rational& lo, const Rational& hi) { return Region(1, {Box{{Interval{lo, hi}}}}); }

Region Region::whole(std::size_t dim) {
  Box box;
  box.sides.assign(dim, Interval{Rational(0), Rational(1)});
  return Region(dim, {box});
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// 1-based line and column of byte offset `pos`.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t pos) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Region Region::parse(std::string_view text, std::size_t dim) {
  std::vector<Box> boxes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(";\n", pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view chunk = text.substr(pos, end - pos);
    const std::size_t chunk_start = pos;
    pos = end + 1;
    if (trim(chunk).empty() || trim(chunk).front() == '#') continue;
    Box box;
    std::size_t p = 0;
    while (p <= chunk.size()) {
      std::size_t q = chunk.find('*', p);
      if (q == std::string_view::npos) q = chunk.size();
      const std::string_view pair = chunk.substr(p, q - p);
      const auto comma = pair.find(',');
      const auto [line, col] = locate(text, chunk_start + p);
      if (comma == std::string_view::npos) throw ParseError("expected 'lo,hi'", line, col);
      try {
        box.sides.push_back({parse_rational(trim(pair.substr(0, comma))), parse_rational(trim(pair.substr(comma + 1)))});
      } catch (const ParseError& e) {
        throw ParseError(std::string("bad endpoint: ") + e.what(), line, col);
      }
      p = q + 1;
    }
    if (box.dim() != dim) {
      const auto [line, col] = locate(text, chunk_start);
      throw ParseError("box has " + std::to_string(box.dim()) + " sides, expected " + std::to_string(dim), line, col);
    }
    boxes.push_back(std::move(box));
  }
  try {
    return Region(dim, std::move(boxes));
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
}

std::string Region::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    if (i > 0) os << "; ";
    for (std::size_t k = 0; k < boxes_[i].sides.size(); ++k) {
      if (k > 0) os << " * ";
      os << randlab::to_string(boxes_[i].sides[k].lo) << ',' << randlab::to_string(boxes_[i].sides[k].hi);
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// mu of the dyadic interval [lo, hi) ∩ [l, r), where [l, r) is the cell of s.
Rational dyadic_mass(const Measure& mu, const Rational& lo, const Rational& hi, const BitString& s, const Rational& l,
                     const Rational& r) {
  if (hi <= l || r <= lo) return 0;
  if (lo <= l && r <= hi) return mu.mass(s);
  const Rational mid = (l + r) / 2;
  return dyadic_mass(mu, lo, hi, s.child(false), l, mid) + dyadic_mass(mu, lo, hi, s.child(true), mid, r);
}

}  // namespace

BaseMeasure BaseMeasure::lebesgue(std::size_t dim) {
  if (dim == 0) throw ConstructionError("dimension must be positive");
  BaseMeasure b;
  b.dim_ = dim;
  return b;
}

BaseMeasure BaseMeasure::binary(Measure mu) {
  BaseMeasure b;
  b.binary_ = std::move(mu);
  return b;
}

Rational BaseMeasure::mass(const Box& box) const {
  if (box.dim() != dim_) throw PreconditionError("box dimension differs from the base measure");
  if (box.empty()) return 0;
  if (!binary_) {
    Rational m = 1;
    for (const auto& side : box.sides) m *= side.length();
    return m;
  }
  const Interval& i = box.sides[0];
  if (!is_dyadic(i.lo) || !is_dyadic(i.hi)) {
    throw PreconditionError("a binary push measure only evaluates dyadic intervals, got [" + to_string(i.lo) + ", " +
                            to_string(i.hi) + ")");
  }
  return dyadic_mass(*binary_, i.lo, i.hi, BitString{}, Rational(0), Rational(1));
}

Rational BaseMeasure::mass(const Region& region) const {
  Rational m = 0;
  for (const auto& box : region.boxes()) m += mass(box);
  return m;
}

Rational BaseMeasure::mass_within(const Box& box, const Region& region) const {
  Rational m = 0;
  for (const auto& other : region.boxes()) {
    const Box cut = box.intersect(other);
    if (!cut.empty()) m += mass(cut);
  }
  return m;
}

std::string BaseMeasure::describe() const {
  if (binary_) return "push(" + binary_->describe() + ")";
  return dim_ == 1 ? "lebesgue" : "lebesgue^" + std::to_string(dim_);
}

// ---------------------------------------------------------------------------

CellDecomposition::CellDecomposition(Kind kind, unsigned radix, BaseMeasure base)
    : kind_(kind), radix_(radix), base_(std::move(base)) {}

CellDecomposition CellDecomposition::binary_digits(BaseMeasure base) {
  if (base.dim() != 1) throw ConstructionError("binary digits need a one-dimensional base");
  return CellDecomposition(Kind::binary_digits, 2, std::move(base));
}

CellDecomposition CellDecomposition::bary_grouped(unsigned b, BaseMeasure base) {
  if (b < 2) throw ConstructionError("b-ary grouping needs b >= 2");
  if (base.dim() != 1) throw ConstructionError("b-ary grouping needs a one-dimensional base");
  return CellDecomposition(Kind::bary_grouped, b, std::move(base));
}

CellDecomposition CellDecomposition::interleave(std::size_t d) {
  if (d == 0) throw ConstructionError("interleave needs d >= 1");
  return CellDecomposition(Kind::interleave, 2, BaseMeasure::lebesgue(d));
}

CellDecomposition CellDecomposition::parse(std::string_view kind, BaseMeasure base) {
  auto number = [&](std::string_view digits) {
    unsigned long v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || v > 1024) {
      throw ParseError("bad decomposition parameter '" + std::string(digits) + "'", 1, kind.size() - digits.size() + 1);
    }
    return v;
  };
  try {
    if (kind == "binary" || kind == "binary_digits") return binary_digits(std::move(base));
    if (kind == "ternary") return bary_grouped(3, std::move(base));
    if (kind.starts_with("bary:")) return bary_grouped(static_cast<unsigned>(number(kind.substr(5))), std::move(base));
    if (kind.starts_with("interleave:")) return interleave(number(kind.substr(11)));
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown decomposition '" + std::string(kind) + "' (binary, ternary, bary:B, interleave:D)", 1, 1);
}

std::string CellDecomposition::describe() const {
  switch (kind_) {
    case Kind::binary_digits:
      return "binary_digits";
    case Kind::bary_grouped:
      return "bary_grouped(" + std::to_string(radix_) + ")";
    case Kind::interleave:
      return "interleave(" + std::to_string(dim()) + ")";
  }
  return "?";
}

CellDecomposition::Node CellDecomposition::root() const {
  Node node;
  node.box.sides.assign(dim(), Interval{Rational(0), Rational(1)});
  node.a = 0;
  node.w = 1;
  return node;
}

CellDecomposition::Node CellDecomposition::child(const Node& node, bool bit) const {
  Node next = node;
  ++next.depth;
  switch (kind_) {
    case Kind::binary_digits:
    case Kind::interleave: {
      Interval& side = next.box.sides[node.depth % dim()];
      const Rational mid = (side.lo + side.hi) / 2;
      (bit ? side.lo : side.hi) = mid;
      break;
    }
    case Kind::bary_grouped: {
      const Rational step = node.w / radix_;
      if (!bit) {
        next.a = node.a + node.j * step;
        next.w = step;
        next.j = 0;
      } else if (node.j + 1 == radix_ - 1) {
        next.a = node.a + (radix_ - 1) * step;
        next.w = step;
        next.j = 0;
      } else {
        next.j = node.j + 1;
      }
      next.box.sides[0] = {next.a + next.j * (next.w / radix_), next.a + next.w};
      break;
    }
  }
  return next;
}

Box CellDecomposition::cell(const BitString& s) const {
  Node node = root();
  for (std::size_t i = 0; i < s.size(); ++i) node = child(node, s[i]);
  return node.box;
}

Rational CellDecomposition::cell_mass(const BitString& s) const {
  if (kind_ == Kind::binary_digits && base_.binary_measure()) return base_.binary_measure()->mass(s);
  return base_.mass(cell(s));
}

// ---------------------------------------------------------------------------

NameResult name_of(const CellDecomposition& dec, const std::vector<Rational>& point, std::size_t n,
                   BoundaryPolicy policy) {
  if (point.size() != dec.dim()) throw PreconditionError("point dimension differs from the decomposition");
  for (const auto& c : point) {
    if (c < 0 || c >= 1) throw PreconditionError("point coordinate " + to_string(c) + " outside [0,1)");
  }
  NameResult result;
  BitString name;
  auto node = dec.root();
  for (std::size_t k = 0; k < n; ++k) {
    auto zero = dec.child(node, false);
    auto one = dec.child(node, true);
    if (policy == BoundaryPolicy::strict && zero.box.touches(point) && one.box.touches(point)) {
      result.boundary_depth = k + 1;
      return result;
    }
    const bool bit = !zero.box.contains(point);
    name.push_back(bit);
    node = bit ? std::move(one) : std::move(zero);
  }
  result.name = std::move(name);
  return result;
}

NameResult name_of(const CellDecomposition& dec, const Rational& x, std::size_t n, BoundaryPolicy policy) {
  return name_of(dec, std::vector<Rational>{x}, n, policy);
}

namespace {

void decompose_walk(const CellDecomposition& dec, const Region& u, std::size_t depth,
                    const CellDecomposition::Node& node, BitString& s, OpenDecomposition& out) {
  const Rational m = dec.cell_mass(s);
  if (m == 0) return;
  const Rational inside = dec.base().mass_within(node.box, u);
  if (inside == 0) return;
  if (inside == m) {
    out.cells.push_back(s);
    out.covered += m;
    return;
  }
  if (s.size() == depth) {
    out.boundary.push_back(s);
    return;
  }
  for (bool bit : {false, true}) {
    s.push_back(bit);
    decompose_walk(dec, u, depth, dec.child(node, bit), s, out);
    s.pop_back();
  }
}

}  // namespace

OpenDecomposition decompose_open(const CellDecomposition& dec, const Region& u, std::size_t depth) {
  if (u.dim() != dec.dim()) throw PreconditionError("region dimension differs from the decomposition");
  OpenDecomposition out;
  out.covered = 0;
  BitString s;
  decompose_walk(dec, u, depth, dec.root(), s, out);
  out.residual = dec.base().mass(u) - out.covered;
  return out;
}

Measure pushforward(const CellDecomposition& dec) {
  if (dec.kind() == CellDecomposition::Kind::binary_digits && dec.base().binary_measure()) {
    return *dec.base().binary_measure();
  }
  return Measure::from_masses("push(" + dec.describe() + ", " + dec.base().describe() + ")",
                              [dec](const BitString& s) { return dec.cell_mass(s); });
}

// ---------------------------------------------------------------------------

const RefinementEntry& RefinementRelation::entry(const BitString& target) const {
  if (target.size() > target_depth) throw PreconditionError("target deeper than the refinement");
  return entries.at((std::size_t{1} << target.size()) - 1 + target.index());
}

RefinementRelation refine(const CellDecomposition& a, const CellDecomposition& b, std::size_t depth,
                          std::size_t target_depth) {
  if (a.dim() != b.dim() || a.base().describe() != b.base().describe()) {
    throw PreconditionError("refine needs a common base measure: " + a.base().describe() + " vs " +
                            b.base().describe());
  }
  RefinementRelation rel;
  rel.depth = depth;
  rel.target_depth = target_depth;
  for_each_string_upto(target_depth, [&](const BitString& tau) {
    const Region target = b.cell_region(tau);
    auto cover = decompose_open(a, target, depth);
    RefinementEntry e;
    e.target = tau;
    e.sources = std::move(cover.cells);
    e.boundary = std::move(cover.boundary);
    e.target_mass = b.cell_mass(tau);
    e.covered = cover.covered;
    e.residual = cover.residual;
    rel.entries.push_back(std::move(e));
  });
  return rel;
}

std::vector<KappaBounds> transfer_measure(const RefinementRelation& rel, const Measure& nu) {
  std::vector<KappaBounds> out;
  out.reserve(rel.entries.size());
  for (const auto& e : rel.entries) {
    KappaBounds k;
    k.target = e.target;
    k.low = 0;
    for (const auto& s : e.sources) k.low += nu.mass(s);
    k.high = k.low;
    for (const auto& s : e.boundary) k.high += nu.mass(s);
    out.push_back(std::move(k));
  }
  return out;
}

AuditReport check_transfer_bound(const RefinementRelation& rel, const BoundedMLTest& test) {
  AuditReport report;
  report.check = "transfer_bound";
  report.depth = rel.depth;
  const auto kappa = transfer_measure(rel, test.bound);
  for (std::size_t k = 0; k < test.test.levels.size(); ++k) {
    const long n = static_cast<long>(k + 1);
    const CylinderMassIndex index(test.test.levels[k], test.test.base);
    for (std::size_t i = 0; i < rel.entries.size(); ++i) {
      ++report.nodes_checked;
      Rational lhs = 0;
      for (const auto& s : rel.entries[i].sources) lhs += index.within(s);
      const Rational rhs = pow2(-n) * kappa[i].high;
      if (lhs > rhs) {
        report.add_violation(rel.entries[i].target, "mu(U_" + std::to_string(n) + " ∩ covered) = " + to_string(lhs) +
                                                        " > 2^-" + std::to_string(n) + "·kappa_high = " + to_string(rhs));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

BitString bary_name(unsigned b, const std::vector<unsigned>& digits) {
  BitString s;
  for (unsigned d : digits) {
    if (d >= b) throw PreconditionError("digit " + std::to_string(d) + " out of range for base " + std::to_string(b));
    for (unsigned i = 0; i < d; ++i) s.push_back(true);
    if (d < b - 1) s.push_back(false);
  }
  return s;
}

namespace {

// Digits of the completed positions of s, plus the count of ones into the
// current, unfinished position.
std::pair<std::vector<unsigned>, unsigned> split_name(unsigned b, const BitString& s) {
  std::vector<unsigned> digits;
  unsigned j = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]) {
      digits.push_back(j);
      j = 0;
    } else if (++j == b - 1) {
      digits.push_back(j);
      j = 0;
    }
  }
  return {std::move(digits), j};
}

}  // namespace

std::optional<std::vector<unsigned>> bary_digits(unsigned b, const BitString& s) {
  auto [digits, pending] = split_name(b, s);
  if (pending != 0) return std::nullopt;
  return digits;
}

Martingale grouped_martingale(unsigned b, Measure names, DigitCapital capital, DigitMass mass) {
  const std::string label = "grouped(" + std::to_string(b) + ")";
  return Martingale::from_function(
      std::move(names), label, [b, capital, mass](const BitString& s) -> std::optional<Rational> {
        auto [digits, k] = split_name(b, s);
        if (k == 0) {
          if (mass(digits) == 0) return std::nullopt;
          return capital(digits);
        }
        Rational weight = 0;
        Rational weighted = 0;
        for (unsigned j = k; j < b; ++j) {
          auto next = digits;
          next.push_back(j);
          const Rational m = mass(next);
          if (m == 0) continue;
          const auto c = capital(next);
          if (!c) throw PreconditionError("digit martingale undefined on a positive cylinder");
          weight += m;
          weighted += *c * m;
        }
        if (weight == 0) return std::nullopt;
        return weighted / weight;
      });
}

AuditReport check_grouping(const Martingale& m, unsigned b, std::size_t depth) {
  AuditReport report;
  report.check = "grouping";
  report.depth = depth;
  const Measure& mu = m.base();
  auto weighted = [&](const BitString& s) -> std::optional<Rational> {
    const Rational ms = mu.mass(s);
    if (ms == 0) return Rational(0);
    const auto c = m.capital(s);
    if (!c) return std::nullopt;
    return *c * ms;
  };
  // Walk full-digit nodes.
  std::vector<BitString> stack{BitString{}};
  while (!stack.empty()) {
    const BitString sigma = stack.back();
    stack.pop_back();
    if (sigma.size() >= depth) continue;
    std::vector<BitString> children;
    for (unsigned j = 0; j < b; ++j) children.push_back(sigma.concat(bary_name(b, {j})));
    for (unsigned k = 0; k + 1 < b; ++k) {
      BitString group = sigma;
      for (unsigned i = 0; i < k; ++i) group.push_back(true);
      bool in_range = true;
      for (unsigned j = k; j < b; ++j) in_range = in_range && children[j].size() <= depth;
      if (!in_range) continue;
      ++report.nodes_checked;
      const auto lhs = weighted(group);
      Rational rhs = 0;
      bool defined = lhs.has_value();
      for (unsigned j = k; j < b && defined; ++j) {
        const auto w = weighted(children[j]);
        if (!w) defined = false;
        else rhs += *w;
      }
      if (!defined) {
        report.add_violation(group, "capital undefined on a positive cylinder");
      } else if (*lhs != rhs) {
        report.add_violation(group, "M(A)mu(A) = " + to_string(*lhs) + " but the digit average gives " + to_string(rhs));
      }
    }
    for (auto& c : children) {
      if (c.size() < depth) stack.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace randlab
