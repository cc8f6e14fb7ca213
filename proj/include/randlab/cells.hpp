#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randlab/audit.hpp"
#include "randlab/bitstring.hpp"
#include "randlab/martingale.hpp"
#include "randlab/measure.hpp"
#include "randlab/randomness_tests.hpp"
#include "randlab/rational.hpp"

namespace randlab {

/// Half-open [lo, hi).
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi > lo ? Rational(hi - lo) : Rational(0); }
  bool empty() const { return hi <= lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Product of half-open intervals, one per coordinate.
struct Box {
  std::vector<Interval> sides;

  std::size_t dim() const { return sides.size(); }
  bool empty() const;
  /// Half-open membership.
  bool contains(const std::vector<Rational>& point) const;
  /// Membership in the closure.
  bool touches(const std::vector<Rational>& point) const;
  Box intersect(const Box& other) const;
  friend bool operator==(const Box&, const Box&) = default;
};

/// Finite union of pairwise disjoint boxes inside [0,1)^dim. In dimension 1
/// the intervals are kept sorted with touching neighbours merged.
class Region {
 public:
  explicit Region(std::size_t dim = 1) : dim_(dim) {}
  /// Throws ConstructionError on overlap, wrong dimension or endpoints
  /// outside [0,1]. Empty boxes are dropped.
  Region(std::size_t dim, std::vector<Box> boxes);

  static Region interval(const Rational& lo, const Rational& hi);
  static Region whole(std::size_t dim = 1);

  /// "lo,hi" pairs separated by ';' or newlines; in dimension d a box is d
  /// pairs joined by '*'. Rationals are "num/den" or integers.
  static Region parse(std::string_view text, std::size_t dim = 1);
  std::string to_string() const;

  std::size_t dim() const { return dim_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::size_t dim_;
  std::vector<Box> boxes_;
};

/// The ambient measure on [0,1]^dim: Lebesgue, or (dimension 1) a measure
/// on binary names pushed onto dyadic intervals.
class BaseMeasure {
 public:
  static BaseMeasure lebesgue(std::size_t dim = 1);
  static BaseMeasure binary(Measure mu);

  std::size_t dim() const { return dim_; }
  bool is_lebesgue() const { return !binary_; }
  const std::optional<Measure>& binary_measure() const { return binary_; }

  /// Throws PreconditionError for a binary push and non-dyadic endpoints.
  Rational mass(const Box& box) const;
  Rational mass(const Region& region) const;
  /// mass(box ∩ region).
  Rational mass_within(const Box& box, const Region& region) const;
  std::string describe() const;

 private:
  std::size_t dim_ = 1;
  std::optional<Measure> binary_;
};

/// Binary cell decompositions of [0,1]^dim.
///
/// binary_digits: cell(σ) = [0.σ, 0.σ + 2^-|σ|).
/// bary_grouped(b): the b-ary digit cells, reached by binary questions: bit 0
///   settles on the next candidate digit, bit 1 moves past it; after b-1
///   ones the last digit is forced. For b = 3 the root splits [0,1/3) from
///   [1/3,1).
/// interleave(d): bit i halves coordinate i mod d.
class CellDecomposition {
 public:
  enum class Kind { binary_digits, bary_grouped, interleave };

  static CellDecomposition binary_digits(BaseMeasure base = BaseMeasure::lebesgue());
  /// Throws ConstructionError unless b >= 2.
  static CellDecomposition bary_grouped(unsigned b, BaseMeasure base = BaseMeasure::lebesgue());
  /// Throws ConstructionError unless d >= 1 and the base has dimension d.
  static CellDecomposition interleave(std::size_t d);

  /// "binary", "ternary", "bary:B" or "interleave:D".
  static CellDecomposition parse(std::string_view kind, BaseMeasure base = BaseMeasure::lebesgue());

  Kind kind() const { return kind_; }
  unsigned radix() const { return radix_; }
  std::size_t dim() const { return base_.dim(); }
  const BaseMeasure& base() const { return base_; }
  std::string describe() const;

  Box cell(const BitString& s) const;
  Region cell_region(const BitString& s) const { return Region(dim(), {cell(s)}); }
  Rational cell_mass(const BitString& s) const;

  /// One refinement step of the walk behind cell(); exposed for name_of.
  struct Node {
    Box box;
    Rational a;
    Rational w;
    unsigned j = 0;
    std::size_t depth = 0;
  };
  Node root() const;
  Node child(const Node& node, bool bit) const;

 private:
  CellDecomposition(Kind kind, unsigned radix, BaseMeasure base);
  Kind kind_;
  unsigned radix_;
  BaseMeasure base_;
};

enum class BoundaryPolicy {
  /// A point on the common boundary of two sibling cells has no name.
  strict,
  /// Ties go to the cell whose half-open box contains the point.
  half_open,
};

struct NameResult {
  /// Absent when the point is Undetermined.
  std::optional<BitString> name;
  /// Depth of the first cell split the point lies on (Undetermined only).
  std::size_t boundary_depth = 0;
};

/// The length-n name of a point of [0,1)^dim. Only boundaries interior to
/// [0,1]^dim count: 0 has the name 00...0.
NameResult name_of(const CellDecomposition& dec, const std::vector<Rational>& point, std::size_t n,
                   BoundaryPolicy policy = BoundaryPolicy::strict);
NameResult name_of(const CellDecomposition& dec, const Rational& x, std::size_t n,
                   BoundaryPolicy policy = BoundaryPolicy::strict);

struct OpenDecomposition {
  /// Maximal positive-mass cells of depth <= d inside U (a.e.), left to right.
  std::vector<BitString> cells;
  /// Depth-d cells that meet U in positive mass without lying inside it.
  std::vector<BitString> boundary;
  Rational covered;
  Rational residual;
};

OpenDecomposition decompose_open(const CellDecomposition& dec, const Region& u, std::size_t depth);

/// mu_A(σ) = base(cell(σ)).
Measure pushforward(const CellDecomposition& dec);

struct RefinementEntry {
  BitString target;
  std::vector<BitString> sources;
  std::vector<BitString> boundary;
  Rational target_mass;
  Rational covered;
  Rational residual;
};

struct RefinementRelation {
  std::size_t depth = 0;
  std::size_t target_depth = 0;
  /// One entry per target τ with |τ| <= target_depth, in length-lex order.
  std::vector<RefinementEntry> entries;

  const RefinementEntry& entry(const BitString& target) const;
};

/// Covers each B-cell of depth <= target_depth by A-cells of depth <= depth.
/// Throws PreconditionError unless both share the base measure.
RefinementRelation refine(const CellDecomposition& a, const CellDecomposition& b, std::size_t depth,
                          std::size_t target_depth);
inline RefinementRelation refine(const CellDecomposition& a, const CellDecomposition& b, std::size_t depth) {
  return refine(a, b, depth, depth);
}

struct KappaBounds {
  BitString target;
  Rational low;
  Rational high;
};

/// κ_low(τ) = Σ ν(σ_i) over the covering sources, κ_high adds the ν-mass of
/// the boundary cells. The upper bound assumes ν vanishes where the base
/// measure does.
std::vector<KappaBounds> transfer_measure(const RefinementRelation& rel, const Measure& nu);

/// μ_A(U_n ∩ covered part of [τ]_B) <= 2^-n κ_high(τ) for every entry and
/// level, where the test lives on A-names.
AuditReport check_transfer_bound(const RefinementRelation& rel, const BoundedMLTest& test);

/// Binary name of a b-ary digit string under bary_grouped(b).
BitString bary_name(unsigned b, const std::vector<unsigned>& digits);
/// Inverse of bary_name on full-digit names; nullopt if s ends mid-digit.
std::optional<std::vector<unsigned>> bary_digits(unsigned b, const BitString& s);

/// A martingale on b-ary digit strings with its measure.
using DigitCapital = std::function<std::optional<Rational>(const std::vector<unsigned>&)>;
using DigitMass = std::function<Rational(const std::vector<unsigned>&)>;

/// The binary martingale on bary_grouped(b) names obtained by grouping:
/// at a name that sits after k ones inside digit position, the capital is
/// the mass-weighted average of M over the digits k..b-1 still possible.
Martingale grouped_martingale(unsigned b, Measure names, DigitCapital capital, DigitMass mass);

/// For a binary martingale M on the names of bary_grouped(b): at every
/// full-digit node σ and intermediate node A = {digits k..b-1}, checks
///   M(A)·mu(A) = Σ_{j>=k} M(σj)·mu(σj)
/// exactly, over names of length <= depth.
AuditReport check_grouping(const Martingale& m, unsigned b, std::size_t depth);

}  // namespace randlab
