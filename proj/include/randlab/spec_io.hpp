#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "randlab/martingale.hpp"
#include "randlab/measure.hpp"
#include "randlab/randomness_tests.hpp"

namespace randlab {

using Json = nlohmann::ordered_json;

/// Whole file as a string; throws ParseError if it cannot be read.
std::string read_text_file(const std::string& path);

/// Parses JSON, reporting syntax errors with line and column.
Json parse_json(std::string_view text);

Json to_json(const MeasureSpec& spec);
MeasureSpec measure_spec_from_json(const Json& j);

/// The split_table agreeing with mu on every |s| <= depth (splits listed for
/// |s| < depth, total = mu(ε)).
Measure materialize(const Measure& mu, std::size_t depth);
/// The measure's own spec, or its materialization when it is derived.
Json measure_json(const Measure& mu, std::size_t depth);

/// "fair", "bernoulli:P", "file:PATH" (JSON MeasureSpec) or inline JSON.
Measure parse_measure(std::string_view text);

/// "quotient:NU/MU", "all_in:B[@MEASURE]", "identity[@MEASURE]",
/// "battery:NAME" or "file:PATH", the last a JSON document
/// {"base": MEASURE, "capital": {"": "1", "0": "2", ...}}.
Martingale parse_martingale(std::string_view text);

/// Capital table to `depth` (undefined entries omitted).
Json martingale_json(const Martingale& m, std::size_t depth);

Json to_json(const CylinderSet& u);
CylinderSet cylinder_set_from_json(const Json& j);

Json to_json(const MLTest& t);
Json to_json(const BoundedMLTest& t, std::size_t depth);
Json to_json(const VitaliTest& t, std::size_t depth);
Json to_json(const IntegralStep& g, std::size_t depth);

/// A serialized test. Exactly one member is set, according to `kind`.
struct TestBundle {
  std::string kind;
  std::optional<Martingale> martingale;
  std::optional<MLTest> ml;
  std::optional<BoundedMLTest> bounded_ml;
  std::optional<VitaliTest> vitali;
  std::optional<IntegralStep> integral;
};

TestBundle test_bundle_from_json(const Json& j);

}  // namespace randlab
