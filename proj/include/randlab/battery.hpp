#pragma once

#include <string>
#include <vector>

#include "randlab/martingale.hpp"
#include "randlab/measure.hpp"

namespace randlab {

struct NamedMeasure {
  std::string name;
  Measure measure;
};

struct NamedMartingale {
  std::string name;
  Martingale martingale;
};

/// One representative per measure constructor, plus a measure with a null
/// cylinder.
std::vector<NamedMeasure> measure_families();

/// The fixed martingale battery used by the audits. The first five are the
/// non-trivial ones; the last is the identity.
std::vector<NamedMartingale> martingale_battery();

/// Looks up a battery entry by name; throws PreconditionError listing the
/// names otherwise.
Martingale battery_martingale(const std::string& name);

/// The split_table{ε→0} measure: everything on the 0 side.
Measure null_one_measure();

}  // namespace randlab
