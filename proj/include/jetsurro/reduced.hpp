#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jetsurro/dataset.hpp"
#include "jetsurro/eval.hpp"
#include "jetsurro/explain.hpp"
#include "jetsurro/types.hpp"

namespace jetsurro::reduced {

/// Three-feature view of a dataset: (theta, Fr, d) -> five targets, the
/// Froude number computed from (U0, rho_b, rho_a, d) per row. Row count and
/// targets are unchanged; the information loss is the point.
struct ReducedTable {
  Matrix X;  ///< n x 3: theta, Fr, d
  Matrix Y;  ///< n x 5
  Mask mask;
  std::vector<std::string> feature_names;  ///< {"theta", "Fr", "d"}
};

ReducedTable compress(const data::Dataset& ds);

/// Full seven-feature model vs the reduced (theta, Fr, d) model under
/// identical split and fold seeds. The reduced network uses 20 neurons per
/// hidden layer instead of 25.
struct ComparisonReport {
  eval::EvalReport full;
  eval::EvalReport reduced;
};

ComparisonReport reduced_fit_eval(const data::Dataset& ds, std::uint64_t seed);

/// Dependence series of a reduced-model attribution: theta, and the product
/// d*Fr with phi(d) + phi(Fr) as the combined contribution.
struct DfrSeries {
  std::vector<std::pair<double, double>> theta;
  std::vector<std::pair<double, double>> d_fr;
};

DfrSeries dfr_dependence(const explain::Attribution& reduced_attr, int target);

}  // namespace jetsurro::reduced
