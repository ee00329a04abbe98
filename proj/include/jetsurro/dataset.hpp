#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetsurro/jetmodel.hpp"
#include "jetsurro/jetphys.hpp"
#include "jetsurro/rng.hpp"
#include "jetsurro/types.hpp"

namespace jetsurro::data {

inline constexpr std::array<const char*, 7> kFeatureNames = {
    "theta", "h_p", "H", "d", "U0", "rho_b", "rho_a"};
inline constexpr std::array<const char*, 5> kTargetNames = {"x_m", "z_m", "z_t",
                                                            "x_r", "x_i"};

enum class Provenance { kOracle, kExternal };

struct Row {
  phys::JetCase c;
  std::array<double, 5> y{};
  std::array<bool, 5> present{true, true, true, true, true};
  Provenance prov = Provenance::kOracle;
};

/// Column-named table of cases and targets. Rows are unique by JetCase.
struct Dataset {
  std::vector<Row> rows;

  std::size_t size() const { return rows.size(); }
  Matrix features() const;      ///< n x 7
  Matrix targets() const;       ///< n x 5, NaN where absent
  Mask target_mask() const;     ///< n x 5, true = observed
  bool contains(const phys::JetCase& c) const;
};

/// Per-feature sampling bounds, in kFeatureNames order, plus an observable
/// envelope on the jet regime: Froude numbers in [1, 94] and d*Fr <= 3.5 m.
/// A CFD campaign resolves the five characteristic points only for jets that
/// fit its domain (extents up to ~12 m); raw uniform draws over the input
/// bounds exceed that in roughly a fifth of cases, so such draws are redrawn
/// rather than emitted.
struct Ranges {
  std::array<std::pair<double, double>, 7> bounds;
  double fr_min = 1.0;
  double fr_max = 94.0;
  double d_fr_max = 3.5;

  /// Shipped defaults for the seven discharge/ambient inputs.
  static Ranges defaults();
  /// Defaults with the observable envelope disabled (raw uniform draws).
  static Ranges unbounded();
  const std::pair<double, double>& of(std::size_t feature) const {
    return bounds[feature];
  }
};

/// Rejection sampler over Ranges. The physics constraints rho_b > rho_a and
/// H >= 2*h_p are not overridable; duplicates are rejected. Draws are a
/// single sequential stream so results are deterministic per seed.
class CaseSampler {
 public:
  CaseSampler(const Ranges& ranges, std::uint64_t seed);
  /// Next accepted case. Throws SamplingError once the total draw budget
  /// (1e6 raw draws) is exhausted.
  phys::JetCase next();

 private:
  Ranges ranges_;
  Rng rng_;
  std::vector<phys::JetCase> accepted_;  // kept sorted for dedup
  std::uint64_t draws_ = 0;
};

/// Exactly n unique cases uniform over the ranges subject to rejection.
std::vector<phys::JetCase> sample_cases(std::size_t n, const Ranges& ranges,
                                        std::uint64_t seed);

struct GenerationFailure {
  std::size_t index;
  phys::JetCase c;
  std::string reason;
};

struct GenerationOutcome {
  Dataset dataset;
  std::vector<GenerationFailure> failures;
};

/// One oracle row per case (failures skipped and reported). Throws DataError
/// if fewer than 95% of the cases succeed. Per-case noise streams are derived
/// from (noise_seed, case index), so parallel order cannot change results.
GenerationOutcome generate(const std::vector<phys::JetCase>& cases,
                           std::optional<std::uint64_t> noise_seed = std::nullopt,
                           const plume::IntegratorConfig& config = {});

/// External (experimental) record: all seven inputs, any subset of targets.
struct ExternalRecord {
  phys::JetCase c;
  std::array<double, 5> y{};
  std::array<bool, 5> present{};
};

struct MergeOutcome {
  Dataset dataset;
  /// (record index, reason) for records that violate case invariants,
  /// duplicate an existing case, or carry no target at all.
  std::vector<std::pair<std::size_t, std::string>> rejected;
};

MergeOutcome merge_external(const Dataset& base,
                            const std::vector<ExternalRecord>& records);

/// Per-column min-max parameters. A constant column maps to 0 everywhere
/// (external merges can legitimately pin a feature).
struct ScalerParams {
  std::vector<std::string> names;
  std::vector<std::pair<double, double>> min_max;

  Matrix apply(const Matrix& X) const;
  Matrix invert(const Matrix& X) const;
};

/// Column-wise min/max over the rows of X. Requires >= 2 rows.
ScalerParams fit_scaler(const Matrix& X, const std::vector<std::string>& names);

/// Pearson correlation of the columns of X (symmetric, unit diagonal).
/// Throws DomainError naming the first constant column.
Matrix pearson(const Matrix& X, const std::vector<std::string>& names);

/// Correlation over inputs and targets of the dataset, computed on rows with
/// all targets present. Returns the 12x12 matrix in column order
/// kFeatureNames ++ kTargetNames.
Matrix pearson_matrix(const Dataset& ds);

/// Deterministic shuffled partition into (train_test, validation) of sizes
/// floor(fraction*n) / remainder. Original row order is preserved within
/// each part.
std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction,
                                  std::uint64_t seed);

/// Canonical CSV: header theta,...,x_i,provenance; absent targets are empty
/// fields; doubles written shortest-round-trip.
void write_csv(const Dataset& ds, std::ostream& out);
Dataset read_csv(std::istream& in);
void write_csv_file(const Dataset& ds, const std::string& path);
Dataset read_csv_file(const std::string& path);

/// External records share the dataset column layout minus provenance
/// (a trailing provenance column is tolerated and ignored).
std::vector<ExternalRecord> read_external_csv(std::istream& in);

}  // namespace jetsurro::data
