#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jetsurro/dataset.hpp"
#include "jetsurro/models.hpp"
#include "jetsurro/types.hpp"

namespace jetsurro::eval {

/// sqrt(mean squared residual). Throws ShapeError on length mismatch.
double rmse(const Vector& observed, const Vector& predicted);

/// 1 - SS_res/SS_tot about the observed mean. Throws DomainError when the
/// observed values are constant (R^2 undefined).
double r2(const Vector& observed, const Vector& predicted);

struct TargetScore {
  double r2_mean = 0.0, r2_std = 0.0;
  double rmse_mean = 0.0, rmse_std = 0.0;
};

struct KfoldResult {
  std::vector<std::string> target_names;
  std::vector<TargetScore> per_target;
  TargetScore average;          ///< arithmetic mean of the per-target rows
  std::vector<std::string> flagged;  ///< folds whose R^2 was undefined and excluded
};

/// Deterministic index folds: canonical order shuffled once with the seed and
/// chunked into k near-equal parts. `canonical` must be a permutation of 0..n-1.
std::vector<std::vector<int>> make_folds(const std::vector<int>& canonical, int k,
                                         std::uint64_t seed);

/// K-fold CV of a model spec. Rows are put in canonical (lexicographic) order
/// before shuffling, so the result is invariant to dataset row permutations.
KfoldResult kfold(const ml::RegressorSpec& spec, const data::Dataset& ds, int k,
                  std::uint64_t seed);

/// Matrix-level core; `folds` as produced by make_folds.
KfoldResult kfold_xy(const ml::RegressorSpec& spec, const Matrix& X, const Matrix& Y,
                     const Mask* mask, const std::vector<std::vector<int>>& folds,
                     const std::vector<std::string>& target_names);

struct ValidationResult {
  std::vector<std::string> target_names;
  std::vector<double> r2_per_target;
  std::vector<double> rmse_per_target;
  double r2_avg = 0.0;
  double rmse_avg = 0.0;
};

/// Held-out scores of an already-trained model, per target over observed cells.
ValidationResult validate(const ml::TrainedModel& model, const Matrix& X,
                          const Matrix& Y, const Mask* mask = nullptr);

/// K-fold table plus held-out validation table, one row per target with an
/// averages row.
struct EvalReport {
  KfoldResult cv;
  ValidationResult validation;

  void write_kfold_csv(std::ostream& out) const;
  void write_validation_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
};

struct LearningCurvePoint {
  std::size_t size = 0;
  double train_mean = 0.0, train_std = 0.0;
  double cv_mean = 0.0, cv_std = 0.0;
};

struct LearningCurve {
  std::vector<LearningCurvePoint> points;
  /// First size whose CV mean lies within one pooled std of the final size's
  /// mean; absent when even the final size does not qualify (cannot happen
  /// with the pooled rule, kept optional for robustness).
  std::optional<std::size_t> plateau_size;

  void write_csv(std::ostream& out) const;
};

/// For each size: subsample (first `size` of the canonical shuffle), K-fold,
/// and record both training and CV scores (mean of per-target R^2) with stds.
LearningCurve learning_curve(const ml::RegressorSpec& spec, const data::Dataset& ds,
                             const std::vector<std::size_t>& sizes, int k,
                             std::uint64_t seed);

LearningCurve learning_curve_xy(const ml::RegressorSpec& spec, const Matrix& X,
                                const Matrix& Y, const Mask* mask,
                                const std::vector<std::size_t>& sizes, int k,
                                std::uint64_t seed);

/// Lexicographic order of dataset rows over (features, targets); the anchor
/// for permutation-invariant fold assignment.
std::vector<int> canonical_order(const Matrix& X, const Matrix& Y);

}  // namespace jetsurro::eval
