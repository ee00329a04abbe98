#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jetsurro/dataset.hpp"
#include "jetsurro/types.hpp"

namespace jetsurro::ml {

enum class Family { kMlp, kRandomForest, kGbt };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Model family plus hyperparameters and the seed that makes training
/// reproducible. Defaults are the tuned settings for the jet-geometry task.
struct RegressorSpec {
  Family family = Family::kMlp;
  std::map<std::string, double> params;  // ordered, so serialization is stable
  std::uint64_t seed = 0;

  static RegressorSpec defaults(Family f);
  /// Value of `name`, falling back to the family default.
  double get(const std::string& name) const;
  RegressorSpec with(const std::string& name, double value) const;
};

/// A fitted multi-output regressor. Callers pass physical units; input
/// scaling (and target scaling for the MLP) is applied internally.
/// Immutable after fit.
class TrainedModel {
 public:
  virtual ~TrainedModel() = default;

  Matrix predict(const Matrix& X) const;

  const RegressorSpec& spec() const { return spec_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& target_names() const { return target_names_; }
  const std::vector<std::string>& training_log() const { return training_log_; }
  int n_features() const { return static_cast<int>(feature_names_.size()); }
  int n_targets() const { return static_cast<int>(target_names_.size()); }

  nlohmann::json to_json() const;
  static std::unique_ptr<TrainedModel> from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static std::unique_ptr<TrainedModel> load(const std::string& path);

 protected:
  /// Predicts physical-unit targets from already input-scaled features.
  virtual Matrix predict_scaled(const Matrix& Xs) const = 0;
  virtual nlohmann::json params_json() const = 0;

  RegressorSpec spec_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> target_names_;
  std::vector<std::string> training_log_;
  data::ScalerParams input_scaler_;

  friend std::unique_ptr<TrainedModel> fit(const RegressorSpec&, const Matrix&,
                                           const Matrix&, const Mask*,
                                           std::vector<std::string>,
                                           std::vector<std::string>);
};

/// Trains a model. Y may contain NaN in cells switched off by `mask`;
/// masked cells are excluded from that target's loss only. Throws DataError
/// on non-finite inputs or when a target has fewer than 2 observed rows.
std::unique_ptr<TrainedModel> fit(const RegressorSpec& spec, const Matrix& X,
                                  const Matrix& Y, const Mask* mask = nullptr,
                                  std::vector<std::string> feature_names = {},
                                  std::vector<std::string> target_names = {});

/// One grid axis: parameter name and the values to try.
using Grid = std::vector<std::pair<std::string, std::vector<double>>>;

struct GridPoint {
  std::map<std::string, double> params;
  double mean_cv_rmse = 0.0;  ///< mean over folds of the target-mean RMSE
  bool feasible = true;
  std::string note;
};

struct GridSearchResult {
  RegressorSpec best;
  std::vector<GridPoint> table;  ///< one row per grid point, enumeration order
};

/// Exhaustive cross-validated search; ties keep the earlier grid point.
/// A fold failure marks the point infeasible; all-infeasible is a SearchError.
GridSearchResult grid_search(Family family, const Grid& grid, const Matrix& X,
                             const Matrix& Y, int k, std::uint64_t seed,
                             const Mask* mask = nullptr);

}  // namespace jetsurro::ml
