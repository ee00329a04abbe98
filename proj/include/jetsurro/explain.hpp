#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "jetsurro/jetphys.hpp"
#include "jetsurro/models.hpp"
#include "jetsurro/types.hpp"

namespace jetsurro::explain {

/// Anything that maps an (n x features) matrix to an (n x targets) matrix.
/// Wrapping a plain function lets tests graft dummy features onto a model.
using PredictFn = std::function<Matrix(const Matrix&)>;

struct KernelShapConfig {
  /// Coalition budget for sampling mode; ignored in exact mode. Must be
  /// >= 2n + 2 when sampling.
  int n_coalitions = 0;
  /// Exact mode (all 2^n - 2 proper coalitions) is the default for n <= 12.
  bool force_sampling = false;
  std::uint64_t seed = 0;
};

/// Shapley attributions for a batch of instances, one phi matrix per target.
/// Local accuracy holds by construction: base + sum(phi) = prediction.
struct Attribution {
  std::vector<std::string> feature_names;
  std::vector<std::string> target_names;
  Vector base;                ///< expected prediction over the background, per target
  std::vector<Matrix> phi;    ///< per target: (instances x features)
  Matrix feature_values;      ///< raw inputs of the explained instances
  Matrix predictions;         ///< model outputs per instance/target
  bool exact = true;
  bool ridge_fallback = false;  ///< weighted solve needed 1e-10 ridge
  int n_coalitions_used = 0;
  Eigen::Index background_rows = 0;
};

/// Coalition value table v(S) for every mask 0..2^n-1 (marginal replacement:
/// off-coalition features take background values, averaged over the
/// background). Returned matrix is (2^n x targets).
Matrix coalition_values(const PredictFn& model, int n_features,
                        const RowVector& instance, const Matrix& background);

/// Exact Shapley values by full coalition enumeration. Returns (phi, base).
/// Throws CapabilityError for more than 20 features.
std::pair<Vector, double> exact_shapley(const PredictFn& model, int n_features,
                                        const RowVector& instance,
                                        const Matrix& background, int target);
std::pair<Vector, double> exact_shapley(const ml::TrainedModel& model,
                                        const RowVector& instance,
                                        const Matrix& background, int target);

/// KernelSHAP: Shapley-kernel weighted least squares over coalitions, solved
/// under the local-accuracy constraint. Exact mode enumerates every proper
/// coalition; sampling mode draws them kernel-weight-proportionally without
/// replacement (deterministic per seed).
Attribution kernel_shap(const PredictFn& model, int n_features, int n_targets,
                        const Matrix& instances, const Matrix& background,
                        const KernelShapConfig& config = {},
                        std::vector<std::string> feature_names = {},
                        std::vector<std::string> target_names = {});
Attribution kernel_shap(const ml::TrainedModel& model, const Matrix& instances,
                        const Matrix& background, const KernelShapConfig& config = {});

/// Shapley kernel weight for a coalition of size s out of n features.
double shapley_kernel_weight(int n, int s);

struct BarEntry {
  std::string feature;
  int feature_index;
  double mean_abs_phi;
};

/// Per-target importance ranking: mean |phi| per feature, descending,
/// ties kept in feature order.
std::vector<std::vector<BarEntry>> bar_data(const Attribution& attr);

struct SummaryPoint {
  double phi;
  double raw;
};

/// Beeswarm source: one (phi, raw value) point per explained instance.
std::vector<SummaryPoint> summary_data(const Attribution& attr, int target,
                                       int feature);

/// (raw value, phi) series sorted by raw value. Throws NameError for an
/// unknown feature.
std::vector<std::pair<double, double>> dependence_data(const Attribution& attr,
                                                       const std::string& feature,
                                                       int target);

struct WaterfallStep {
  std::string label;  ///< "base", feature name, or "prediction"
  double delta;       ///< phi contribution (0 for the endpoints)
  double running;     ///< cumulative value after this step
};

/// Contributions from base value to prediction, features sorted by |phi|
/// descending; both endpoints included.
std::vector<WaterfallStep> waterfall_data(const Attribution& attr, int instance,
                                          int target);

struct RegimeFlags {
  bool coanda = false;
  bool shallow = false;
  double coanda_ratio = 0.0;
  double shallow_ratio = 0.0;
  double shallow_threshold = 0.0;
};

/// Boundary-proximity regimes: Coanda when h_p/L_M < 0.2; shallow when
/// d*Fr/H meets the inclination-dependent threshold (0.95 at 30 deg, 0.65 at
/// 45 deg, linear in between, clamped to [0.3, 0.95]).
RegimeFlags regime_flags(const phys::JetCase& c);

}  // namespace jetsurro::explain
