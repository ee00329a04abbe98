#include "jetsurro/explain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "jetsurro/errors.hpp"
#include "jetsurro/parallel.hpp"
#include "jetsurro/rng.hpp"

namespace jetsurro::explain {

namespace {

double binomial(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i)
    result *= static_cast<double>(n - i + 1) / static_cast<double>(i);
  return result;
}

// Model evaluations for a list of masks: each mask is expanded over the
// whole background and averaged. Chunked so huge enumerations stay bounded.
Matrix mask_values(const PredictFn& model, int n, const RowVector& instance,
                   const Matrix& background, const std::vector<std::uint32_t>& masks) {
  const Eigen::Index bg = background.rows();
  Matrix values;  // resized after the first predict reveals target count
  constexpr std::size_t kChunk = 1024;
  for (std::size_t start = 0; start < masks.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, masks.size() - start);
    Matrix composite(static_cast<Eigen::Index>(count) * bg, n);
    for (std::size_t m = 0; m < count; ++m) {
      const std::uint32_t mask = masks[start + m];
      Matrix block = background;
      for (int j = 0; j < n; ++j)
        if (mask & (1u << j)) block.col(j).setConstant(instance(j));
      composite.middleRows(static_cast<Eigen::Index>(m) * bg, bg) = block;
    }
    const Matrix pred = model(composite);
    if (values.size() == 0)
      values.resize(static_cast<Eigen::Index>(masks.size()), pred.cols());
    for (std::size_t m = 0; m < count; ++m)
      values.row(static_cast<Eigen::Index>(start + m)) =
          pred.middleRows(static_cast<Eigen::Index>(m) * bg, bg).colwise().mean();
  }
  return values;
}

PredictFn wrap(const ml::TrainedModel& model) {
  return [&model](const Matrix& X) { return model.predict(X); };
}

}  // namespace

double shapley_kernel_weight(int n, int s) {
  return static_cast<double>(n - 1) /
         (binomial(n, s) * static_cast<double>(s) * static_cast<double>(n - s));
}

Matrix coalition_values(const PredictFn& model, int n, const RowVector& instance,
                        const Matrix& background) {
  if (n > 20) throw CapabilityError("coalition enumeration limited to 20 features");
  if (background.rows() == 0) throw ShapeError("background must be nonempty");
  std::vector<std::uint32_t> masks(1u << n);
  std::iota(masks.begin(), masks.end(), 0u);
  return mask_values(model, n, instance, background, masks);
}

std::pair<Vector, double> exact_shapley(const PredictFn& model, int n,
                                        const RowVector& instance,
                                        const Matrix& background, int target) {
  if (n > 20)
    throw CapabilityError(
        "exact_shapley enumerates 2^n coalitions and is limited to 20 features; "
        "use kernel_shap sampling mode");
  const Matrix v = coalition_values(model, n, instance, background);

  // phi_j = sum over S not containing j of |S|!(n-|S|-1)!/n! (v(S+j) - v(S)).
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s)
    weight[s] = 1.0 / (binomial(n - 1, s) * static_cast<double>(n));

  Vector phi = Vector::Zero(n);
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      phi(j) += weight[size] * (v(mask | (1u << j), target) - v(mask, target));
    }
  }
  return {phi, v(0, target)};
}

std::pair<Vector, double> exact_shapley(const ml::TrainedModel& model,
                                        const RowVector& instance,
                                        const Matrix& background, int target) {
  return exact_shapley(wrap(model), model.n_features(), instance, background, target);
}

Attribution kernel_shap(const PredictFn& model, int n, int n_targets,
                        const Matrix& instances, const Matrix& background,
                        const KernelShapConfig& config,
                        std::vector<std::string> feature_names,
                        std::vector<std::string> target_names) {
  if (background.rows() == 0) throw ShapeError("kernel_shap: empty background");
  if (instances.cols() != n || background.cols() != n)
    throw ShapeError("kernel_shap: feature count mismatch");
  if (n < 2) throw ShapeError("kernel_shap: need at least 2 features");
  if (n > 30)
    throw CapabilityError("kernel_shap: coalition masks support up to 30 features");

  const bool exact = !config.force_sampling && n <= 12;
  std::vector<std::uint32_t> masks;  // proper coalitions only
  const std::uint32_t full = (1u << n) - 1;
  if (exact) {
    for (std::uint32_t m = 1; m < full; ++m) masks.push_back(m);
  } else {
    const int budget = config.n_coalitions;
    if (budget < 2 * n + 2)
      throw ConfigError("kernel_shap sampling: n_coalitions must be >= 2n + 2");
    if (static_cast<std::uint64_t>(budget) > static_cast<std::uint64_t>(full) - 1)
      throw ConfigError("kernel_shap sampling: budget exceeds 2^n - 2 coalitions");
    // Kernel-weight-proportional sampling without replacement across sizes:
    // P(size s) ~ C(n, s) w(n, s); the subset of that size is uniform.
    std::vector<double> size_weight(n);  // index s = 1..n-1
    double total = 0.0;
    for (int s = 1; s < n; ++s) {
      size_weight[s] = binomial(n, s) * shapley_kernel_weight(n, s);
      total += size_weight[s];
    }
    Rng rng(config.seed);
    std::set<std::uint32_t> chosen;
    while (static_cast<int>(chosen.size()) < budget) {
      double pick = rng.uniform() * total;
      int s = 1;
      for (; s < n - 1; ++s) {
        if (pick < size_weight[s]) break;
        pick -= size_weight[s];
      }
      // Uniform subset of size s via partial Fisher-Yates.
      std::vector<int> feats(n);
      std::iota(feats.begin(), feats.end(), 0);
      std::uint32_t mask = 0;
      for (int i = 0; i < s; ++i) {
        const int j = i + static_cast<int>(rng.uniform_index(n - i));
        std::swap(feats[i], feats[j]);
        mask |= (1u << feats[i]);
      }
      chosen.insert(mask);
    }
    masks.assign(chosen.begin(), chosen.end());
  }

  // Weighted KKT system is shared by every instance and target:
  //   [Z^T W Z  1] [phi   ]   [Z^T W (v - base)]
  //   [1^T      0] [lambda] = [f(x) - base     ]
  const auto m_count = static_cast<Eigen::Index>(masks.size());
  Matrix Z(m_count, n);
  Vector w(m_count);
  for (Eigen::Index r = 0; r < m_count; ++r) {
    const std::uint32_t mask = masks[r];
    for (int j = 0; j < n; ++j) Z(r, j) = (mask & (1u << j)) ? 1.0 : 0.0;
    w(r) = shapley_kernel_weight(n, std::popcount(mask));
  }
  const Matrix ZtW = Z.transpose() * w.asDiagonal();
  Matrix kkt = Matrix::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = ZtW * Z;
  kkt.topRightCorner(n, 1).setOnes();
  kkt.bottomLeftCorner(1, n).setOnes();

  Attribution attr;
  Eigen::FullPivLU<Matrix> lu(kkt);
  if (!lu.isInvertible()) {
    kkt.topLeftCorner(n, n) += 1e-10 * Matrix::Identity(n, n);
    lu.compute(kkt);
    attr.ridge_fallback = true;
  }

  if (feature_names.empty())
    for (int j = 0; j < n; ++j) feature_names.push_back("x" + std::to_string(j));
  if (target_names.empty())
    for (int t = 0; t < n_targets; ++t) target_names.push_back("y" + std::to_string(t));
  attr.feature_names = std::move(feature_names);
  attr.target_names = std::move(target_names);
  attr.exact = exact;
  attr.n_coalitions_used = static_cast<int>(masks.size());
  attr.background_rows = background.rows();
  attr.feature_values = instances;
  attr.predictions.resize(instances.rows(), n_targets);
  attr.phi.assign(n_targets, Matrix::Zero(instances.rows(), n));

  // Base value: expected prediction over the background.
  attr.base = model(background).colwise().mean().transpose();

  // One model-evaluation batch per instance serves all targets.
  std::vector<std::uint32_t> eval_masks = masks;
  eval_masks.push_back(full);
  parallel_for(static_cast<std::size_t>(instances.rows()), [&](std::size_t i) {
    const RowVector x = instances.row(static_cast<Eigen::Index>(i));
    const Matrix v = mask_values(model, n, x, background, eval_masks);
    const RowVector fx = v.row(m_count);  // full coalition = f(x) averaged trivially
    attr.predictions.row(static_cast<Eigen::Index>(i)) = fx;
    for (int t = 0; t < n_targets; ++t) {
      Vector rhs(n + 1);
      rhs.head(n) = ZtW * (v.col(t).head(m_count).array() - attr.base(t)).matrix();
      rhs(n) = fx(t) - attr.base(t);
      const Vector sol = lu.solve(rhs);
      attr.phi[t].row(static_cast<Eigen::Index>(i)) = sol.head(n).transpose();
    }
  });
  return attr;
}

Attribution kernel_shap(const ml::TrainedModel& model, const Matrix& instances,
                        const Matrix& background, const KernelShapConfig& config) {
  return kernel_shap(wrap(model), model.n_features(), model.n_targets(), instances,
                     background, config, model.feature_names(), model.target_names());
}

std::vector<std::vector<BarEntry>> bar_data(const Attribution& attr) {
  if (attr.feature_values.rows() == 0)
    throw ShapeError("bar_data: attribution covers no instances");
  std::vector<std::vector<BarEntry>> out;
  for (std::size_t t = 0; t < attr.phi.size(); ++t) {
    std::vector<BarEntry> entries;
    for (std::size_t j = 0; j < attr.feature_names.size(); ++j) {
      entries.push_back({attr.feature_names[j], static_cast<int>(j),
                         attr.phi[t].col(static_cast<Eigen::Index>(j))
                             .cwiseAbs()
                             .mean()});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const BarEntry& a, const BarEntry& b) {
                       return a.mean_abs_phi > b.mean_abs_phi;
                     });
    out.push_back(std::move(entries));
  }
  return out;
}

std::vector<SummaryPoint> summary_data(const Attribution& attr, int target,
                                       int feature) {
  std::vector<SummaryPoint> points;
  for (Eigen::Index i = 0; i < attr.feature_values.rows(); ++i)
    points.push_back({attr.phi[target](i, feature), attr.feature_values(i, feature)});
  return points;
}

std::vector<std::pair<double, double>> dependence_data(const Attribution& attr,
                                                       const std::string& feature,
                                                       int target) {
  const auto it =
      std::find(attr.feature_names.begin(), attr.feature_names.end(), feature);
  if (it == attr.feature_names.end())
    throw NameError("dependence_data: unknown feature '" + feature + "'");
  const auto j = static_cast<Eigen::Index>(it - attr.feature_names.begin());
  std::vector<std::pair<double, double>> series;
  for (Eigen::Index i = 0; i < attr.feature_values.rows(); ++i)
    series.emplace_back(attr.feature_values(i, j), attr.phi[target](i, j));
  std::stable_sort(series.begin(), series.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return series;
}

std::vector<WaterfallStep> waterfall_data(const Attribution& attr, int instance,
                                          int target) {
  if (instance < 0 || instance >= attr.feature_values.rows())
    throw ShapeError("waterfall_data: instance index out of range");
  if (target < 0 || target >= static_cast<int>(attr.phi.size()))
    throw ShapeError("waterfall_data: target index out of range");

  std::vector<int> order(attr.feature_names.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(attr.phi[target](instance, a)) >
           std::abs(attr.phi[target](instance, b));
  });

  std::vector<WaterfallStep> steps;
  double running = attr.base(target);
  steps.push_back({"base", 0.0, running});
  for (int j : order) {
    const double phi = attr.phi[target](instance, j);
    running += phi;
    steps.push_back({attr.feature_names[j], phi, running});
  }
  steps.push_back({"prediction", 0.0, running});
  return steps;
}

RegimeFlags regime_flags(const phys::JetCase& c) {
  const phys::DerivedQuantities dq = phys::derive(c);
  RegimeFlags flags;
  flags.coanda_ratio = dq.coanda_ratio;
  flags.shallow_ratio = dq.shallow_ratio;
  flags.coanda = dq.coanda_ratio < 0.2;
  const double line = 0.95 - 0.02 * (c.theta - 30.0);
  flags.shallow_threshold = std::clamp(line, 0.3, 0.95);
  flags.shallow = dq.shallow_ratio >= flags.shallow_threshold;
  return flags;
}

}  // namespace jetsurro::explain
