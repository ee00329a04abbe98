#include "jetsurro/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "jetsurro/errors.hpp"

namespace jetsurro::ml {

namespace {

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best variance-reduction split among the given features, gain compared
// strictly so earlier (feature, threshold) candidates win ties.
Split best_split(const Matrix& X, const Vector& y, const std::vector<int>& samples,
                 const std::vector<int>& features, int min_leaf) {
  const std::size_t m = samples.size();
  Split best;

  std::vector<std::pair<double, double>> xv(m);  // (x, y) sorted per feature
  for (int f : features) {
    for (std::size_t i = 0; i < m; ++i)
      xv[i] = {X(samples[i], f), y(samples[i])};
    std::sort(xv.begin(), xv.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (xv.front().first == xv.back().first) continue;

    double sum_left = 0.0, sum_right = 0.0;
    for (const auto& [x, t] : xv) sum_right += t;
    const double total = sum_right;

    for (std::size_t k = 1; k < m; ++k) {
      sum_left += xv[k - 1].second;
      sum_right = total - sum_left;
      if (xv[k - 1].first == xv[k].first) continue;
      const int nl = static_cast<int>(k), nr = static_cast<int>(m - k);
      if (nl < min_leaf || nr < min_leaf) continue;
      const double mid = 0.5 * (xv[k - 1].first + xv[k].first);
      if (!(xv[k - 1].first < mid && mid < xv[k].first)) continue;
      // Variance reduction up to constants: sum_l^2/n_l + sum_r^2/n_r.
      const double gain = sum_left * sum_left / nl + sum_right * sum_right / nr;
      if (!best.found || gain > best.gain) {
        best.found = true;
        best.feature = f;
        best.threshold = mid;
        best.gain = gain;
      }
    }
  }
  return best;
}

}  // namespace

int RegressionTree::build(const Matrix& X, const Vector& y, std::vector<int>& samples,
                          int depth, const TreeConfig& config, Rng* rng) {
  const int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  double mean = 0.0;
  for (int i : samples) mean += y(i);
  mean /= static_cast<double>(samples.size());
  nodes_[node_id].value = mean;

  bool pure = true;
  for (int i : samples)
    if (y(i) != y(samples.front())) {
      pure = false;
      break;
    }
  if (pure || depth >= config.max_depth ||
      static_cast<int>(samples.size()) < 2 * config.min_samples_leaf)
    return node_id;

  const int n_features = static_cast<int>(X.cols());
  std::vector<int> features(n_features);
  std::iota(features.begin(), features.end(), 0);
  if (rng && config.max_features > 0 && config.max_features < n_features) {
    // Partial Fisher-Yates, then ascending order for the tie-break rule.
    for (int i = 0; i < config.max_features; ++i) {
      const int j = i + static_cast<int>(rng->uniform_index(n_features - i));
      std::swap(features[i], features[j]);
    }
    features.resize(config.max_features);
    std::sort(features.begin(), features.end());
  }

  const Split split = best_split(X, y, samples, features, config.min_samples_leaf);
  if (!split.found) return node_id;

  std::vector<int> left, right;
  left.reserve(samples.size());
  right.reserve(samples.size());
  for (int i : samples)
    (X(i, split.feature) <= split.threshold ? left : right).push_back(i);

  nodes_[node_id].feature = split.feature;
  nodes_[node_id].threshold = split.threshold;
  samples.clear();
  samples.shrink_to_fit();
  const int l = build(X, y, left, depth + 1, config, rng);
  nodes_[node_id].left = l;
  const int r = build(X, y, right, depth + 1, config, rng);
  nodes_[node_id].right = r;
  return node_id;
}

void RegressionTree::fit(const Matrix& X, const Vector& y,
                         const std::vector<int>& samples, const TreeConfig& config,
                         Rng* rng) {
  nodes_.clear();
  if (samples.empty()) throw ShapeError("tree: cannot fit on zero samples");
  std::vector<int> idx = samples;
  build(X, y, idx, 0, config, rng);
}

double RegressionTree::predict_one(const Eigen::Ref<const RowVector>& x) const {
  int at = 0;
  while (nodes_[at].feature >= 0)
    at = x(nodes_[at].feature) <= nodes_[at].threshold ? nodes_[at].left
                                                       : nodes_[at].right;
  return nodes_[at].value;
}

Vector RegressionTree::predict(const Matrix& X) const {
  Vector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = predict_one(X.row(i));
  return out;
}

}  // namespace jetsurro::ml
