#pragma once

#include <vector>

#include "jetsurro/rng.hpp"
#include "jetsurro/types.hpp"

namespace jetsurro::ml {

struct TreeNode {
  int feature = -1;  ///< -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  ///< leaf mean
};

struct TreeConfig {
  int max_depth = 2;
  int max_features = 0;  ///< per-split subset size; <= 0 means all features
  int min_samples_leaf = 1;
};

/// CART-style regression tree with variance-reduction splits. Candidate
/// thresholds are midpoints between consecutive distinct values; ties in
/// gain are broken by lowest feature index, then lowest threshold, which
/// makes the structure reproducible across platforms.
class RegressionTree {
 public:
  /// rng supplies the per-node feature subsets; pass nullptr to consider
  /// every feature at every node (deterministic tree).
  void fit(const Matrix& X, const Vector& y, const std::vector<int>& samples,
           const TreeConfig& config, Rng* rng);

  double predict_one(const Eigen::Ref<const RowVector>& x) const;
  Vector predict(const Matrix& X) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& mutable_nodes() { return nodes_; }

 private:
  int build(const Matrix& X, const Vector& y, std::vector<int>& samples, int depth,
            const TreeConfig& config, Rng* rng);

  std::vector<TreeNode> nodes_;
};

}  // namespace jetsurro::ml
