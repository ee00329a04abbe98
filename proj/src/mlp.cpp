#include "jetsurro/mlp.hpp"

#include <cmath>

#include "jetsurro/errors.hpp"
#include "jetsurro/rng.hpp"

namespace jetsurro::ml {

std::vector<int> MlpArchitecture::sizes() const {
  std::vector<int> s;
  s.push_back(n_in);
  for (int l = 0; l < hidden_layers; ++l) s.push_back(neurons);
  s.push_back(n_out);
  return s;
}

int MlpArchitecture::parameter_count() const {
  const auto s = sizes();
  int count = 0;
  for (std::size_t l = 0; l + 1 < s.size(); ++l) count += s[l + 1] * (s[l] + 1);
  return count;
}

Vector MlpWeights::flatten() const {
  int total = 0;
  for (std::size_t l = 0; l < W.size(); ++l)
    total += static_cast<int>(W[l].size() + b[l].size());
  Vector flat(total);
  int at = 0;
  for (std::size_t l = 0; l < W.size(); ++l) {
    flat.segment(at, W[l].size()) = Eigen::Map<const Vector>(W[l].data(), W[l].size());
    at += static_cast<int>(W[l].size());
    flat.segment(at, b[l].size()) = b[l];
    at += static_cast<int>(b[l].size());
  }
  return flat;
}

MlpWeights MlpWeights::unflatten(const Vector& flat, const MlpArchitecture& arch) {
  if (flat.size() != arch.parameter_count())
    throw ShapeError("mlp: flat parameter vector has wrong length");
  const auto s = arch.sizes();
  MlpWeights w;
  int at = 0;
  for (std::size_t l = 0; l + 1 < s.size(); ++l) {
    w.W.emplace_back(
        Eigen::Map<const Matrix>(flat.data() + at, s[l + 1], s[l]));
    at += s[l + 1] * s[l];
    w.b.emplace_back(flat.segment(at, s[l + 1]));
    at += s[l + 1];
  }
  return w;
}

MlpWeights init_weights(const MlpArchitecture& arch, std::uint64_t seed) {
  Rng rng(seed);
  const auto s = arch.sizes();
  MlpWeights w;
  for (std::size_t l = 0; l + 1 < s.size(); ++l) {
    const double bound = std::sqrt(3.0 / s[l]);
    Matrix W(s[l + 1], s[l]);
    // Column-major fill, matching the flatten() layout.
    for (Eigen::Index j = 0; j < W.cols(); ++j)
      for (Eigen::Index i = 0; i < W.rows(); ++i)
        W(i, j) = rng.uniform(-bound, bound);
    w.W.push_back(std::move(W));
    w.b.emplace_back(Vector::Zero(s[l + 1]));
  }
  return w;
}

// Row-at-a-time evaluation: each row's result depends only on its own values,
// so predictions are bit-identical under row permutation or duplication
// (batched GEMM would round differently depending on row position).
Matrix mlp_forward(const MlpWeights& w, const Matrix& X) {
  const std::size_t layers = w.W.size();
  Matrix out(X.rows(), w.W.back().rows());
  Vector a, z;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    a = X.row(i).transpose();
    for (std::size_t l = 0; l < layers; ++l) {
      z.noalias() = w.W[l] * a;
      z += w.b[l];
      if (l + 1 < layers)
        a = z.array().tanh().matrix();
      else
        a = z;
    }
    out.row(i) = a.transpose();
  }
  return out;
}

double mlp_loss_grad(const Vector& flat, const MlpArchitecture& arch, const Matrix& X,
                     const Matrix& Y, const Mask* mask, double l2_alpha,
                     Vector* grad) {
  const MlpWeights w = MlpWeights::unflatten(flat, arch);
  const Eigen::Index n = X.rows();
  const std::size_t layers = w.W.size();

  std::vector<Matrix> act(layers + 1);
  act[0] = X;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = (act[l] * w.W[l].transpose()).rowwise() + w.b[l].transpose();
    act[l + 1] = (l + 1 < layers) ? Matrix(z.array().tanh().matrix()) : std::move(z);
  }

  Matrix residual = act[layers] - Y;
  double n_obs = static_cast<double>(Y.size());
  if (mask) {
    residual = (residual.array() * mask->cast<double>()).matrix();
    n_obs = static_cast<double>(mask->cast<int>().sum());
  }
  if (n_obs == 0) throw ShapeError("mlp: no observed target cells");

  double loss = residual.squaredNorm() / (2.0 * n_obs);
  for (std::size_t l = 0; l < layers; ++l)
    loss += l2_alpha * w.W[l].squaredNorm() / (2.0 * static_cast<double>(n));

  if (grad) {
    MlpWeights g;
    g.W.resize(layers);
    g.b.resize(layers);
    Matrix delta = residual / n_obs;  // d loss / d output
    for (std::size_t l = layers; l-- > 0;) {
      g.W[l] = delta.transpose() * act[l] +
               (l2_alpha / static_cast<double>(n)) * w.W[l];
      g.b[l] = delta.colwise().sum().transpose();
      if (l > 0) {
        delta = (delta * w.W[l]).cwiseProduct(
            (1.0 - act[l].array().square()).matrix());
      }
    }
    *grad = g.flatten();
  }
  return loss;
}

}  // namespace jetsurro::ml
