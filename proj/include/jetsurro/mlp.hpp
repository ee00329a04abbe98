#pragma once

#include <cstdint>
#include <vector>

#include "jetsurro/types.hpp"

namespace jetsurro::ml {

/// Fully connected tanh network with a linear output layer.
struct MlpArchitecture {
  int n_in = 0;
  int hidden_layers = 3;
  int neurons = 25;
  int n_out = 0;

  /// Layer widths including input and output.
  std::vector<int> sizes() const;
  int parameter_count() const;
};

/// Weights W[l] are (out x in) per layer, biases b[l] (out).
struct MlpWeights {
  std::vector<Matrix> W;
  std::vector<Vector> b;

  Vector flatten() const;
  static MlpWeights unflatten(const Vector& flat, const MlpArchitecture& arch);
};

/// Symmetric uniform fan-in initialization: each layer drawn from
/// U(-sqrt(3/fan_in), +sqrt(3/fan_in)), biases zero.
MlpWeights init_weights(const MlpArchitecture& arch, std::uint64_t seed);

/// Forward pass on already-scaled inputs; returns the linear output layer.
Matrix mlp_forward(const MlpWeights& w, const Matrix& X);

/// Regularized half-MSE loss over observed cells (mask optional):
///   L = sum_obs r^2 / (2 N_obs) + l2_alpha * sum_l ||W_l||^2 / (2 n_rows)
/// Biases are not penalized. Fills the flat analytic gradient when `grad`
/// is non-null; returns the loss.
double mlp_loss_grad(const Vector& flat, const MlpArchitecture& arch, const Matrix& X,
                     const Matrix& Y, const Mask* mask, double l2_alpha,
                     Vector* grad);

}  // namespace jetsurro::ml
