#pragma once

#include <span>
#include <vector>

#include "spectral_aug/linalg.hpp"
#include "spectral_aug/rng.hpp"

namespace spectral_aug {

enum class Activation { tanh, identity };

/// y = W x + b with W of shape out x in.
struct DenseLayer {
  Matrix weight;
  Vector bias;
};

/// Feed-forward network applied independently to every row of its input.
/// The activation follows every layer except the last.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers, Activation hidden = Activation::tanh);

  /// Layer widths {in, h1, ..., out}; weights and biases ~ U(-a, a) with
  /// a = fan_in^{-1/2}.
  static Mlp random(std::span<const int> widths, Rng& rng,
                    Activation hidden = Activation::tanh);

  int input_dim() const;
  int output_dim() const;
  bool empty() const { return layers_.empty(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  Activation activation() const { return hidden_; }

  /// rows: k x input_dim  ->  k x output_dim.
  Matrix forward(const Matrix& rows) const;

  /// Product of per-layer spectral norms (power iteration); tanh is
  /// 1-Lipschitz so this bounds the network's Lipschitz constant.
  double lipschitz_bound() const;

 private:
  std::vector<DenseLayer> layers_;
  Activation hidden_ = Activation::tanh;
};

/// Largest singular value of w by power iteration on w^T w. Stops once
/// ||w^T w x - theta x|| <= tolerance * theta.
double power_iteration_norm(const Matrix& w, int iterations = 5000, double tolerance = 1e-9);

}  // namespace spectral_aug
