#include "spectral_aug/mlp.hpp"

#include <cmath>

#include "spectral_aug/error.hpp"

namespace spectral_aug {

Mlp::Mlp(std::vector<DenseLayer> layers, Activation hidden)
    : layers_(std::move(layers)), hidden_(hidden) {
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const DenseLayer& layer = layers_[k];
    if (layer.bias.size() != layer.weight.rows()) {
      throw ValidationError("dense layer bias does not match its output width");
    }
    if (k > 0 && layer.weight.cols() != layers_[k - 1].weight.rows()) {
      throw ValidationError("dense layer widths do not chain");
    }
  }
}

Mlp Mlp::random(std::span<const int> widths, Rng& rng, Activation hidden) {
  if (widths.size() < 2) throw ValidationError("an MLP needs at least input and output widths");
  std::vector<DenseLayer> layers;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    const int fan_in = widths[k];
    const int fan_out = widths[k + 1];
    if (fan_in < 1 || fan_out < 1) throw ValidationError("MLP widths must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    DenseLayer layer;
    layer.weight = rng.uniform_matrix(fan_out, fan_in, bound);
    layer.bias = rng.uniform_matrix(fan_out, 1, bound);
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers), hidden);
}

int Mlp::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int Mlp::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

Matrix Mlp::forward(const Matrix& rows) const {
  if (rows.cols() != input_dim()) {
    throw ValidationError("MLP input width " + std::to_string(rows.cols()) + " != expected " +
                          std::to_string(input_dim()));
  }
  Matrix x = rows;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const DenseLayer& layer = layers_[k];
    Matrix y = x * layer.weight.transpose();
    y.rowwise() += layer.bias.transpose();
    if (k + 1 < layers_.size() && hidden_ == Activation::tanh) y = y.array().tanh().matrix();
    x = std::move(y);
  }
  return x;
}

double Mlp::lipschitz_bound() const {
  double bound = 1.0;
  for (const DenseLayer& layer : layers_) bound *= power_iteration_norm(layer.weight);
  return bound;
}

double power_iteration_norm(const Matrix& w, int iterations, double tolerance) {
  if (w.size() == 0) return 0.0;
  const Matrix gram = w.transpose() * w;
  // Deterministic, generically non-orthogonal start.
  Vector x(gram.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 1.0 + 0.1 * static_cast<double>(i % 7);
  x.normalize();
  if ((gram * x).norm() == 0.0) {
    Eigen::Index best = 0;
    if (gram.colwise().norm().maxCoeff(&best) == 0.0) return 0.0;
    x = gram.col(best).normalized();
  }
  double theta = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector y = gram * x;
    theta = x.dot(y);
    if (theta <= 0.0) return 0.0;
    // Residual stop: the Rayleigh quotient error is at most residual^2 / gap.
    if ((y - theta * x).norm() <= tolerance * theta) break;
    x = y / y.norm();
  }
  return std::sqrt(theta);
}

}  // namespace spectral_aug
