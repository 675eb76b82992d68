#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spectral_aug/linalg.hpp"
#include "spectral_aug/mlp.hpp"

namespace spectral_aug {

enum class EncoderKind { gram_deepset, cartesian_tensor_2 };

std::string to_string(EncoderKind kind);
EncoderKind parse_encoder_kind(const std::string& text);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::gram_deepset;
  int width = 64;
  int depth = 3;
  int out_dim = 8;
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Per-node features from the Gram matrix G = V V^T:
///   row_i -> outer( G_ii, mean_j inner(G_ij) ).
struct GramDeepSetWeights {
  Mlp inner;  // 1 -> width ... -> width
  Mlp outer;  // 1 + width -> ... -> out_dim
};

/// Cartesian tensor network with per-node channels of order 0 (scalars),
/// order 1 (vectors in R^p) and order 2 (p x p matrices). Every layer mixes
/// channels through tensor products and global mean aggregates; the readout
/// only sees full contractions.
struct CartesianWeights {
  // Initial lift of row x_i and the global moments.
  Vector vec_self, vec_mean;      // H_c = a_c x_i + b_c mean(x)
  Vector mat_self, mat_moment;    // T_c = alpha_c x_i x_i^T + beta_c mean_j(x_j x_j^T)
  Matrix scalar_in;               // width x 4 over (|x_i|^2, x_i.mean, |mean|^2, tr M)
  Vector scalar_bias;

  struct Layer {
    Matrix scalar_self;     // width x width
    Matrix scalar_contract; // width x 4*width over per-channel contractions
    Matrix scalar_mean;     // width x width
    Vector scalar_bias;
    Matrix vec_self;        // width x width
    Matrix vec_mean;        // width x width
    Vector vec_tensor;      // coefficient of T_c H_c
    Vector mat_self, mat_outer, mat_mean;
  };
  std::vector<Layer> layers;

  Mlp readout;  // 5*width -> width -> out_dim
};

/// Seeded, immutable parameters of an O(p)-invariant, permutation-equivariant
/// encoder. The parameter count does not depend on p, so one instance serves
/// inputs of any width.
class EncoderParams {
 public:
  using Weights = std::variant<GramDeepSetWeights, CartesianWeights>;

  static EncoderParams generate(const EncoderConfig& config);
  EncoderParams(EncoderConfig config, Weights weights);

  const EncoderConfig& config() const { return config_; }
  const Weights& weights() const { return weights_; }
  int out_dim() const;

 private:
  EncoderConfig config_;
  Weights weights_;
};

/// v: n x p  ->  n x out_dim.
Matrix encode(const EncoderParams& params, const Matrix& v);

struct LipschitzEstimate {
  double j_f = 0.0;
  int probes = 0;
  int used = 0;  // pairs with a non-degenerate denominator
  std::string max_ratio_input;
};

struct ProbePair {
  Matrix x;
  Matrix x_prime;
  std::string label;
};

/// max over pairs of ||f(X) - f(X')||_F / min_Q ||X - X' Q||_F, skipping
/// pairs whose denominator is below 1e-12.
LipschitzEstimate estimate_lipschitz_from_pairs(const EncoderParams& params,
                                                std::span<const ProbePair> pairs);

/// Seeded probes X' = X + eps * D with eps log-spaced over [1e-4, 1e-1] and
/// ||D||_F = 1. X has orthonormal columns scaled by U(0,1) weights when
/// p <= n, mimicking smoothed eigenbases; otherwise Gaussian / sqrt(n).
LipschitzEstimate estimate_lipschitz(const EncoderParams& params, int n, int p, int probes,
                                     std::uint64_t seed);

}  // namespace spectral_aug
