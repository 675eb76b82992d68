#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "spectral_aug/encoder.hpp"
#include "spectral_aug/linalg.hpp"
#include "spectral_aug/mlp.hpp"

namespace spectral_aug {

struct SetEncoderConfig {
  int width = 64;
  int hidden_layers = 2;
  int m = 16;     // phi output width (and the DeepSets latent width)
  int d_out = 1;  // psi output width
  std::uint64_t seed = 2;

  void validate() const;
  friend bool operator==(const SetEncoderConfig&, const SetEncoderConfig&) = default;
};

/// Row-wise maps phi: R^{1+m_f} -> R^m and psi: R^m -> R^{d_out}, plus the
/// DeepSets pair (inner, outer) realising the set function g.
struct SetEncoderParams {
  SetEncoderConfig config;
  Mlp phi;
  Mlp psi;
  Mlp g_inner;
  Mlp g_outer;

  /// phi_input: 1 + f output width. g_input: width of each set item row.
  static SetEncoderParams generate(const SetEncoderConfig& config, int phi_input, int g_input);
};

/// Component i = outer( sum over items of inner(row i of item) ).
Vector g_apply(const Mlp& inner, const Mlp& outer, std::span<const Matrix> items);
Vector g_apply(const SetEncoderParams& params, std::span<const Matrix> items);

Matrix phi_apply(const SetEncoderParams& params, const Matrix& x);
Matrix psi_apply(const SetEncoderParams& params, const Matrix& x);

/// Lipschitz constants entering the stability bound.
struct LipschitzLedger {
  double j_phi = 0.0;
  double j_psi = 0.0;
  double j_rho = 0.0;
  double j_f = 0.0;
  std::string method;
};

/// j_phi, j_psi from per-layer power iteration; j_rho from the smoothing
/// family's closed form; j_f from a probe estimate.
LipschitzLedger compute_ledger(const SetEncoderParams& params, double j_rho,
                               const LipschitzEstimate& encoder_estimate);

}  // namespace spectral_aug
