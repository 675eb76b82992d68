#pragma once

#include <vector>

#include "spectral_aug/augmentation.hpp"
#include "spectral_aug/encoder.hpp"
#include "spectral_aug/graph.hpp"
#include "spectral_aug/set_encoder.hpp"
#include "spectral_aug/spectral.hpp"

namespace spectral_aug {

struct VanillaConfig {
  EncoderConfig encoder{EncoderKind::gram_deepset, 64, 3, 1, 11};
  SetEncoderConfig set{64, 2, 16, 1, 12};
  double tau_group = 0.0;    // <= 0 selects default_group_tolerance
  bool generalized = false;  // items of width 2 + encoder.out_dim instead of 3

  void validate() const;
};

/// Vanilla OGE-Aug: every eigenspace j contributes the item
/// concat[mu_j 1, lambda_j 1, f_{mu_j}(V_j)] and the DeepSets g pools the
/// multiset row by row. Output width is 1.
class VanillaModel {
 public:
  explicit VanillaModel(VanillaConfig config);

  Augmentation augment(const Graph& g) const;
  Augmentation augment(const Matrix& laplacian) const;
  /// Uses the given basis as-is (for basis-invariance checks).
  Augmentation augment(const Spectrum& spectrum) const;

  /// f_p; parameters derive from the encoder seed mixed with p.
  EncoderParams encoder_for(int p) const;

  const VanillaConfig& config() const { return config_; }
  const SetEncoderParams& set_params() const { return set_; }

 private:
  static constexpr int kCachedDims = 16;

  VanillaConfig config_;
  std::vector<EncoderParams> cached_;  // f_1 .. f_kCachedDims
  SetEncoderParams set_;
  std::string config_hash_;
};

Augmentation vanilla_aug(const Graph& g, const VanillaConfig& config);

}  // namespace spectral_aug
