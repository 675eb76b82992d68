#pragma once

#include <cstdint>
#include <string>

#include "spectral_aug/linalg.hpp"

namespace spectral_aug {

struct AugmentationMeta {
  std::string method;       // "vanilla" or "oge"
  std::string path;         // oge: "repeated" / "grouped"; vanilla: "grouped"
  std::string config_hash;  // 16 hex digits
  std::uint64_t encoder_seed = 0;
  std::uint64_t set_seed = 0;
  double tau_group = 0.0;   // tolerance actually used (0 when not consulted)
  Vector eigenvalues;       // ascending, with repeats
};

/// n x d per-node features.
struct Augmentation {
  Matrix z;
  AugmentationMeta meta;

  int n() const { return static_cast<int>(z.rows()); }
  int d() const { return static_cast<int>(z.cols()); }
};

/// {"n": n, "d": d, "z": [row-major values], "meta": {...}}
std::string serialize_augmentation(const Augmentation& aug);
Augmentation parse_augmentation(const std::string& json_text);

}  // namespace spectral_aug
