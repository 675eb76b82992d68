#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spectral_aug/iso.hpp"
#include "spectral_aug/lemmas.hpp"
#include "spectral_aug/oge.hpp"
#include "spectral_aug/stability.hpp"
#include "spectral_aug/vanilla.hpp"

namespace spectral_aug::cli {

/// Settings for every command. Loaded from an INI-style document:
///
///   seed = 1
///   jobs = 1
///   [smoothing]        family, delta
///   [oge]              path, tau_group
///   [encoder]          kind, width, depth, out_dim, seed     (OGE f)
///   [set]              width, hidden_layers, m, d_out, seed  (OGE phi/psi)
///   [vanilla]          tau_group, generalized
///   [vanilla_encoder]  as [encoder]
///   [vanilla_set]      as [set]
///   [augment]          method, strict
///   [stability]        experiments, n_min, n_max, edge_probability, flips,
///                      probes, safety_factor, match, diagnose_probes,
///                      contrast, contrast_sigmas, scaling_sigmas
///   [iso]              n_min, n_max, pipeline, rounds, decimals,
///                      relabelings, max_exemplars
///   [lemmas]           weyl_pairs, davis_kahan_pairs, product_chains,
///                      n_max, tolerance
///
/// Unknown sections or keys are rejected.
struct RunConfig {
  std::uint64_t seed = 1;
  int jobs = 1;

  OgeConfig oge;
  VanillaConfig vanilla;

  std::string method = "oge";
  bool strict = true;

  SuiteConfig stability;
  bool contrast = true;
  std::vector<double> contrast_sigmas{1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> scaling_sigmas{1e-5, 1e-4, 1e-3, 1e-2, 1e-1};

  StudyConfig iso;
  LemmaSweepConfig lemmas;

  /// Pushes the root seed, job count and model configs into the
  /// per-command configs.
  void propagate();
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::optional<std::filesystem::path>& path);

}  // namespace spectral_aug::cli
