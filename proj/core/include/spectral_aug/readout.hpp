#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectral_aug/augmentation.hpp"
#include "spectral_aug/graph.hpp"

namespace spectral_aug {

/// Permutation-invariant digest of a (graph, augmentation) pair.
struct GraphFingerprint {
  std::uint64_t digest = 0;
  int rounds = 0;
  int decimals = 0;

  std::string hex() const;
  friend bool operator==(const GraphFingerprint&, const GraphFingerprint&) = default;
};

/// Rounds x * 10^decimals to the nearest integer.
std::int64_t quantize(double x, int decimals);

/// `rounds` iterations of colour refinement: a node's next colour hashes its
/// colour with the sorted multiset of its neighbours' colours.
std::vector<std::uint64_t> refine_colors(const Graph& g, std::vector<std::uint64_t> colors,
                                         int rounds);

/// WL refinement seeded by the quantised augmentation rows (and node
/// features when present). The digest hashes n, the sorted quantised
/// eigenvalue list and the sorted final colour multiset.
GraphFingerprint universal_readout(const Graph& g, const Augmentation& aug, int rounds,
                                   int decimals);

/// Plain 1-WL from uniform initial colours; no spectral information.
GraphFingerprint wl_fingerprint(const Graph& g, int rounds);

}  // namespace spectral_aug
