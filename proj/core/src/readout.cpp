#include "spectral_aug/readout.hpp"

#include <algorithm>
#include <cmath>

#include "spectral_aug/error.hpp"
#include "spectral_aug/hash.hpp"

namespace spectral_aug {

namespace {

constexpr std::uint64_t kAugmentedTag = 0x61756720ULL;
constexpr std::uint64_t kPlainTag = 0x776c2020ULL;

std::uint64_t hash_row(std::uint64_t h, const Matrix& m, Eigen::Index row, int decimals) {
  h = hash_combine(h, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    h = hash_combine(h, static_cast<std::uint64_t>(quantize(m(row, k), decimals)));
  }
  return h;
}

std::uint64_t multiset_digest(std::uint64_t h, std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  h = hash_combine(h, values.size());
  for (std::uint64_t v : values) h = hash_combine(h, v);
  return h;
}

}  // namespace

std::string GraphFingerprint::hex() const { return hex64(digest); }

std::int64_t quantize(double x, int decimals) {
  if (decimals < 0 || decimals > 12) throw ValidationError("decimals must lie in [0, 12]");
  const double scaled = x * std::pow(10.0, decimals);
  if (!std::isfinite(scaled) || std::abs(scaled) > 9.0e18) {
    throw ValidationError("value out of range for quantisation");
  }
  const std::int64_t q = std::llround(scaled);
  return q == 0 ? 0 : q;  // folds -0
}

std::vector<std::uint64_t> refine_colors(const Graph& g, std::vector<std::uint64_t> colors,
                                         int rounds) {
  if (rounds < 0) throw ValidationError("WL rounds must be >= 0");
  if (colors.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw ValidationError("initial colour count does not match the node count");
  }
  const auto adjacency = g.adjacency_lists();
  std::vector<std::uint64_t> next(colors.size());
  std::vector<std::uint64_t> neighbours;
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t v = 0; v < colors.size(); ++v) {
      neighbours.clear();
      for (int u : adjacency[v]) neighbours.push_back(colors[static_cast<std::size_t>(u)]);
      next[v] = multiset_digest(colors[v], neighbours);
    }
    colors.swap(next);
  }
  return colors;
}

GraphFingerprint universal_readout(const Graph& g, const Augmentation& aug, int rounds,
                                   int decimals) {
  if (rounds < 0) throw ValidationError("WL rounds must be >= 0");
  if (decimals < 0 || decimals > 12) throw ValidationError("decimals must lie in [0, 12]");
  const int n = g.num_nodes();
  if (aug.n() != n) {
    throw ValidationError("augmentation has " + std::to_string(aug.n()) + " rows for a graph with " +
                          std::to_string(n) + " nodes");
  }
  std::vector<std::uint64_t> colors(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::uint64_t h = hash_row(kAugmentedTag, aug.z, i, decimals);
    if (g.node_features()) h = hash_row(h, *g.node_features(), i, decimals);
    colors[static_cast<std::size_t>(i)] = h;
  }
  colors = refine_colors(g, std::move(colors), rounds);

  std::vector<std::int64_t> lambdas;
  for (Eigen::Index i = 0; i < aug.meta.eigenvalues.size(); ++i) {
    lambdas.push_back(quantize(aug.meta.eigenvalues(i), decimals));
  }
  std::sort(lambdas.begin(), lambdas.end());
  std::uint64_t h = hash_combine(kAugmentedTag, static_cast<std::uint64_t>(n));
  h = hash_combine(h, lambdas.size());
  for (std::int64_t q : lambdas) h = hash_combine(h, static_cast<std::uint64_t>(q));
  return {multiset_digest(h, std::move(colors)), rounds, decimals};
}

GraphFingerprint wl_fingerprint(const Graph& g, int rounds) {
  const int n = g.num_nodes();
  auto colors = refine_colors(g, std::vector<std::uint64_t>(static_cast<std::size_t>(n), kPlainTag),
                              rounds);
  const std::uint64_t h = hash_combine(kPlainTag, static_cast<std::uint64_t>(n));
  return {multiset_digest(h, std::move(colors)), rounds, 0};
}

}  // namespace spectral_aug
