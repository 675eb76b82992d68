#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spectral_aug/linalg.hpp"
#include "spectral_aug/rng.hpp"

namespace spectral_aug {

/// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bijection on {0..n-1}. Node i is sent to mapping[i]; the matching
/// permutation matrix has P(mapping[i], i) = 1.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(int n);

  int size() const { return static_cast<int>(mapping_.size()); }
  int operator[](int i) const { return mapping_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& mapping() const { return mapping_; }

  Permutation inverse() const;
  Matrix matrix() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> mapping_;
};

Permutation random_permutation(int n, Rng& rng);

/// Simple undirected graph on nodes 0..n-1 with optional n x d features.
/// Edges are normalised (u < v), sorted and de-duplicated on construction.
class Graph {
 public:
  Graph() = default;
  Graph(int num_nodes, std::vector<Edge> edges,
        std::optional<Matrix> node_features = std::nullopt);

  int num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::optional<Matrix>& node_features() const { return node_features_; }

  bool has_edge(int u, int v) const;
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency_lists() const;
  Matrix adjacency() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::optional<Matrix> node_features_;
};

/// Reads {"num_nodes": n, "edges": [[u,v],...], "node_features": [[...],...]}.
Graph parse_graph(std::string_view json_text);
std::string serialize_graph(const Graph& g);

/// L = D - A.
Matrix build_laplacian(const Graph& g);

Graph apply_permutation(const Graph& g, const Permutation& p);
/// P * m * P^T for a square matrix.
Matrix apply_permutation(const Matrix& m, const Permutation& p);
/// P * rows: row i of `rows` becomes row p[i].
Matrix permute_rows(const Matrix& rows, const Permutation& p);

int count_components(const Graph& g);
bool is_connected(const Graph& g);

enum class PerturbKind { edge_flip, gaussian_noise };

struct PerturbSpec {
  PerturbKind kind = PerturbKind::edge_flip;
  int count = 1;       // edge_flip
  double sigma = 0.0;  // gaussian_noise
  std::uint64_t seed = 0;

  static PerturbSpec edge_flip(int count, std::uint64_t seed) {
    return {PerturbKind::edge_flip, count, 0.0, seed};
  }
  static PerturbSpec gaussian(double sigma, std::uint64_t seed) {
    return {PerturbKind::gaussian_noise, 0, sigma, seed};
  }
};

/// Edge flips yield a Graph; Laplacian noise yields a symmetric matrix.
using Perturbed = std::variant<Graph, Matrix>;

Perturbed perturb(const Graph& g, const PerturbSpec& spec);
Graph flip_edges(const Graph& g, int count, std::uint64_t seed);
Matrix noisy_laplacian(const Graph& g, double sigma, std::uint64_t seed);

namespace graphs {

Graph empty(int n);
Graph path(int n);
Graph cycle(int n);
Graph complete(int n);
/// Star with `leaves` leaves around centre 0 (leaves + 1 nodes).
Graph star(int leaves);
Graph disjoint_union(const Graph& a, const Graph& b);
/// G(n, p) resampled until connected.
Graph random_connected(int n, double edge_probability, Rng& rng);

}  // namespace graphs

}  // namespace spectral_aug
