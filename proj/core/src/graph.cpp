#include "spectral_aug/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spectral_aug/error.hpp"

namespace spectral_aug {

namespace {

using json = nlohmann::json;

std::string edge_text(int u, int v) {
  std::ostringstream os;
  os << "[" << u << "," << v << "]";
  return os.str();
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  std::vector<char> seen(mapping_.size(), 0);
  for (int target : mapping_) {
    if (target < 0 || static_cast<std::size_t>(target) >= mapping_.size() ||
        seen[static_cast<std::size_t>(target)]) {
      throw ValidationError("permutation mapping is not a bijection on 0..n-1");
    }
    seen[static_cast<std::size_t>(target)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> mapping(static_cast<std::size_t>(n));
  std::iota(mapping.begin(), mapping.end(), 0);
  return Permutation(std::move(mapping));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    inv[static_cast<std::size_t>(mapping_[i])] = static_cast<int>(i);
  }
  return Permutation(std::move(inv));
}

Matrix Permutation::matrix() const {
  const int n = size();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p((*this)[i], i) = 1.0;
  return p;
}

Permutation random_permutation(int n, Rng& rng) {
  std::vector<int> mapping(static_cast<std::size_t>(n));
  std::iota(mapping.begin(), mapping.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(mapping[static_cast<std::size_t>(i)], mapping[static_cast<std::size_t>(j)]);
  }
  return Permutation(std::move(mapping));
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(int num_nodes, std::vector<Edge> edges, std::optional<Matrix> node_features)
    : num_nodes_(num_nodes), edges_(std::move(edges)), node_features_(std::move(node_features)) {
  if (num_nodes_ < 1) throw ValidationError("graph must have at least one node");
  for (Edge& e : edges_) {
    for (int endpoint : {e.u, e.v}) {
      if (endpoint >= num_nodes_) {
        throw ValidationError("edge " + edge_text(e.u, e.v) + ": index " +
                              std::to_string(endpoint) + " ≥ n (n=" +
                              std::to_string(num_nodes_) + ")");
      }
      if (endpoint < 0) {
        throw ValidationError("edge " + edge_text(e.u, e.v) + ": negative index");
      }
    }
    if (e.u == e.v) throw ValidationError("edge " + edge_text(e.u, e.v) + ": self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  if (node_features_) {
    if (node_features_->rows() != num_nodes_) {
      throw ValidationError("node_features must have one row per node");
    }
    if (!node_features_->allFinite()) throw ValidationError("node_features must be finite");
  }
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(num_nodes_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes_));
  for (const Edge& e : edges_) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(num_nodes_, num_nodes_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_nodes_ != b.num_nodes_ || a.edges_ != b.edges_) return false;
  if (a.node_features_.has_value() != b.node_features_.has_value()) return false;
  if (!a.node_features_) return true;
  return a.node_features_->rows() == b.node_features_->rows() &&
         a.node_features_->cols() == b.node_features_->cols() &&
         *a.node_features_ == *b.node_features_;
}

// ---------------------------------------------------------------------------
// JSON

Graph parse_graph(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("graph document must be a JSON object");

  auto num_nodes_it = doc.find("num_nodes");
  if (num_nodes_it == doc.end() || !num_nodes_it->is_number_integer()) {
    throw ValidationError("graph document needs integer field \"num_nodes\"");
  }
  const auto n = num_nodes_it->get<long long>();
  if (n < 1 || n > (1 << 20)) throw ValidationError("\"num_nodes\" must be >= 1");

  auto edges_it = doc.find("edges");
  if (edges_it == doc.end() || !edges_it->is_array()) {
    throw ValidationError("graph document needs array field \"edges\"");
  }
  std::vector<Edge> edges;
  edges.reserve(edges_it->size());
  for (const json& item : *edges_it) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
        !item[1].is_number_integer()) {
      throw ValidationError("every edge must be a 2-element integer array, got " + item.dump());
    }
    const auto u = item[0].get<long long>();
    const auto v = item[1].get<long long>();
    for (long long endpoint : {u, v}) {
      if (endpoint < 0) throw ValidationError("edge " + item.dump() + ": negative index");
      if (endpoint >= n) {
        throw ValidationError("edge " + item.dump() + ": index " + std::to_string(endpoint) +
                              " ≥ n (n=" + std::to_string(n) + ")");
      }
    }
    if (u == v) throw ValidationError("edge " + item.dump() + ": self-loop");
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }

  std::optional<Matrix> features;
  if (auto feat_it = doc.find("node_features"); feat_it != doc.end() && !feat_it->is_null()) {
    if (!feat_it->is_array() || static_cast<long long>(feat_it->size()) != n) {
      throw ValidationError("\"node_features\" must have num_nodes rows");
    }
    const std::size_t width = (*feat_it)[0].is_array() ? (*feat_it)[0].size() : 0;
    Matrix x(n, static_cast<Eigen::Index>(width));
    for (long long i = 0; i < n; ++i) {
      const json& row = (*feat_it)[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != width) {
        throw ValidationError("\"node_features\" rows must be equal-length arrays");
      }
      for (std::size_t j = 0; j < width; ++j) {
        if (!row[j].is_number()) throw ValidationError("\"node_features\" entries must be numbers");
        x(i, static_cast<Eigen::Index>(j)) = row[j].get<double>();
      }
    }
    features = std::move(x);
  }
  return Graph(static_cast<int>(n), std::move(edges), std::move(features));
}

std::string serialize_graph(const Graph& g) {
  json doc;
  doc["num_nodes"] = g.num_nodes();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  doc["edges"] = std::move(edges);
  if (g.node_features()) {
    const Matrix& x = *g.node_features();
    json rows = json::array();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
      rows.push_back(std::move(row));
    }
    doc["node_features"] = std::move(rows);
  }
  return doc.dump();
}

// ---------------------------------------------------------------------------
// Laplacian and relabelling

Matrix build_laplacian(const Graph& g) {
  const int n = g.num_nodes();
  Matrix l = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    l(e.u, e.v) -= 1.0;
    l(e.v, e.u) -= 1.0;
    l(e.u, e.u) += 1.0;
    l(e.v, e.v) += 1.0;
  }
  return l;
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
  if (p.size() != g.num_nodes()) {
    throw ValidationError("permutation length " + std::to_string(p.size()) +
                          " does not match graph size " + std::to_string(g.num_nodes()));
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({p[e.u], p[e.v]});
  std::optional<Matrix> features;
  if (g.node_features()) features = permute_rows(*g.node_features(), p);
  return Graph(g.num_nodes(), std::move(edges), std::move(features));
}

Matrix apply_permutation(const Matrix& m, const Permutation& p) {
  if (m.rows() != m.cols() || m.rows() != p.size()) {
    throw ValidationError("permutation length does not match matrix size");
  }
  const int n = p.size();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(p[i], p[j]) = m(i, j);
  return out;
}

Matrix permute_rows(const Matrix& rows, const Permutation& p) {
  if (rows.rows() != p.size()) throw ValidationError("permutation length does not match row count");
  Matrix out(rows.rows(), rows.cols());
  for (int i = 0; i < p.size(); ++i) out.row(p[i]) = rows.row(i);
  return out;
}

int count_components(const Graph& g) {
  UnionFind uf(g.num_nodes());
  int components = g.num_nodes();
  for (const Edge& e : g.edges()) {
    if (uf.unite(e.u, e.v)) --components;
  }
  return components;
}

bool is_connected(const Graph& g) { return count_components(g) == 1; }

// ---------------------------------------------------------------------------
// Perturbations

Graph flip_edges(const Graph& g, int count, std::uint64_t seed) {
  const long long n = g.num_nodes();
  const long long pairs = n * (n - 1) / 2;
  if (count < 1) throw ValidationError("edge-flip count must be >= 1");
  if (count > pairs) {
    throw ValidationError("edge-flip count " + std::to_string(count) + " exceeds the " +
                          std::to_string(pairs) + " node pairs of the graph");
  }
  std::vector<Edge> all_pairs;
  all_pairs.reserve(static_cast<std::size_t>(pairs));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all_pairs.push_back({u, v});

  // Partial Fisher-Yates: the first `count` slots are a uniform sample
  // without replacement.
  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    const auto j = static_cast<std::size_t>(k) +
                   static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(pairs - k)));
    std::swap(all_pairs[static_cast<std::size_t>(k)], all_pairs[j]);
  }
  std::vector<Edge> flips(all_pairs.begin(), all_pairs.begin() + count);
  std::sort(flips.begin(), flips.end());

  std::vector<Edge> result;
  std::set_symmetric_difference(g.edges().begin(), g.edges().end(), flips.begin(), flips.end(),
                                std::back_inserter(result));
  return Graph(g.num_nodes(), std::move(result), g.node_features());
}

Matrix noisy_laplacian(const Graph& g, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("noise sigma must be finite and non-negative");
  }
  Matrix l = build_laplacian(g);
  if (sigma == 0.0) return l;
  Rng rng(seed);
  const Matrix e = rng.normal_matrix(l.rows(), l.cols(), sigma);
  l += 0.5 * (e + e.transpose());
  return l;
}

Perturbed perturb(const Graph& g, const PerturbSpec& spec) {
  switch (spec.kind) {
    case PerturbKind::edge_flip:
      return flip_edges(g, spec.count, spec.seed);
    case PerturbKind::gaussian_noise:
      return noisy_laplacian(g, spec.sigma, spec.seed);
  }
  throw InternalError("unknown perturbation kind");
}

// ---------------------------------------------------------------------------
// Named families

namespace graphs {

Graph empty(int n) { return Graph(n, {}); }

Graph path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph cycle(int n) {
  if (n < 3) throw ValidationError("cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

Graph complete(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph star(int leaves) {
  std::vector<Edge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return Graph(leaves + 1, std::move(edges));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  const int shift = a.num_nodes();
  for (const Edge& e : b.edges()) edges.push_back({e.u + shift, e.v + shift});
  return Graph(a.num_nodes() + b.num_nodes(), std::move(edges));
}

Graph random_connected(int n, double edge_probability, Rng& rng) {
  for (;;) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.uniform(0.0, 1.0) < edge_probability) edges.push_back({u, v});
    Graph g(n, std::move(edges));
    if (is_connected(g)) return g;
  }
}

}  // namespace graphs

}  // namespace spectral_aug
