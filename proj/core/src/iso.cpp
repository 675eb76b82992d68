#include "spectral_aug/iso.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "spectral_aug/error.hpp"
#include "spectral_aug/hash.hpp"
#include "spectral_aug/parallel.hpp"

namespace spectral_aug {

namespace {

// Adjacency rows as bitmasks plus stable refinement colours; enough for
// graphs up to kBruteForceCap nodes.
struct Prepared {
  int n = 0;
  std::size_t edges = 0;
  std::array<std::uint16_t, 16> rows{};
  std::vector<std::uint64_t> colors;
  std::uint64_t signature = 0;  // n, edge count and sorted colour multiset
};

Prepared prepare(const Graph& g) {
  Prepared p;
  p.n = g.num_nodes();
  p.edges = g.num_edges();
  for (const Edge& e : g.edges()) {
    p.rows[static_cast<std::size_t>(e.u)] |= static_cast<std::uint16_t>(1u << e.v);
    p.rows[static_cast<std::size_t>(e.v)] |= static_cast<std::uint16_t>(1u << e.u);
  }
  // n rounds always reach the stable partition.
  p.colors = refine_colors(g, std::vector<std::uint64_t>(static_cast<std::size_t>(p.n), 1), p.n);
  std::vector<std::uint64_t> sorted = p.colors;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(p.n), p.edges);
  for (std::uint64_t c : sorted) h = hash_combine(h, c);
  p.signature = h;
  return p;
}

// Maps g-node order[depth] onto a compatible unused h-node.
bool extend(const Prepared& g, const Prepared& h, const std::vector<int>& order, std::size_t depth,
            std::vector<int>& to_h, std::uint16_t used) {
  if (depth == order.size()) return true;
  const int v = order[depth];
  for (int w = 0; w < h.n; ++w) {
    if (used & (1u << w)) continue;
    if (g.colors[static_cast<std::size_t>(v)] != h.colors[static_cast<std::size_t>(w)]) continue;
    bool consistent = true;
    for (std::size_t k = 0; k < depth && consistent; ++k) {
      const int u = order[k];
      const bool in_g = (g.rows[static_cast<std::size_t>(v)] >> u) & 1u;
      const bool in_h = (h.rows[static_cast<std::size_t>(w)] >> to_h[static_cast<std::size_t>(u)]) & 1u;
      consistent = in_g == in_h;
    }
    if (!consistent) continue;
    to_h[static_cast<std::size_t>(v)] = w;
    if (extend(g, h, order, depth + 1, to_h, static_cast<std::uint16_t>(used | (1u << w)))) {
      return true;
    }
  }
  return false;
}

std::optional<Permutation> find_isomorphism(const Prepared& g, const Prepared& h) {
  if (g.signature != h.signature || g.n != h.n || g.edges != h.edges) return std::nullopt;
  // Rarest colours first, then by index.
  std::unordered_map<std::uint64_t, int> class_size;
  for (std::uint64_t c : g.colors) ++class_size[c];
  std::vector<int> order(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return class_size[g.colors[static_cast<std::size_t>(a)]] <
           class_size[g.colors[static_cast<std::size_t>(b)]];
  });
  std::vector<int> to_h(static_cast<std::size_t>(g.n), -1);
  if (!extend(g, h, order, 0, to_h, 0)) return std::nullopt;
  // apply_permutation(h, p) sends h-node w to p[w]; we need p = to_h^{-1}.
  std::vector<int> mapping(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) mapping[static_cast<std::size_t>(to_h[static_cast<std::size_t>(v)])] = v;
  return Permutation(std::move(mapping));
}

bool bitmask_connected(int n, const std::array<std::uint16_t, 16>& rows) {
  std::uint32_t seen = 1;
  std::uint32_t frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int v = 0; v < n; ++v) {
      if (frontier & (1u << v)) next |= rows[static_cast<std::size_t>(v)];
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << n) - 1;
}

void require_cap(int n, int cap, const char* what) {
  if (n > cap) {
    throw CapabilityError(std::string(what) + " supports n <= " + std::to_string(cap) + ", got n=" +
                          std::to_string(n));
  }
}

}  // namespace

void for_each_graph(int n, bool connected_only, const std::function<void(const Graph&)>& visit) {
  if (n < 1) throw ValidationError("enumeration needs n >= 1");
  require_cap(n, kEnumerationCap, "graph enumeration");
  std::vector<Edge> pairs;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
  }
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  std::vector<Edge> edges;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::array<std::uint16_t, 16> rows{};
    edges.clear();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!((mask >> k) & 1u)) continue;
      const Edge& e = pairs[k];
      edges.push_back(e);
      rows[static_cast<std::size_t>(e.u)] |= static_cast<std::uint16_t>(1u << e.v);
      rows[static_cast<std::size_t>(e.v)] |= static_cast<std::uint16_t>(1u << e.u);
    }
    if (connected_only && !bitmask_connected(n, rows)) continue;
    visit(Graph(n, edges));
  }
}

std::vector<Graph> enumerate_graphs(int n, bool connected_only) {
  std::vector<Graph> out;
  for_each_graph(n, connected_only, [&](const Graph& g) { out.push_back(g); });
  return out;
}

IsoVerdict is_isomorphic(const Graph& g, const Graph& h, int cap) {
  if (g.num_nodes() != h.num_nodes()) return {};
  require_cap(g.num_nodes(), std::min(cap, kBruteForceCap), "isomorphism search");
  auto witness = find_isomorphism(prepare(g), prepare(h));
  if (!witness) return {};
  if (!(g == apply_permutation(h, *witness))) {
    throw InternalError("isomorphism witness failed verification");
  }
  return {true, std::move(witness)};
}

std::string to_string(Pipeline pipeline) {
  switch (pipeline) {
    case Pipeline::vanilla:
      return "vanilla";
    case Pipeline::oge:
      return "oge";
    case Pipeline::baseline_wl:
      return "baseline-wl";
  }
  throw InternalError("unknown pipeline");
}

Pipeline parse_pipeline(const std::string& text) {
  if (text == "vanilla") return Pipeline::vanilla;
  if (text == "oge") return Pipeline::oge;
  if (text == "baseline-wl") return Pipeline::baseline_wl;
  throw ValidationError("unknown pipeline '" + text + "' (expected vanilla, oge or baseline-wl)");
}

void StudyConfig::validate() const {
  if (n_min < 1 || n_max < n_min) throw ValidationError("study needs 1 <= n_min <= n_max");
  require_cap(n_max, kEnumerationCap, "distinguishing study");
  if (rounds < 0) throw ValidationError("WL rounds must be >= 0");
  if (decimals < 0 || decimals > 12) throw ValidationError("decimals must lie in [0, 12]");
  if (relabelings < 0 || max_exemplars < 0) throw ValidationError("counts must be >= 0");
  if (pipeline == Pipeline::vanilla) vanilla.validate();
  if (pipeline == Pipeline::oge) oge.validate();
}

long long StudySummary::total_collisions() const {
  long long total = 0;
  for (const LevelSummary& level : levels) total += level.collisions;
  return total;
}

long long StudySummary::total_false_separations() const {
  long long total = 0;
  for (const LevelSummary& level : levels) total += level.false_separations;
  return total;
}

GraphFingerprint pipeline_fingerprint(const Graph& g, Pipeline pipeline, const VanillaModel* vanilla,
                                      const OgeModel* oge, int rounds, int decimals) {
  switch (pipeline) {
    case Pipeline::vanilla:
      if (!vanilla) throw ValidationError("vanilla pipeline needs a model");
      return universal_readout(g, vanilla->augment(g), rounds, decimals);
    case Pipeline::oge:
      if (!oge) throw ValidationError("oge pipeline needs a model");
      return universal_readout(g, oge->augment(g), rounds, decimals);
    case Pipeline::baseline_wl:
      return wl_fingerprint(g, rounds);
  }
  throw InternalError("unknown pipeline");
}

std::vector<Graph> isomorphism_classes(int n, long long* labeled_count) {
  std::vector<Graph> reps;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  std::vector<Prepared> prepared;
  long long labeled = 0;
  for_each_graph(n, true, [&](const Graph& g) {
    ++labeled;
    Prepared p = prepare(g);
    std::vector<std::size_t>& bucket = buckets[p.signature];
    for (std::size_t idx : bucket) {
      if (find_isomorphism(prepared[idx], p)) return;
    }
    bucket.push_back(reps.size());
    reps.push_back(g);
    prepared.push_back(std::move(p));
  });
  if (labeled_count) *labeled_count = labeled;
  return reps;
}

StudySummary distinguishing_study(const StudyConfig& config) {
  config.validate();
  std::optional<VanillaModel> vanilla;
  std::optional<OgeModel> oge;
  if (config.pipeline == Pipeline::vanilla) vanilla.emplace(config.vanilla);
  if (config.pipeline == Pipeline::oge) oge.emplace(config.oge);
  const VanillaModel* vm = vanilla ? &*vanilla : nullptr;
  const OgeModel* om = oge ? &*oge : nullptr;
  auto fingerprint = [&](const Graph& g) {
    return pipeline_fingerprint(g, config.pipeline, vm, om, config.rounds, config.decimals);
  };

  StudySummary summary;
  summary.pipeline = config.pipeline;
  summary.rounds = config.rounds;
  summary.decimals = config.decimals;

  for (int n = config.n_min; n <= config.n_max; ++n) {
    LevelSummary level;
    level.n = n;
    const std::vector<Graph> classes = isomorphism_classes(n, &level.labeled_graphs);
    level.classes = static_cast<int>(classes.size());
    level.pairs = static_cast<long long>(classes.size()) * (static_cast<long long>(classes.size()) - 1) / 2;

    std::vector<std::uint64_t> digests(classes.size());
    std::vector<int> separations(classes.size(), 0);
    parallel_for(config.jobs, classes.size(), [&](std::size_t c) {
      digests[c] = fingerprint(classes[c]).digest;
      Rng rng(mix_seed(config.seed, hash_combine(static_cast<std::uint64_t>(n), c)));
      for (int r = 0; r < config.relabelings; ++r) {
        const Graph relabeled = apply_permutation(classes[c], random_permutation(n, rng));
        if (fingerprint(relabeled).digest != digests[c]) ++separations[c];
      }
    });
    level.relabel_checks = static_cast<long long>(classes.size()) * config.relabelings;
    for (int s : separations) level.false_separations += s;

    std::map<std::uint64_t, std::vector<std::size_t>> by_digest;
    for (std::size_t c = 0; c < classes.size(); ++c) by_digest[digests[c]].push_back(c);
    std::vector<std::pair<std::size_t, std::size_t>> colliding;
    for (const auto& [digest, members] : by_digest) {
      const auto k = static_cast<long long>(members.size());
      level.collisions += k * (k - 1) / 2;
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) colliding.emplace_back(members[a], members[b]);
      }
    }
    std::sort(colliding.begin(), colliding.end());
    for (const auto& [a, b] : colliding) {
      if (static_cast<int>(level.exemplars.size()) >= config.max_exemplars) break;
      level.exemplars.push_back({classes[a], classes[b], hex64(digests[a])});
    }
    summary.levels.push_back(std::move(level));
  }

  const Graph c6 = graphs::cycle(6);
  const Graph two_c3 = graphs::disjoint_union(graphs::cycle(3), graphs::cycle(3));
  summary.named_pairs.push_back({"C6 vs 2xC3", is_isomorphic(c6, two_c3).isomorphic,
                                 fingerprint(c6) == fingerprint(two_c3)});
  return summary;
}

std::string serialize_study(const StudySummary& summary) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["pipeline"] = to_string(summary.pipeline);
  doc["rounds"] = summary.rounds;
  doc["decimals"] = summary.decimals;
  ordered_json levels = ordered_json::array();
  for (const LevelSummary& level : summary.levels) {
    ordered_json exemplars = ordered_json::array();
    for (const CollisionExemplar& e : level.exemplars) {
      exemplars.push_back({{"digest", e.digest},
                           {"a", ordered_json::parse(serialize_graph(e.a))},
                           {"b", ordered_json::parse(serialize_graph(e.b))}});
    }
    levels.push_back({{"n", level.n},
                      {"labeled_graphs", level.labeled_graphs},
                      {"classes", level.classes},
                      {"pairs", level.pairs},
                      {"collisions", level.collisions},
                      {"collision_fraction",
                       level.pairs == 0 ? 0.0 : static_cast<double>(level.collisions) / level.pairs},
                      {"relabel_checks", level.relabel_checks},
                      {"false_separations", level.false_separations},
                      {"exemplars", std::move(exemplars)}});
  }
  doc["levels"] = std::move(levels);
  ordered_json named = ordered_json::array();
  for (const NamedPairCheck& check : summary.named_pairs) {
    named.push_back({{"name", check.name},
                     {"isomorphic", check.isomorphic},
                     {"fingerprints_equal", check.fingerprints_equal}});
  }
  doc["named_pairs"] = std::move(named);
  doc["total_collisions"] = summary.total_collisions();
  doc["total_false_separations"] = summary.total_false_separations();
  return doc.dump(2);
}

}  // namespace spectral_aug
