#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spectral_aug/graph.hpp"
#include "spectral_aug/oge.hpp"
#include "spectral_aug/readout.hpp"
#include "spectral_aug/spectral.hpp"
#include "spectral_aug/vanilla.hpp"

namespace spectral_aug {

inline constexpr int kEnumerationCap = 7;

/// Every labeled graph on n nodes, in order of the edge bitmask over pairs
/// (0,1), (0,2), ..., (n-2,n-1). Throws CapabilityError for n > 7.
void for_each_graph(int n, bool connected_only, const std::function<void(const Graph&)>& visit);
std::vector<Graph> enumerate_graphs(int n, bool connected_only);

struct IsoVerdict {
  bool isomorphic = false;
  /// g == apply_permutation(h, *witness) when isomorphic.
  std::optional<Permutation> witness;
};

/// Exhaustive backtracking with degree and colour-refinement pruning.
/// Throws CapabilityError above `cap` nodes.
IsoVerdict is_isomorphic(const Graph& g, const Graph& h, int cap = kBruteForceCap);

enum class Pipeline { vanilla, oge, baseline_wl };

std::string to_string(Pipeline pipeline);
Pipeline parse_pipeline(const std::string& text);

struct StudyConfig {
  int n_min = 1;
  int n_max = 6;
  Pipeline pipeline = Pipeline::vanilla;
  int rounds = 3;
  int decimals = 6;
  int relabelings = 3;  // random relabelings per class for false separations
  int max_exemplars = 10;
  std::uint64_t seed = 5;
  int jobs = 1;
  VanillaConfig vanilla;
  OgeConfig oge;

  void validate() const;
};

struct CollisionExemplar {
  Graph a;
  Graph b;
  std::string digest;
};

struct LevelSummary {
  int n = 0;
  long long labeled_graphs = 0;  // connected labeled graphs enumerated
  int classes = 0;               // isomorphism classes
  long long pairs = 0;           // unordered pairs of distinct classes
  long long collisions = 0;      // of those, pairs with equal fingerprints
  long long relabel_checks = 0;
  long long false_separations = 0;
  std::vector<CollisionExemplar> exemplars;
};

struct NamedPairCheck {
  std::string name;
  bool isomorphic = false;
  bool fingerprints_equal = false;
};

struct StudySummary {
  Pipeline pipeline = Pipeline::vanilla;
  int rounds = 0;
  int decimals = 0;
  std::vector<LevelSummary> levels;
  std::vector<NamedPairCheck> named_pairs;

  long long total_collisions() const;
  long long total_false_separations() const;
};

/// Fingerprint of g under the pipeline (baseline-wl ignores the models).
GraphFingerprint pipeline_fingerprint(const Graph& g, Pipeline pipeline, const VanillaModel* vanilla,
                                      const OgeModel* oge, int rounds, int decimals);

/// Connected isomorphism classes of each n in [n_min, n_max], one
/// representative per class (first in enumeration order).
std::vector<Graph> isomorphism_classes(int n, long long* labeled_count = nullptr);

StudySummary distinguishing_study(const StudyConfig& config);

/// Summary JSON; exemplar graphs are embedded in graph JSON form.
std::string serialize_study(const StudySummary& summary);

}  // namespace spectral_aug
