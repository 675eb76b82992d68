#include <gtest/gtest.h>

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "spectral_aug/error.hpp"
#include "spectral_aug/iso.hpp"

namespace sa = spectral_aug;
using sa::Graph;

TEST(Enumerate, Counts) {
  EXPECT_EQ(sa::enumerate_graphs(1, false).size(), 1u);
  EXPECT_EQ(sa::enumerate_graphs(3, false).size(), 8u);
  EXPECT_EQ(sa::enumerate_graphs(4, false).size(), 64u);
  EXPECT_EQ(sa::enumerate_graphs(4, true).size(), 38u);
  EXPECT_THROW(sa::enumerate_graphs(8, true), sa::CapabilityError);
}

TEST(Enumerate, ConnectedFilterAgreesWithUnionFind) {
  for (int n = 1; n <= 5; ++n) {
    std::size_t connected = 0;
    std::set<std::vector<sa::Edge>> seen;
    sa::for_each_graph(n, false, [&](const Graph& g) {
      EXPECT_TRUE(seen.insert(g.edges()).second);
      if (oracle::union_find_components(g) == 1) ++connected;
    });
    EXPECT_EQ(seen.size(), std::size_t{1} << (n * (n - 1) / 2));
    EXPECT_EQ(sa::enumerate_graphs(n, true).size(), connected);
  }
}

TEST(IsIsomorphic, AgreesWithCanonicalForms) {
  for (int n = 1; n <= 4; ++n) {
    const auto all = sa::enumerate_graphs(n, false);
    std::vector<std::vector<bool>> forms;
    for (const Graph& g : all) forms.push_back(oracle::canonical_form(g));
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a; b < all.size(); ++b) {
        const auto verdict = sa::is_isomorphic(all[a], all[b]);
        ASSERT_EQ(verdict.isomorphic, forms[a] == forms[b]) << "n=" << n << " a=" << a << " b=" << b;
        if (verdict.isomorphic) {
          ASSERT_TRUE(verdict.witness.has_value());
          EXPECT_EQ(all[a], sa::apply_permutation(all[b], *verdict.witness));
        }
      }
    }
  }
}

TEST(IsIsomorphic, RandomPairsAtFive) {
  sa::Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = oracle::random_graph(rng, 5, 0.5);
    const Graph h = oracle::random_graph(rng, 5, 0.5);
    EXPECT_EQ(sa::is_isomorphic(g, h).isomorphic, oracle::canonical_form(g) == oracle::canonical_form(h));
  }
}

TEST(IsIsomorphic, Examples) {
  sa::Rng rng(102);
  const Graph g = sa::graphs::random_connected(8, 0.4, rng);
  const auto verdict = sa::is_isomorphic(g, sa::apply_permutation(g, sa::random_permutation(8, rng)));
  EXPECT_TRUE(verdict.isomorphic);
  EXPECT_FALSE(sa::is_isomorphic(sa::graphs::path(3), sa::graphs::complete(3)).isomorphic);
  const Graph two = sa::graphs::disjoint_union(sa::graphs::cycle(3), sa::graphs::cycle(3));
  EXPECT_FALSE(sa::is_isomorphic(sa::graphs::cycle(6), two).isomorphic);
  EXPECT_FALSE(sa::is_isomorphic(sa::graphs::path(3), sa::graphs::path(4)).isomorphic);
  EXPECT_THROW(sa::is_isomorphic(sa::graphs::cycle(9), sa::graphs::cycle(9)), sa::CapabilityError);
}

TEST(Classes, ConnectedClassCounts) {
  const std::map<int, int> expected{{1, 1}, {2, 1}, {3, 2}, {4, 6}, {5, 21}, {6, 112}};
  for (const auto& [n, count] : expected) {
    long long labeled = 0;
    const auto classes = sa::isomorphism_classes(n, &labeled);
    EXPECT_EQ(static_cast<int>(classes.size()), count) << "n=" << n;
    if (n == 4) EXPECT_EQ(labeled, 38);
  }
}

TEST(Classes, RepresentativesArePairwiseNonIsomorphic) {
  const auto classes = sa::isomorphism_classes(5);
  std::set<std::vector<bool>> forms;
  for (const Graph& g : classes) {
    EXPECT_TRUE(sa::is_connected(g));
    forms.insert(oracle::canonical_form(g));
  }
  EXPECT_EQ(forms.size(), classes.size());
}

TEST(Study, BaselineWlCollidesAndSpectralPipelinesSeparate) {
  sa::StudyConfig c;
  c.n_max = 6;
  c.pipeline = sa::Pipeline::baseline_wl;
  const auto wl = sa::distinguishing_study(c);
  c.pipeline = sa::Pipeline::vanilla;
  const auto vanilla = sa::distinguishing_study(c);
  ASSERT_EQ(wl.levels.size(), 6u);
  EXPECT_GT(wl.total_collisions(), 0);
  EXPECT_EQ(wl.total_false_separations(), 0);
  EXPECT_EQ(vanilla.total_false_separations(), 0);
  EXPECT_LE(vanilla.total_collisions(), wl.total_collisions());
  EXPECT_EQ(wl.levels[5].pairs, 112LL * 111 / 2);
  EXPECT_EQ(wl.levels[5].relabel_checks, 112LL * 3);

  ASSERT_EQ(wl.named_pairs.size(), 1u);
  EXPECT_FALSE(wl.named_pairs[0].isomorphic);
  EXPECT_TRUE(wl.named_pairs[0].fingerprints_equal);
  EXPECT_FALSE(vanilla.named_pairs[0].fingerprints_equal);
}

TEST(Study, DeterministicAndSerializable) {
  sa::StudyConfig c;
  c.n_max = 5;
  c.pipeline = sa::Pipeline::oge;
  const auto a = sa::distinguishing_study(c);
  c.jobs = 3;
  const auto b = sa::distinguishing_study(c);
  EXPECT_EQ(sa::serialize_study(a), sa::serialize_study(b));
  const auto doc = nlohmann::json::parse(sa::serialize_study(a));
  EXPECT_EQ(doc.at("pipeline"), "oge");
  EXPECT_EQ(doc.at("levels").size(), 5u);
  EXPECT_EQ(a.total_false_separations(), 0);
}

TEST(Study, ConfigValidation) {
  sa::StudyConfig c;
  c.n_max = 8;
  EXPECT_THROW(c.validate(), sa::CapabilityError);
  c.n_max = 3;
  c.n_min = 4;
  EXPECT_THROW(c.validate(), sa::ValidationError);
  EXPECT_EQ(sa::parse_pipeline("baseline-wl"), sa::Pipeline::baseline_wl);
  EXPECT_EQ(sa::to_string(sa::Pipeline::baseline_wl), "baseline-wl");
  EXPECT_THROW(sa::parse_pipeline("wl"), sa::ValidationError);
}
