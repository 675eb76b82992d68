#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectral_aug/error.hpp"
#include "spectral_aug/spectral.hpp"

namespace sa = spectral_aug;
using sa::Graph;
using sa::Matrix;
using sa::Vector;

TEST(EigSym, PathOfTwo) {
  const sa::Spectrum s = sa::eig_sym(sa::build_laplacian(sa::graphs::path(2)));
  EXPECT_NEAR(s.eigenvalues(0), 0.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(1), 2.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s.vectors(0, 0)), r, 1e-14);
  EXPECT_NEAR(s.vectors(0, 0), s.vectors(1, 0), 1e-14);
  EXPECT_NEAR(s.vectors(0, 1), -s.vectors(1, 1), 1e-14);
}

TEST(EigSym, TriangleMatchesOracle) {
  const Matrix l = sa::build_laplacian(sa::graphs::complete(3));
  const sa::Spectrum s = sa::eig_sym(l);
  const Vector ref = oracle::eigenvalues(l);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.eigenvalues(i), ref(i), 1e-12);
}

TEST(EigSym, ZeroMatrix) {
  const sa::Spectrum s = sa::eig_sym(Matrix::Zero(3, 3));
  EXPECT_EQ(s.eigenvalues, Vector::Zero(3));
  EXPECT_LE((s.vectors.transpose() * s.vectors - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EigSym, RejectsAsymmetric) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1e-6;
  EXPECT_THROW(sa::eig_sym(m), sa::ValidationError);
  EXPECT_THROW(sa::eig_sym(Matrix::Zero(2, 3)), sa::ValidationError);
}

TEST(EigSym, RandomSymmetricAgainstOracle) {
  sa::Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const Matrix m = oracle::random_symmetric(rng, n, std::pow(10.0, rng.uniform(-3, 3)));
    const sa::Spectrum s = sa::eig_sym(m);
    const Matrix recon = s.vectors * s.eigenvalues.asDiagonal() * s.vectors.transpose();
    ASSERT_LE((m - recon).norm(), 1e-7 * std::max(m.norm(), 1e-300));
    ASSERT_LE((s.vectors.transpose() * s.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    const Vector ref = oracle::eigenvalues(m);
    for (int i = 0; i < n; ++i) {
      if (i > 0) ASSERT_LE(s.eigenvalues(i - 1), s.eigenvalues(i));
      ASSERT_NEAR(s.eigenvalues(i), ref(i), 1e-10 * std::max(1.0, m.norm()));
    }
  }
}

TEST(EigSym, DeterministicBits) {
  sa::Rng rng(22);
  const Matrix m = oracle::random_symmetric(rng, 9);
  const sa::Spectrum a = sa::eig_sym(m);
  const sa::Spectrum b = sa::eig_sym(m);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(GroupEigenspaces, Triangle) {
  const auto g = sa::group_eigenspaces(sa::eig_sym(sa::build_laplacian(sa::graphs::complete(3))), 1e-6);
  ASSERT_EQ(g.groups.size(), 2u);
  EXPECT_NEAR(g.groups[0].eigenvalue, 0.0, 1e-12);
  EXPECT_EQ(g.groups[0].multiplicity, 1);
  EXPECT_NEAR(g.groups[1].eigenvalue, 3.0, 1e-12);
  EXPECT_EQ(g.groups[1].multiplicity, 2);
  EXPECT_EQ(g.groups[1].first, 1);
}

TEST(GroupEigenspaces, CycleOfFour) {
  const auto g = sa::group_eigenspaces(sa::eig_sym(sa::build_laplacian(sa::graphs::cycle(4))), 1e-6);
  ASSERT_EQ(g.groups.size(), 3u);
  const double values[] = {0, 2, 4};
  const int mult[] = {1, 2, 1};
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(g.groups[j].eigenvalue, values[j], 1e-12);
    EXPECT_EQ(g.groups[j].multiplicity, mult[j]);
  }
}

TEST(GroupEigenspaces, HugeToleranceGivesOneGroup) {
  const sa::Spectrum s = sa::eig_sym(sa::build_laplacian(sa::graphs::cycle(5)));
  const auto g = sa::group_eigenspaces(s, s.eigenvalues.maxCoeff() + 1.0);
  ASSERT_EQ(g.groups.size(), 1u);
  EXPECT_EQ(g.groups[0].multiplicity, 5);
  EXPECT_THROW(sa::group_eigenspaces(s, 0.0), sa::ValidationError);
}

TEST(GroupEigenspaces, InvariantsAndPermutationInvariance) {
  sa::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const Graph g = oracle::random_graph(rng, n, 0.5);
    const sa::Spectrum s = sa::eig_sym(sa::build_laplacian(g));
    const double tau = sa::default_group_tolerance(s);
    EXPECT_DOUBLE_EQ(tau, 1e-6 * std::max(1.0, s.eigenvalues.maxCoeff()));
    const auto grouped = sa::group_eigenspaces(s, tau);
    int total = 0;
    for (std::size_t j = 0; j < grouped.groups.size(); ++j) {
      const auto& grp = grouped.groups[j];
      total += grp.multiplicity;
      const auto block = s.eigenvalues.segment(grp.first, grp.multiplicity);
      EXPECT_LE(block.maxCoeff() - block.minCoeff(), tau);
      if (j > 0) {
        const auto& prev = grouped.groups[j - 1];
        EXPECT_GT(s.eigenvalues(grp.first) - s.eigenvalues(prev.first + prev.multiplicity - 1), tau);
      }
      EXPECT_LE((grp.vectors.transpose() * grp.vectors -
                 Matrix::Identity(grp.multiplicity, grp.multiplicity)).cwiseAbs().maxCoeff(), 1e-8);
    }
    EXPECT_EQ(total, n);

    const auto relabeled = sa::group_eigenspaces(
        sa::eig_sym(sa::build_laplacian(sa::apply_permutation(g, sa::random_permutation(n, rng)))), tau);
    ASSERT_EQ(relabeled.groups.size(), grouped.groups.size());
    for (std::size_t j = 0; j < grouped.groups.size(); ++j) {
      EXPECT_EQ(relabeled.groups[j].multiplicity, grouped.groups[j].multiplicity);
      EXPECT_NEAR(relabeled.groups[j].eigenvalue, grouped.groups[j].eigenvalue, 1e-9);
    }
  }
}

TEST(Procrustes, RecoversExactRotations) {
  sa::Rng rng(24);
  for (int p = 1; p <= 6; ++p) {
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix x = rng.normal_matrix(8, p);
      const Matrix q0 = sa::random_orthogonal(rng, p);
      const auto r = sa::procrustes_align(x, x * q0);
      ASSERT_LE(r.distance, 1e-9);
      ASSERT_LE((r.rotation.transpose() * r.rotation - Matrix::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Procrustes, ZeroTargetGivesNormOfX) {
  sa::Rng rng(25);
  const Matrix x = rng.normal_matrix(5, 3);
  EXPECT_NEAR(sa::procrustes_align(x, Matrix::Zero(5, 3)).distance, x.norm(), 1e-12);
}

TEST(Procrustes, SingleColumnEnumeratesSigns) {
  sa::Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = rng.normal_matrix(6, 1);
    const Matrix y = rng.normal_matrix(6, 1);
    EXPECT_NEAR(sa::procrustes_align(x, y).distance, std::min((x - y).norm(), (x + y).norm()), 1e-12);
  }
}

TEST(Procrustes, MatchesNuclearNormOracleAndBeatsRandomRotations) {
  sa::Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + static_cast<int>(rng.below(5));
    const Matrix x = rng.normal_matrix(7, p);
    const Matrix y = rng.normal_matrix(7, p);
    const auto r = sa::procrustes_align(x, y);
    EXPECT_NEAR(r.distance, oracle::procrustes_distance(x, y), 1e-9);
    EXPECT_NEAR(r.distance, (x - y * r.rotation).norm(), 1e-12);
    for (int k = 0; k < 10; ++k) {
      EXPECT_LE(r.distance, (x - y * sa::random_orthogonal(rng, p)).norm() + 1e-12);
    }
  }
  EXPECT_THROW(sa::procrustes_align(Matrix::Zero(3, 2), Matrix::Zero(3, 1)), sa::ValidationError);
}

TEST(MatchPermutation, KnownRelabeling) {
  sa::Rng rng(28);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const Matrix l = sa::build_laplacian(sa::graphs::random_connected(n, 0.5, rng));
    const sa::Permutation p0 = sa::random_permutation(n, rng);
    const Matrix l2 = sa::apply_permutation(l, p0);
    const auto m = sa::match_permutation(l, l2);
    EXPECT_EQ(m.distance, 0.0);
    EXPECT_EQ((l - sa::apply_permutation(l2, m.permutation)).norm(), 0.0);
  }
}

TEST(MatchPermutation, PathVersusTriangleMatchesEnumeration) {
  const Matrix l = sa::build_laplacian(sa::graphs::path(3));
  const Matrix l2 = sa::build_laplacian(sa::graphs::complete(3));
  const auto m = sa::match_permutation(l, l2);
  EXPECT_GT(m.distance, 0.0);
  EXPECT_NEAR(m.distance, oracle::min_match_distance(l, l2), 1e-12);
  EXPECT_NEAR(m.distance, (l - sa::apply_permutation(l2, m.permutation)).norm(), 1e-12);
}

TEST(MatchPermutation, RandomPairsMatchEnumeration) {
  sa::Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const Matrix l = sa::build_laplacian(oracle::random_graph(rng, n, 0.5));
    const Matrix l2 = sa::build_laplacian(oracle::random_graph(rng, n, 0.5));
    EXPECT_NEAR(sa::match_permutation(l, l2).distance, oracle::min_match_distance(l, l2), 1e-12);
  }
}

TEST(MatchPermutation, SingleNodeAndTieBreakAndCap) {
  Matrix a(1, 1), b(1, 1);
  a << 2.0;
  b << -1.5;
  const auto m = sa::match_permutation(a, b);
  EXPECT_EQ(m.permutation, sa::Permutation::identity(1));
  EXPECT_DOUBLE_EQ(m.distance, 3.5);
  const Matrix k4 = sa::build_laplacian(sa::graphs::complete(4));
  EXPECT_EQ(sa::match_permutation(k4, k4).permutation, sa::Permutation::identity(4));
  const Matrix big = sa::build_laplacian(sa::graphs::path(9));
  EXPECT_THROW(sa::match_permutation(big, big), sa::CapabilityError);
}

TEST(SpectralNorm, MatchesSvd) {
  sa::Rng rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix m = rng.normal_matrix(1 + rng.below(8), 1 + rng.below(8));
    EXPECT_NEAR(sa::spectral_norm(m), oracle::spectral_norm(m), 1e-10 * oracle::spectral_norm(m));
  }
}
