#pragma once

#include <vector>

#include "spectral_aug/graph.hpp"
#include "spectral_aug/linalg.hpp"

namespace spectral_aug {

/// Ascending eigenvalues (with repeats) and orthonormal eigenvector columns;
/// column i of `vectors` pairs with eigenvalues[i].
struct Spectrum {
  Vector eigenvalues;
  Matrix vectors;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// One eigenspace: representative eigenvalue, multiplicity, the index of its
/// first column in the parent Spectrum, and its n x multiplicity basis.
struct EigenGroup {
  double eigenvalue = 0.0;
  int multiplicity = 0;
  int first = 0;
  Matrix vectors;
};

struct GroupedSpectrum {
  std::vector<EigenGroup> groups;
  double tolerance = 0.0;
};

/// Symmetric eigendecomposition by cyclic Jacobi sweeps. Converges when the
/// off-diagonal Frobenius mass drops to 1e-12 * ||m||_F. Rejects inputs that
/// are asymmetric beyond 1e-10 (scaled by max(1, ||m||_max)).
Spectrum eig_sym(const Matrix& m);

/// 1e-6 * max(1, lambda_max).
double default_group_tolerance(const Spectrum& s);

/// Greedy left-to-right grouping: a new group starts whenever consecutive
/// eigenvalues differ by more than `tolerance`. The representative
/// eigenvalue is the group mean.
GroupedSpectrum group_eigenspaces(const Spectrum& s, double tolerance);

struct ProcrustesResult {
  Matrix rotation;  // p x p orthogonal, reflections allowed
  double distance = 0.0;
};

/// argmin over Q in O(p) of ||x - y Q||_F.
ProcrustesResult procrustes_align(const Matrix& x, const Matrix& y);

struct PermutationMatch {
  Permutation permutation;
  double distance = 0.0;
};

inline constexpr int kBruteForceCap = 8;

/// Exhaustive argmin over S_n of ||l - P l2 P^T||_F. Ties resolve to the
/// lexicographically smallest mapping.
PermutationMatch match_permutation(const Matrix& l, const Matrix& l2, int cap = kBruteForceCap);

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace spectral_aug
