#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectral_aug/linalg.hpp"

namespace spectral_aug {

/// ||l - l2||_2 - max_i |lambda_i(l) - lambda_i(l2)|; never negative in
/// exact arithmetic.
double check_weyl(const Matrix& l, const Matrix& l2);

struct DavisKahanCheck {
  std::optional<double> slack;  // rhs - lhs; empty when skipped
  double lhs = 0.0;             // Procrustes distance between the two bases
  double rhs = 0.0;
  double gap = 0.0;
  std::string skip_reason;
};

/// Subspace rotation bound for the eigenvector columns first..last
/// (0-based, inclusive). The gap uses l's eigenvalues with -inf / +inf
/// outside the index range; the check is skipped when no finite gap exists
/// or the gap is at most 1e-8.
DavisKahanCheck check_davis_kahan(const Matrix& l, const Matrix& l2, int first, int last);

/// RHS - ||A_1 ... A_k||_F, where RHS is the Frobenius norm of A_pivot
/// times the spectral norms of every other factor. pivot is 0-based.
double check_product_norm(std::span<const Matrix> chain, int pivot);

struct LemmaSweepConfig {
  int weyl_pairs = 500;
  int davis_kahan_pairs = 200;
  int product_chains = 200;
  int n_max = 10;
  int chain_length_max = 4;
  int chain_size_max = 8;
  std::uint64_t seed = 7;
  double tolerance = 1e-8;  // allowed relative slack below zero

  void validate() const;
};

struct LemmaSweep {
  std::string name;
  int cases = 0;
  int skipped = 0;
  int violations = 0;
  double min_slack = 0.0;           // absolute
  double min_relative_slack = 0.0;  // slack / max(1e-300, scale)
};

/// Weyl, Davis-Kahan (interval = lower block at the largest gap of l) and
/// product-norm sweeps over seeded random instances.
std::vector<LemmaSweep> run_lemma_sweeps(const LemmaSweepConfig& config);

}  // namespace spectral_aug
