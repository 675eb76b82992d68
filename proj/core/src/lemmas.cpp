#include "spectral_aug/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectral_aug/error.hpp"
#include "spectral_aug/rng.hpp"
#include "spectral_aug/spectral.hpp"

namespace spectral_aug {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_square(const Matrix& l, const Matrix& l2) {
  if (l.rows() != l.cols() || l2.rows() != l2.cols() || l.rows() != l2.rows()) {
    throw ValidationError("lemma checks need two square matrices of equal size");
  }
}

Matrix random_symmetric(Rng& rng, int n, double scale) {
  const Matrix g = rng.normal_matrix(n, n, scale);
  return (g + g.transpose()) / 2.0;
}

double relative(double slack, double scale) { return slack / std::max(scale, 1e-300); }

void record(LemmaSweep& sweep, double slack, double scale, double tolerance) {
  const double rel = relative(slack, scale);
  if (sweep.cases == 0) {
    sweep.min_slack = slack;
    sweep.min_relative_slack = rel;
  } else {
    sweep.min_slack = std::min(sweep.min_slack, slack);
    sweep.min_relative_slack = std::min(sweep.min_relative_slack, rel);
  }
  ++sweep.cases;
  if (rel < -tolerance) ++sweep.violations;
}

}  // namespace

double check_weyl(const Matrix& l, const Matrix& l2) {
  require_same_square(l, l2);
  const Vector a = eig_sym(l).eigenvalues;
  const Vector b = eig_sym(l2).eigenvalues;
  const double shift = a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
  return spectral_norm(l - l2) - shift;
}

DavisKahanCheck check_davis_kahan(const Matrix& l, const Matrix& l2, int first, int last) {
  require_same_square(l, l2);
  const int n = static_cast<int>(l.rows());
  if (first < 0 || last >= n || first > last) {
    throw ValidationError("Davis-Kahan interval [" + std::to_string(first) + ", " +
                          std::to_string(last) + "] is not a range inside [0, " +
                          std::to_string(n) + ")");
  }
  const Spectrum s = eig_sym(l);
  const Spectrum s2 = eig_sym(l2);
  const double below = first == 0 ? -kInf : s.eigenvalues(first - 1);
  const double above = last == n - 1 ? kInf : s.eigenvalues(last + 1);
  const double gap = std::min(s.eigenvalues(first) - below, above - s.eigenvalues(last));

  DavisKahanCheck check;
  check.gap = gap;
  const int width = last - first + 1;
  check.lhs = procrustes_align(s.vectors.middleCols(first, width),
                               s2.vectors.middleCols(first, width))
                  .distance;
  if (std::isinf(gap)) {
    check.skip_reason = "interval covers the full index range; both gaps are sentinels";
    return check;
  }
  if (gap <= 1e-8) {
    check.skip_reason = "spectral gap " + std::to_string(gap) + " <= 1e-8";
    return check;
  }
  const Matrix diff = l - l2;
  const double numerator =
      std::min(std::sqrt(static_cast<double>(width)) * spectral_norm(diff), diff.norm());
  check.rhs = std::sqrt(8.0) * numerator / gap;
  check.slack = check.rhs - check.lhs;
  return check;
}

double check_product_norm(std::span<const Matrix> chain, int pivot) {
  if (chain.empty()) throw ValidationError("product-norm check needs a non-empty chain");
  if (pivot < 0 || pivot >= static_cast<int>(chain.size())) {
    throw ValidationError("pivot index out of range");
  }
  Matrix product = chain.front();
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (chain[k - 1].cols() != chain[k].rows()) {
      throw ValidationError("matrix chain shapes do not multiply at factor " + std::to_string(k));
    }
    product = product * chain[k];
  }
  double rhs = 1.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    rhs *= static_cast<int>(k) == pivot ? chain[k].norm() : spectral_norm(chain[k]);
  }
  return rhs - product.norm();
}

void LemmaSweepConfig::validate() const {
  if (weyl_pairs < 0 || davis_kahan_pairs < 0 || product_chains < 0) {
    throw ValidationError("sweep sizes must be >= 0");
  }
  if (n_max < 2 || chain_length_max < 1 || chain_size_max < 1) {
    throw ValidationError("sweep dimensions out of range");
  }
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
}

std::vector<LemmaSweep> run_lemma_sweeps(const LemmaSweepConfig& config) {
  config.validate();
  std::vector<LemmaSweep> out;

  LemmaSweep weyl{"weyl"};
  Rng weyl_rng(mix_seed(config.seed, 1));
  for (int k = 0; k < config.weyl_pairs; ++k) {
    const int n = 2 + static_cast<int>(weyl_rng.below(static_cast<std::uint64_t>(config.n_max - 1)));
    const Matrix a = random_symmetric(weyl_rng, n, 1.0);
    // Alternate independent pairs with small perturbations.
    const double scale = k % 2 == 0 ? 1.0 : std::pow(10.0, weyl_rng.uniform(-6.0, -1.0));
    const Matrix b = a + random_symmetric(weyl_rng, n, scale);
    record(weyl, check_weyl(a, b), std::max(1.0, spectral_norm(a - b)), config.tolerance);
  }
  out.push_back(weyl);

  LemmaSweep dk{"davis_kahan"};
  Rng dk_rng(mix_seed(config.seed, 2));
  for (int k = 0; k < config.davis_kahan_pairs; ++k) {
    const int n = 2 + static_cast<int>(dk_rng.below(static_cast<std::uint64_t>(config.n_max - 1)));
    const Matrix a = random_symmetric(dk_rng, n, 1.0);
    const double scale = std::pow(10.0, dk_rng.uniform(-6.0, 0.0));
    const Matrix b = a + random_symmetric(dk_rng, n, scale);
    const Vector lambda = eig_sym(a).eigenvalues;
    int split = 0;
    for (int i = 1; i + 1 < n; ++i) {
      if (lambda(i + 1) - lambda(i) > lambda(split + 1) - lambda(split)) split = i;
    }
    const DavisKahanCheck check = check_davis_kahan(a, b, 0, split);
    if (!check.slack) {
      ++dk.skipped;
      continue;
    }
    record(dk, *check.slack, check.rhs, config.tolerance);
  }
  out.push_back(dk);

  LemmaSweep product{"product_norm"};
  Rng chain_rng(mix_seed(config.seed, 3));
  for (int k = 0; k < config.product_chains; ++k) {
    const int length =
        1 + static_cast<int>(chain_rng.below(static_cast<std::uint64_t>(config.chain_length_max)));
    std::vector<int> dims;
    for (int d = 0; d <= length; ++d) {
      dims.push_back(1 + static_cast<int>(chain_rng.below(static_cast<std::uint64_t>(config.chain_size_max))));
    }
    std::vector<Matrix> chain;
    for (int f = 0; f < length; ++f) chain.push_back(chain_rng.normal_matrix(dims[f], dims[f + 1]));
    const int pivot = static_cast<int>(chain_rng.below(static_cast<std::uint64_t>(length)));
    const double slack = check_product_norm(chain, pivot);
    double rhs = 1.0;
    for (int f = 0; f < length; ++f) rhs *= f == pivot ? chain[f].norm() : spectral_norm(chain[f]);
    record(product, slack, rhs, config.tolerance);
  }
  out.push_back(product);
  return out;
}

}  // namespace spectral_aug
