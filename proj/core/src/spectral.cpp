#include "spectral_aug/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spectral_aug/error.hpp"

namespace spectral_aug {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kConvergence = 1e-12;
constexpr double kSymmetryTolerance = 1e-10;

double off_diagonal_mass(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Annihilates a(p,q) with a Jacobi rotation, accumulating into v.
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Eigen::Index n = a.rows();

  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

Spectrum eig_sym(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("eig_sym needs a square matrix");
  if (!m.allFinite()) throw ValidationError("eig_sym input has non-finite entries");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, max_abs(m));
  if (n > 0 && max_abs(m - m.transpose()) > kSymmetryTolerance * scale) {
    throw ValidationError("eig_sym input is not symmetric");
  }

  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double threshold = kConvergence * a.norm();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_mass(a) <= threshold) break;
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }
  if (off_diagonal_mass(a) > threshold) {
    throw InternalError("Jacobi sweeps did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  Spectrum s;
  s.eigenvalues.resize(n);
  s.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    s.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return s;
}

double default_group_tolerance(const Spectrum& s) {
  const double lambda_max = s.size() == 0 ? 0.0 : s.eigenvalues.maxCoeff();
  return 1e-6 * std::max(1.0, lambda_max);
}

GroupedSpectrum group_eigenspaces(const Spectrum& s, double tolerance) {
  if (!(tolerance > 0.0)) throw ValidationError("grouping tolerance must be positive");
  GroupedSpectrum grouped;
  grouped.tolerance = tolerance;
  const int n = s.size();
  int start = 0;
  for (int i = 0; i < n; ++i) {
    const bool last = (i + 1 == n) || (s.eigenvalues(i + 1) - s.eigenvalues(i) > tolerance);
    if (!last) continue;
    EigenGroup group;
    group.first = start;
    group.multiplicity = i - start + 1;
    group.eigenvalue = s.eigenvalues.segment(start, group.multiplicity).mean();
    group.vectors = s.vectors.middleCols(start, group.multiplicity);
    grouped.groups.push_back(std::move(group));
    start = i + 1;
  }
  return grouped;
}

ProcrustesResult procrustes_align(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ValidationError("procrustes_align: shape mismatch");
  }
  // max tr(Q^T Y^T X) is attained at Q = U W^T for Y^T X = U S W^T.
  Eigen::JacobiSVD<Matrix> svd(y.transpose() * x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult result;
  result.rotation = svd.matrixU() * svd.matrixV().transpose();
  result.distance = (x - y * result.rotation).norm();
  return result;
}

PermutationMatch match_permutation(const Matrix& l, const Matrix& l2, int cap) {
  if (l.rows() != l.cols() || l2.rows() != l2.cols() || l.rows() != l2.rows()) {
    throw ValidationError("match_permutation: both matrices must be n x n with equal n");
  }
  const int n = static_cast<int>(l.rows());
  if (n > cap) {
    throw CapabilityError("match_permutation: n=" + std::to_string(n) +
                          " exceeds the brute-force cap of " + std::to_string(cap) +
                          "; supply a known permutation (identity mode) instead");
  }
  std::vector<int> mapping(static_cast<std::size_t>(n));
  std::iota(mapping.begin(), mapping.end(), 0);

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_mapping = mapping;
  do {
    // (P l2 P^T)(p[i], p[j]) = l2(i, j)
    double sum = 0.0;
    for (int i = 0; i < n && sum < best; ++i) {
      const int pi = mapping[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        const double d = l(pi, mapping[static_cast<std::size_t>(j)]) - l2(i, j);
        sum += d * d;
      }
    }
    if (sum < best) {
      best = sum;
      best_mapping = mapping;
    }
  } while (std::next_permutation(mapping.begin(), mapping.end()));

  return {Permutation(std::move(best_mapping)), std::sqrt(best)};
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.cols() <= m.rows() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
  const Spectrum s = eig_sym(0.5 * (gram + gram.transpose()));
  return std::sqrt(std::max(0.0, s.eigenvalues.maxCoeff()));
}

}  // namespace spectral_aug
