#pragma once

#include <string>

#include "spectral_aug/augmentation.hpp"
#include "spectral_aug/encoder.hpp"
#include "spectral_aug/graph.hpp"
#include "spectral_aug/set_encoder.hpp"
#include "spectral_aug/spectral.hpp"

namespace spectral_aug {

enum class SmoothingFamily { hat, cosine };

/// Compactly supported smoothing function rho with rho(0) = 1 and
/// rho(x) = 0 for x > delta.
///   hat:    max(0, 1 - x / delta)             J_rho = 1 / delta
///   cosine: (1 + cos(pi x / delta)) / 2 on [0, delta]   J_rho = pi / (2 delta)
struct SmoothingFn {
  SmoothingFamily family = SmoothingFamily::hat;
  double delta = 0.1;

  void validate() const;
  double lipschitz() const;
  friend bool operator==(const SmoothingFn&, const SmoothingFn&) = default;
};

std::string to_string(SmoothingFamily family);
SmoothingFamily parse_smoothing_family(const std::string& text);

/// Throws ValidationError for x < 0.
double rho_eval(const SmoothingFn& s, double x);

enum class OgePath { grouped, repeated };

std::string to_string(OgePath path);
OgePath parse_oge_path(const std::string& text);

struct OgeConfig {
  SmoothingFn smoothing;
  EncoderConfig encoder{EncoderKind::gram_deepset, 64, 3, 8, 1};
  SetEncoderConfig set{64, 2, 16, 1, 2};
  OgePath path = OgePath::repeated;
  double tau_group = 0.0;  // grouped path only; <= 0 selects the default rule

  void validate() const;
};

/// Repeated form: column k is v_k * rho(|lambda_k - lambda_i|), n x n.
Matrix smooth_basis(const Spectrum& s, int i, const SmoothingFn& rho);
/// Grouped form: block k is V_k * rho(|lambda_k - lambda_j|), n x n.
Matrix smooth_basis(const GroupedSpectrum& s, int j, const SmoothingFn& rho);

/// OGE-Aug with a single encoder f shared by all eigenspaces.
///   repeated: Z = psi( sum_i phi([lambda_i 1, f(V_i^smooth)]) ), i over all n
///   grouped:  Z = psi( sum_j mu_j phi([lambda_j 1, f(V_j^smooth)]) )
/// Summation runs in ascending index order.
class OgeModel {
 public:
  explicit OgeModel(OgeConfig config);

  Augmentation augment(const Graph& g) const;
  Augmentation augment(const Matrix& laplacian) const;
  Augmentation augment(const Spectrum& spectrum) const;
  Augmentation augment(const Spectrum& spectrum, OgePath path) const;

  /// Ledger with j_f probed at p = n (f always sees n x n inputs).
  LipschitzLedger ledger(int n, int probes, std::uint64_t seed) const;

  const OgeConfig& config() const { return config_; }
  const EncoderParams& encoder() const { return encoder_; }
  const SetEncoderParams& set_params() const { return set_; }

 private:
  OgeConfig config_;
  EncoderParams encoder_;
  SetEncoderParams set_;
  std::string config_hash_;
};

Augmentation oge_aug(const Graph& g, const OgeConfig& config);

/// n J_psi J_phi [ (sqrt(n) + 2 n J_rho J_f) dl_spec
///                 + 4 * 2^{1/4} J_f sqrt(J_rho) n dl_fro^{1/2} ]
double stability_bound(int n, const LipschitzLedger& ledger, double dl_spec, double dl_fro);

/// The bound at an explicit cutoff delta:
/// n J_psi J_phi [ (sqrt(n) + 2 n J_rho J_f) dl_spec
///                 + J_f (2 n^2 delta J_rho + sqrt(8) dl_fro / delta) ]
double pre_bound(int n, const LipschitzLedger& ledger, double delta, double dl_spec,
                 double dl_fro);

/// Minimiser of pre_bound over delta: sqrt( sqrt(8) dl_fro / (2 n^2 J_rho) ).
double optimal_delta(int n, const LipschitzLedger& ledger, double dl_fro);

}  // namespace spectral_aug
