#include "spectral_aug/oge.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spectral_aug/error.hpp"
#include "spectral_aug/hash.hpp"

namespace spectral_aug {

namespace {

std::string describe(const OgeConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "oge;" << to_string(c.smoothing.family) << ';' << c.smoothing.delta << ';'
      << to_string(c.encoder.kind) << ';' << c.encoder.width << ';' << c.encoder.depth << ';'
      << c.encoder.out_dim << ';' << c.encoder.seed << ';' << c.set.width << ';'
      << c.set.hidden_layers << ';' << c.set.m << ';' << c.set.d_out << ';' << c.set.seed << ';'
      << to_string(c.path) << ';' << c.tau_group;
  return out.str();
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite and >= 0");
  }
}

void check_bound_inputs(int n, const LipschitzLedger& ledger, double dl_spec, double dl_fro) {
  if (n < 1) throw ValidationError("n must be >= 1");
  require_nonnegative(ledger.j_phi, "j_phi");
  require_nonnegative(ledger.j_psi, "j_psi");
  require_nonnegative(ledger.j_rho, "j_rho");
  require_nonnegative(ledger.j_f, "j_f");
  require_nonnegative(dl_spec, "dl_spec");
  require_nonnegative(dl_fro, "dl_fro");
  if (dl_spec > dl_fro + 1e-12 * std::max(1.0, dl_fro)) {
    throw ValidationError("dl_spec exceeds dl_fro");
  }
}

// Spectral part shared by both bounds: (sqrt(n) + 2 n J_rho J_f) dl_spec.
double spectral_term(double n, const LipschitzLedger& l, double dl_spec) {
  return (std::sqrt(n) + 2.0 * n * l.j_rho * l.j_f) * dl_spec;
}

}  // namespace

void SmoothingFn::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("smoothing delta must be > 0");
}

double SmoothingFn::lipschitz() const {
  validate();
  switch (family) {
    case SmoothingFamily::hat:
      return 1.0 / delta;
    case SmoothingFamily::cosine:
      return std::numbers::pi / (2.0 * delta);
  }
  throw InternalError("unknown smoothing family");
}

std::string to_string(SmoothingFamily family) {
  return family == SmoothingFamily::hat ? "hat" : "cosine";
}

SmoothingFamily parse_smoothing_family(const std::string& text) {
  if (text == "hat") return SmoothingFamily::hat;
  if (text == "cosine") return SmoothingFamily::cosine;
  throw ValidationError("unknown smoothing family '" + text +
                        "' (expected hat or cosine; non-compact families are not supported)");
}

double rho_eval(const SmoothingFn& s, double x) {
  s.validate();
  if (!(x >= 0.0)) throw ValidationError("rho is defined on x >= 0");
  if (x >= s.delta) return 0.0;
  switch (s.family) {
    case SmoothingFamily::hat:
      return 1.0 - x / s.delta;
    case SmoothingFamily::cosine:
      return 0.5 * (1.0 + std::cos(std::numbers::pi * x / s.delta));
  }
  throw InternalError("unknown smoothing family");
}

std::string to_string(OgePath path) { return path == OgePath::grouped ? "grouped" : "repeated"; }

OgePath parse_oge_path(const std::string& text) {
  if (text == "grouped") return OgePath::grouped;
  if (text == "repeated") return OgePath::repeated;
  throw ValidationError("unknown OGE path '" + text + "' (expected grouped or repeated)");
}

void OgeConfig::validate() const {
  smoothing.validate();
  encoder.validate();
  set.validate();
  if (!(tau_group >= 0.0)) throw ValidationError("tau_group must be >= 0");
}

Matrix smooth_basis(const Spectrum& s, int i, const SmoothingFn& rho) {
  if (i < 0 || i >= s.size()) {
    throw ValidationError("eigenvalue index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(s.size()) + ")");
  }
  Matrix out = s.vectors;
  for (int k = 0; k < s.size(); ++k) {
    out.col(k) *= rho_eval(rho, std::abs(s.eigenvalues(k) - s.eigenvalues(i)));
  }
  return out;
}

Matrix smooth_basis(const GroupedSpectrum& s, int j, const SmoothingFn& rho) {
  const int groups = static_cast<int>(s.groups.size());
  if (j < 0 || j >= groups) {
    throw ValidationError("eigenspace index " + std::to_string(j) + " out of range [0, " +
                          std::to_string(groups) + ")");
  }
  Eigen::Index n = 0;
  Eigen::Index width = 0;
  for (const EigenGroup& g : s.groups) {
    n = g.vectors.rows();
    width += g.vectors.cols();
  }
  Matrix out(n, width);
  const double center = s.groups[static_cast<std::size_t>(j)].eigenvalue;
  Eigen::Index col = 0;
  for (const EigenGroup& g : s.groups) {
    out.middleCols(col, g.vectors.cols()) = g.vectors * rho_eval(rho, std::abs(g.eigenvalue - center));
    col += g.vectors.cols();
  }
  return out;
}

OgeModel::OgeModel(OgeConfig config)
    : config_(std::move(config)),
      encoder_(EncoderParams::generate((config_.validate(), config_.encoder))),
      set_(SetEncoderParams::generate(config_.set, 1 + config_.encoder.out_dim, 1)),
      config_hash_(hex64(fnv1a64(describe(config_)))) {}

Augmentation OgeModel::augment(const Graph& g) const {
  if (g.num_nodes() < 1) throw ValidationError("OGE augmentation needs n >= 1");
  return augment(eig_sym(build_laplacian(g)));
}

Augmentation OgeModel::augment(const Matrix& laplacian) const {
  if (laplacian.rows() < 1) throw ValidationError("OGE augmentation needs n >= 1");
  return augment(eig_sym(laplacian));
}

Augmentation OgeModel::augment(const Spectrum& spectrum) const {
  return augment(spectrum, config_.path);
}

Augmentation OgeModel::augment(const Spectrum& spectrum, OgePath path) const {
  const int n = spectrum.size();
  if (n < 1) throw ValidationError("OGE augmentation needs n >= 1");
  const int m_f = config_.encoder.out_dim;
  Matrix pooled = Matrix::Zero(n, config_.set.m);
  Matrix item(n, 1 + m_f);
  double tau = 0.0;

  if (path == OgePath::repeated) {
    for (int i = 0; i < n; ++i) {
      item.col(0).setConstant(spectrum.eigenvalues(i));
      item.rightCols(m_f) = encode(encoder_, smooth_basis(spectrum, i, config_.smoothing));
      pooled += phi_apply(set_, item);
    }
  } else {
    tau = config_.tau_group > 0.0 ? config_.tau_group : default_group_tolerance(spectrum);
    const GroupedSpectrum grouped = group_eigenspaces(spectrum, tau);
    for (std::size_t j = 0; j < grouped.groups.size(); ++j) {
      const EigenGroup& group = grouped.groups[j];
      item.col(0).setConstant(group.eigenvalue);
      item.rightCols(m_f) =
          encode(encoder_, smooth_basis(grouped, static_cast<int>(j), config_.smoothing));
      pooled += static_cast<double>(group.multiplicity) * phi_apply(set_, item);
    }
  }

  Augmentation aug;
  aug.z = psi_apply(set_, pooled);
  if (!aug.z.allFinite()) throw InternalError("OGE augmentation produced non-finite values");
  aug.meta.method = "oge";
  aug.meta.path = to_string(path);
  aug.meta.config_hash = config_hash_;
  aug.meta.encoder_seed = config_.encoder.seed;
  aug.meta.set_seed = config_.set.seed;
  aug.meta.tau_group = tau;
  aug.meta.eigenvalues = spectrum.eigenvalues;
  return aug;
}

LipschitzLedger OgeModel::ledger(int n, int probes, std::uint64_t seed) const {
  const LipschitzEstimate estimate = estimate_lipschitz(encoder_, n, n, probes, seed);
  return compute_ledger(set_, config_.smoothing.lipschitz(), estimate);
}

Augmentation oge_aug(const Graph& g, const OgeConfig& config) {
  return OgeModel(config).augment(g);
}

double stability_bound(int n, const LipschitzLedger& ledger, double dl_spec, double dl_fro) {
  check_bound_inputs(n, ledger, dl_spec, dl_fro);
  const double nd = n;
  const double holder = 4.0 * std::pow(2.0, 0.25) * ledger.j_f * std::sqrt(ledger.j_rho) * nd *
                        std::sqrt(dl_fro);
  return nd * ledger.j_psi * ledger.j_phi * (spectral_term(nd, ledger, dl_spec) + holder);
}

double pre_bound(int n, const LipschitzLedger& ledger, double delta, double dl_spec,
                 double dl_fro) {
  check_bound_inputs(n, ledger, dl_spec, dl_fro);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("delta must be > 0");
  const double nd = n;
  const double smoothing =
      ledger.j_f * (2.0 * nd * nd * delta * ledger.j_rho + std::sqrt(8.0) * dl_fro / delta);
  return nd * ledger.j_psi * ledger.j_phi * (spectral_term(nd, ledger, dl_spec) + smoothing);
}

double optimal_delta(int n, const LipschitzLedger& ledger, double dl_fro) {
  check_bound_inputs(n, ledger, 0.0, dl_fro);
  if (!(ledger.j_rho > 0.0)) throw ValidationError("optimal delta needs j_rho > 0");
  const double nd = n;
  return std::sqrt(std::sqrt(8.0) * dl_fro / (2.0 * nd * nd * ledger.j_rho));
}

}  // namespace spectral_aug
