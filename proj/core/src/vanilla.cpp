#include "spectral_aug/vanilla.hpp"

#include <optional>
#include <sstream>

#include "spectral_aug/error.hpp"
#include "spectral_aug/hash.hpp"

namespace spectral_aug {

namespace {

std::string describe(const VanillaConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "vanilla;" << to_string(c.encoder.kind) << ';' << c.encoder.width << ';' << c.encoder.depth
      << ';' << c.encoder.out_dim << ';' << c.encoder.seed << ';' << c.set.width << ';'
      << c.set.hidden_layers << ';' << c.set.m << ';' << c.set.d_out << ';' << c.set.seed << ';'
      << c.tau_group << ';' << c.generalized;
  return out.str();
}

EncoderConfig per_dim(EncoderConfig c, int p) {
  c.seed = mix_seed(c.seed, static_cast<std::uint64_t>(p));
  return c;
}

}  // namespace

void VanillaConfig::validate() const {
  encoder.validate();
  set.validate();
  if (!generalized && encoder.out_dim != 1) {
    throw ValidationError("vanilla items are n x 3: encoder out_dim must be 1 unless generalized");
  }
  if (!(tau_group >= 0.0)) throw ValidationError("tau_group must be >= 0");
}

VanillaModel::VanillaModel(VanillaConfig config) : config_(std::move(config)) {
  config_.validate();
  cached_.reserve(kCachedDims);
  for (int p = 1; p <= kCachedDims; ++p) {
    cached_.push_back(EncoderParams::generate(per_dim(config_.encoder, p)));
  }
  // g is the only set function used here; phi/psi are generated but unused.
  set_ = SetEncoderParams::generate(config_.set, 1 + config_.encoder.out_dim,
                                    2 + config_.encoder.out_dim);
  config_hash_ = hex64(fnv1a64(describe(config_)));
}

EncoderParams VanillaModel::encoder_for(int p) const {
  if (p < 1) throw ValidationError("eigenspace dimension must be >= 1");
  if (p <= kCachedDims) return cached_[static_cast<std::size_t>(p - 1)];
  return EncoderParams::generate(per_dim(config_.encoder, p));
}

Augmentation VanillaModel::augment(const Graph& g) const {
  if (g.num_nodes() < 1) throw ValidationError("vanilla augmentation needs n >= 1");
  return augment(eig_sym(build_laplacian(g)));
}

Augmentation VanillaModel::augment(const Matrix& laplacian) const {
  if (laplacian.rows() < 1) throw ValidationError("vanilla augmentation needs n >= 1");
  return augment(eig_sym(laplacian));
}

Augmentation VanillaModel::augment(const Spectrum& spectrum) const {
  const int n = spectrum.size();
  if (n < 1) throw ValidationError("vanilla augmentation needs n >= 1");
  const double tau =
      config_.tau_group > 0.0 ? config_.tau_group : default_group_tolerance(spectrum);
  const GroupedSpectrum grouped = group_eigenspaces(spectrum, tau);

  const int m_f = config_.encoder.out_dim;
  std::vector<Matrix> items;
  items.reserve(grouped.groups.size());
  for (const EigenGroup& group : grouped.groups) {
    std::optional<EncoderParams> scratch;
    const EncoderParams* f = nullptr;
    if (group.multiplicity <= kCachedDims) {
      f = &cached_[static_cast<std::size_t>(group.multiplicity - 1)];
    } else {
      scratch = encoder_for(group.multiplicity);
      f = &*scratch;
    }
    Matrix item(n, 2 + m_f);
    item.col(0).setConstant(static_cast<double>(group.multiplicity));
    item.col(1).setConstant(group.eigenvalue);
    item.rightCols(m_f) = encode(*f, group.vectors);
    items.push_back(std::move(item));
  }

  Augmentation aug;
  aug.z = g_apply(set_, items);
  if (!aug.z.allFinite()) throw InternalError("vanilla augmentation produced non-finite values");
  aug.meta.method = "vanilla";
  aug.meta.path = "grouped";
  aug.meta.config_hash = config_hash_;
  aug.meta.encoder_seed = config_.encoder.seed;
  aug.meta.set_seed = config_.set.seed;
  aug.meta.tau_group = tau;
  aug.meta.eigenvalues = spectrum.eigenvalues;
  return aug;
}

Augmentation vanilla_aug(const Graph& g, const VanillaConfig& config) {
  return VanillaModel(config).augment(g);
}

}  // namespace spectral_aug
