#include "spectral_aug/set_encoder.hpp"

#include <sstream>
#include <vector>

#include "spectral_aug/error.hpp"

namespace spectral_aug {

namespace {

std::vector<int> widths(int in, int hidden_width, int hidden_layers, int out) {
  std::vector<int> w{in};
  for (int k = 0; k < hidden_layers; ++k) w.push_back(hidden_width);
  w.push_back(out);
  return w;
}

void check_width(const Mlp& mlp, const Matrix& x, const char* name) {
  if (x.cols() != mlp.input_dim()) {
    throw ValidationError(std::string(name) + " expects width " + std::to_string(mlp.input_dim()) +
                          ", got " + std::to_string(x.cols()));
  }
  if (!x.allFinite()) throw ValidationError(std::string(name) + " input has non-finite entries");
}

}  // namespace

void SetEncoderConfig::validate() const {
  if (width < 1 || hidden_layers < 0 || m < 1 || d_out < 1) {
    throw ValidationError("set encoder widths must be positive");
  }
}

SetEncoderParams SetEncoderParams::generate(const SetEncoderConfig& config, int phi_input,
                                            int g_input) {
  config.validate();
  SetEncoderParams params;
  params.config = config;
  Rng phi_rng(mix_seed(config.seed, 1));
  Rng psi_rng(mix_seed(config.seed, 2));
  Rng inner_rng(mix_seed(config.seed, 3));
  Rng outer_rng(mix_seed(config.seed, 4));
  params.phi = Mlp::random(widths(phi_input, config.width, config.hidden_layers, config.m), phi_rng);
  params.psi = Mlp::random(widths(config.m, config.width, config.hidden_layers, config.d_out), psi_rng);
  params.g_inner =
      Mlp::random(widths(g_input, config.width, config.hidden_layers, config.m), inner_rng);
  params.g_outer = Mlp::random(widths(config.m, config.width, config.hidden_layers, 1), outer_rng);
  return params;
}

Vector g_apply(const Mlp& inner, const Mlp& outer, std::span<const Matrix> items) {
  if (items.empty()) throw ValidationError("g_apply needs a non-empty multiset of items");
  const Eigen::Index n = items.front().rows();
  Matrix pooled = Matrix::Zero(n, inner.output_dim());
  for (const Matrix& item : items) {
    if (item.rows() != n) throw ValidationError("g_apply items must share the row count n");
    check_width(inner, item, "g_apply");
    pooled += inner.forward(item);
  }
  const Matrix out = outer.forward(pooled);
  if (out.cols() != 1) throw ValidationError("g_apply outer network must emit one value per row");
  return out.col(0);
}

Vector g_apply(const SetEncoderParams& params, std::span<const Matrix> items) {
  return g_apply(params.g_inner, params.g_outer, items);
}

Matrix phi_apply(const SetEncoderParams& params, const Matrix& x) {
  check_width(params.phi, x, "phi");
  return params.phi.forward(x);
}

Matrix psi_apply(const SetEncoderParams& params, const Matrix& x) {
  check_width(params.psi, x, "psi");
  return params.psi.forward(x);
}

LipschitzLedger compute_ledger(const SetEncoderParams& params, double j_rho,
                               const LipschitzEstimate& encoder_estimate) {
  LipschitzLedger ledger;
  ledger.j_phi = params.phi.lipschitz_bound();
  ledger.j_psi = params.psi.lipschitz_bound();
  ledger.j_rho = j_rho;
  ledger.j_f = encoder_estimate.j_f;
  std::ostringstream method;
  method << "j_phi,j_psi: product of layer spectral norms (power iteration); "
         << "j_rho: closed form; j_f: max probe ratio over " << encoder_estimate.used << "/"
         << encoder_estimate.probes << " probes";
  ledger.method = method.str();
  return ledger;
}

}  // namespace spectral_aug
