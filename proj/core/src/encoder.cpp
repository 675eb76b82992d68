#include "spectral_aug/encoder.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "spectral_aug/error.hpp"
#include "spectral_aug/spectral.hpp"

namespace spectral_aug {

namespace {

constexpr double kDegenerateDenominator = 1e-12;

Vector uniform_vector(Rng& rng, int size, int fan_in) {
  return rng.uniform_matrix(size, 1, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

Matrix uniform_weight(Rng& rng, int rows, int fan_in) {
  return rng.uniform_matrix(rows, fan_in, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

GramDeepSetWeights generate_gram(const EncoderConfig& cfg, Rng& rng) {
  std::vector<int> inner_widths{1};
  std::vector<int> outer_widths{1 + cfg.width};
  for (int k = 0; k < cfg.depth; ++k) inner_widths.push_back(cfg.width);
  for (int k = 0; k + 1 < cfg.depth; ++k) outer_widths.push_back(cfg.width);
  outer_widths.push_back(cfg.out_dim);
  GramDeepSetWeights w;
  w.inner = Mlp::random(inner_widths, rng);
  w.outer = Mlp::random(outer_widths, rng);
  return w;
}

CartesianWeights generate_cartesian(const EncoderConfig& cfg, Rng& rng) {
  const int w = cfg.width;
  CartesianWeights c;
  c.vec_self = uniform_vector(rng, w, 2);
  c.vec_mean = uniform_vector(rng, w, 2);
  c.mat_self = uniform_vector(rng, w, 2);
  c.mat_moment = uniform_vector(rng, w, 2);
  c.scalar_in = uniform_weight(rng, w, 4);
  c.scalar_bias = uniform_vector(rng, w, 4);
  for (int k = 0; k < cfg.depth; ++k) {
    CartesianWeights::Layer layer;
    layer.scalar_self = uniform_weight(rng, w, w);
    layer.scalar_contract = uniform_weight(rng, w, 4 * w);
    layer.scalar_mean = uniform_weight(rng, w, w);
    layer.scalar_bias = uniform_vector(rng, w, w);
    layer.vec_self = uniform_weight(rng, w, w);
    layer.vec_mean = uniform_weight(rng, w, w);
    layer.vec_tensor = uniform_vector(rng, w, 3);
    layer.mat_self = uniform_vector(rng, w, 3);
    layer.mat_outer = uniform_vector(rng, w, 3);
    layer.mat_mean = uniform_vector(rng, w, 3);
    c.layers.push_back(std::move(layer));
  }
  const std::array<int, 3> readout_widths{5 * w, w, cfg.out_dim};
  c.readout = Mlp::random(readout_widths, rng);
  return c;
}

Matrix encode_gram(const GramDeepSetWeights& w, const Matrix& v) {
  const Eigen::Index n = v.rows();
  const Matrix gram = v * v.transpose();
  // Every Gram entry goes through the inner network; entry (i, j) sits at
  // row i * n + j.
  Matrix entries(n * n, 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) entries(i * n + j, 0) = gram(i, j);
  const Matrix lifted = w.inner.forward(entries);

  const Eigen::Index width = lifted.cols();
  Matrix outer_in(n, 1 + width);
  for (Eigen::Index i = 0; i < n; ++i) {
    outer_in(i, 0) = gram(i, i);
    outer_in.row(i).tail(width) =
        lifted.middleRows(i * n, n).colwise().sum() / static_cast<double>(n);
  }
  return w.outer.forward(outer_in);
}

// Per-node state of the Cartesian network: scalars (width), vectors
// (width x p) and matrices (width blocks of p x p).
struct TensorState {
  Matrix scalars;                           // n x width
  std::vector<Matrix> vectors;              // n entries, each width x p
  std::vector<std::vector<Matrix>> tensors; // n x width, each p x p
};

// (|H_c|^2, tr T_c, H_c^T T_c H_c, |T_c|_F^2) for every channel c, laid
// out as four consecutive width-blocks.
Vector contractions(const Matrix& vectors, const std::vector<Matrix>& tensors) {
  const Eigen::Index width = vectors.rows();
  Vector q(4 * width);
  for (Eigen::Index c = 0; c < width; ++c) {
    const auto h = vectors.row(c).transpose();
    const Matrix& t = tensors[static_cast<std::size_t>(c)];
    q(c) = h.squaredNorm();
    q(width + c) = t.trace();
    q(2 * width + c) = h.dot(t * h);
    q(3 * width + c) = t.squaredNorm();
  }
  return q;
}

Matrix encode_cartesian(const CartesianWeights& w, const Matrix& v) {
  const Eigen::Index n = v.rows();
  const Eigen::Index p = v.cols();
  const Eigen::Index width = w.scalar_in.rows();
  const double inv_n = 1.0 / static_cast<double>(n);

  const Vector mean = v.colwise().sum().transpose() * inv_n;
  const Matrix moment = v.transpose() * v * inv_n;

  TensorState state;
  state.scalars.resize(n, width);
  state.vectors.resize(static_cast<std::size_t>(n));
  state.tensors.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector x = v.row(i).transpose();
    Vector invariants(4);
    invariants << x.squaredNorm(), x.dot(mean), mean.squaredNorm(), moment.trace();
    state.scalars.row(i) =
        (w.scalar_in * invariants + w.scalar_bias).array().tanh().matrix().transpose();

    Matrix& h = state.vectors[static_cast<std::size_t>(i)];
    h = w.vec_self * x.transpose() + w.vec_mean * mean.transpose();

    const Matrix outer = x * x.transpose();
    auto& t = state.tensors[static_cast<std::size_t>(i)];
    t.resize(static_cast<std::size_t>(width));
    for (Eigen::Index c = 0; c < width; ++c) {
      t[static_cast<std::size_t>(c)] = w.mat_self(c) * outer + w.mat_moment(c) * moment;
    }
  }

  for (const CartesianWeights::Layer& layer : w.layers) {
    const Vector scalar_mean = state.scalars.colwise().sum().transpose() * inv_n;
    Matrix vector_mean = Matrix::Zero(width, p);
    std::vector<Matrix> tensor_mean(static_cast<std::size_t>(width), Matrix::Zero(p, p));
    for (Eigen::Index i = 0; i < n; ++i) {
      vector_mean += state.vectors[static_cast<std::size_t>(i)];
      for (Eigen::Index c = 0; c < width; ++c) {
        tensor_mean[static_cast<std::size_t>(c)] +=
            state.tensors[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      }
    }
    vector_mean *= inv_n;
    for (Matrix& t : tensor_mean) t *= inv_n;
    const Matrix mixed_mean = layer.vec_mean * vector_mean;
    const Vector scalar_shared = layer.scalar_mean * scalar_mean + layer.scalar_bias;

    TensorState next;
    next.scalars.resize(n, width);
    next.vectors.resize(static_cast<std::size_t>(n));
    next.tensors.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Matrix& h = state.vectors[static_cast<std::size_t>(i)];
      const auto& t = state.tensors[static_cast<std::size_t>(i)];
      const Vector q = contractions(h, t);
      const Vector s = (layer.scalar_self * state.scalars.row(i).transpose() +
                        layer.scalar_contract * q + scalar_shared)
                           .array()
                           .tanh()
                           .matrix();
      next.scalars.row(i) = s.transpose();

      Matrix h_next = layer.vec_self * h + mixed_mean;
      for (Eigen::Index c = 0; c < width; ++c) {
        const Vector th = t[static_cast<std::size_t>(c)] * h.row(c).transpose();
        h_next.row(c) = std::tanh(s(c)) * h_next.row(c) + layer.vec_tensor(c) * th.transpose();
      }
      next.vectors[static_cast<std::size_t>(i)] = std::move(h_next);

      auto& t_next = next.tensors[static_cast<std::size_t>(i)];
      t_next.resize(static_cast<std::size_t>(width));
      for (Eigen::Index c = 0; c < width; ++c) {
        const auto hc = h.row(c).transpose();
        t_next[static_cast<std::size_t>(c)] =
            layer.mat_self(c) * t[static_cast<std::size_t>(c)] +
            layer.mat_outer(c) * (hc * hc.transpose()) +
            layer.mat_mean(c) * tensor_mean[static_cast<std::size_t>(c)];
      }
    }
    state = std::move(next);
  }

  Matrix features(n, 5 * width);
  for (Eigen::Index i = 0; i < n; ++i) {
    features.row(i).head(width) = state.scalars.row(i);
    features.row(i).tail(4 * width) =
        contractions(state.vectors[static_cast<std::size_t>(i)],
                     state.tensors[static_cast<std::size_t>(i)])
            .transpose();
  }
  return w.readout.forward(features);
}

Matrix probe_point(Rng& rng, int n, int p) {
  if (p <= n) {
    const Matrix gaussian = rng.normal_matrix(n, p);
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    Matrix basis = qr.householderQ() * Matrix::Identity(n, p);
    for (int j = 0; j < p; ++j) basis.col(j) *= rng.uniform(0.0, 1.0);
    return basis;
  }
  return rng.normal_matrix(n, p, 1.0 / std::sqrt(static_cast<double>(n)));
}

}  // namespace

std::string to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::gram_deepset:
      return "gram-deepset";
    case EncoderKind::cartesian_tensor_2:
      return "cartesian-tensor-2";
  }
  return "unknown";
}

EncoderKind parse_encoder_kind(const std::string& text) {
  if (text == "gram-deepset") return EncoderKind::gram_deepset;
  if (text == "cartesian-tensor-2") return EncoderKind::cartesian_tensor_2;
  throw ValidationError("unknown encoder kind '" + text +
                        "' (expected gram-deepset or cartesian-tensor-2)");
}

void EncoderConfig::validate() const {
  if (width < 1) throw ValidationError("encoder width must be >= 1");
  if (depth < 1) throw ValidationError("encoder depth must be >= 1");
  if (out_dim < 1) throw ValidationError("encoder out_dim must be >= 1");
}

EncoderParams EncoderParams::generate(const EncoderConfig& config) {
  config.validate();
  Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(config.kind) + 0x45));
  switch (config.kind) {
    case EncoderKind::gram_deepset:
      return EncoderParams(config, generate_gram(config, rng));
    case EncoderKind::cartesian_tensor_2:
      return EncoderParams(config, generate_cartesian(config, rng));
  }
  throw InternalError("unknown encoder kind");
}

EncoderParams::EncoderParams(EncoderConfig config, Weights weights)
    : config_(config), weights_(std::move(weights)) {}

int EncoderParams::out_dim() const {
  return std::visit(
      [](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, GramDeepSetWeights>) {
          return w.outer.output_dim();
        } else {
          return w.readout.output_dim();
        }
      },
      weights_);
}

Matrix encode(const EncoderParams& params, const Matrix& v) {
  if (v.rows() < 1 || v.cols() < 1) throw ValidationError("encode needs an n x p input, p >= 1");
  if (!v.allFinite()) throw ValidationError("encode input has non-finite entries");
  return std::visit(
      [&](const auto& w) -> Matrix {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, GramDeepSetWeights>) {
          return encode_gram(w, v);
        } else {
          return encode_cartesian(w, v);
        }
      },
      params.weights());
}

LipschitzEstimate estimate_lipschitz_from_pairs(const EncoderParams& params,
                                                std::span<const ProbePair> pairs) {
  LipschitzEstimate estimate;
  estimate.probes = static_cast<int>(pairs.size());
  for (const ProbePair& pair : pairs) {
    const double denominator = procrustes_align(pair.x, pair.x_prime).distance;
    if (denominator < kDegenerateDenominator) continue;
    ++estimate.used;
    const double numerator = (encode(params, pair.x) - encode(params, pair.x_prime)).norm();
    const double ratio = numerator / denominator;
    if (ratio > estimate.j_f || estimate.max_ratio_input.empty()) {
      estimate.j_f = std::max(estimate.j_f, ratio);
      estimate.max_ratio_input = pair.label;
    }
  }
  if (estimate.used == 0) {
    throw EstimationError("Lipschitz estimation failed: every probe pair was degenerate");
  }
  if (!std::isfinite(estimate.j_f)) throw EstimationError("Lipschitz estimate is not finite");
  return estimate;
}

LipschitzEstimate estimate_lipschitz(const EncoderParams& params, int n, int p, int probes,
                                     std::uint64_t seed) {
  if (probes < 1) throw ValidationError("estimate_lipschitz needs probes >= 1");
  if (n < 1 || p < 1) throw ValidationError("estimate_lipschitz needs n, p >= 1");
  Rng rng(seed);
  std::vector<ProbePair> pairs;
  pairs.reserve(static_cast<std::size_t>(probes));
  for (int k = 0; k < probes; ++k) {
    const double exponent =
        probes == 1 ? -4.0 : -4.0 + 3.0 * static_cast<double>(k) / static_cast<double>(probes - 1);
    const double eps = std::pow(10.0, exponent);
    Matrix x = probe_point(rng, n, p);
    Matrix direction = rng.normal_matrix(n, p);
    direction /= direction.norm();
    std::ostringstream label;
    label << "probe " << k << " (n=" << n << ", p=" << p << ", eps=" << eps << ")";
    pairs.push_back({x, x + eps * direction, label.str()});
  }
  return estimate_lipschitz_from_pairs(params, pairs);
}

}  // namespace spectral_aug
