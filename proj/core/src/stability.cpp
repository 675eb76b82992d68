#include "spectral_aug/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "spectral_aug/error.hpp"
#include "spectral_aug/lemmas.hpp"
#include "spectral_aug/parallel.hpp"

namespace spectral_aug {

namespace {

bool within(double value, double bound) { return value <= bound * (1.0 + 1e-9); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string describe(const PerturbSpec& spec) {
  if (spec.kind == PerturbKind::edge_flip) return "edge_flip:" + std::to_string(spec.count);
  return "gaussian_noise:" + fmt(spec.sigma);
}

Matrix laplacian_of(const Perturbed& p) {
  if (const Graph* g = std::get_if<Graph>(&p)) return build_laplacian(*g);
  return std::get<Matrix>(p);
}

void evaluate_bounds(StabilityReport& r) {
  r.bound_opt = stability_bound(r.n, r.ledger, r.dl_spec, r.dl_fro);
  r.bound_delta = pre_bound(r.n, r.ledger, r.delta, r.dl_spec, r.dl_fro);
  r.satisfied_opt = within(r.z_dist, r.bound_opt);
  r.satisfied_delta = within(r.z_dist, r.bound_delta);
}

}  // namespace

std::string to_string(MatchMode mode) {
  return mode == MatchMode::bruteforce ? "bruteforce" : "identity";
}

MatchMode parse_match_mode(const std::string& text) {
  if (text == "bruteforce") return MatchMode::bruteforce;
  if (text == "identity") return MatchMode::identity;
  throw ValidationError("unknown match mode '" + text + "' (expected bruteforce or identity)");
}

StabilityReport compare_laplacians(const std::string& id, const Matrix& l, const Matrix& l2,
                                   const OgeModel& model, const LipschitzLedger& ledger,
                                   const ExperimentOptions& options) {
  if (l.rows() != l2.rows() || l.rows() != l.cols() || l2.rows() != l2.cols()) {
    throw ValidationError("experiment needs two square Laplacians of equal size");
  }
  if (!(options.safety_factor > 0.0)) throw ValidationError("safety factor must be > 0");
  StabilityReport r;
  r.graph_id = id;
  r.n = static_cast<int>(l.rows());
  r.safety_factor = options.safety_factor;
  r.delta = model.config().smoothing.delta;
  r.ledger = ledger;
  r.ledger.j_f = ledger.j_f * options.safety_factor;

  Permutation p = Permutation::identity(r.n);
  if (options.match == MatchMode::bruteforce) {
    p = match_permutation(l, l2).permutation;
    r.p_star = p;
  }
  const Matrix aligned = apply_permutation(l2, p);
  const Matrix diff = l - aligned;
  r.dl_fro = diff.norm();
  r.dl_spec = std::min(spectral_norm(diff), r.dl_fro);

  const Matrix z = model.augment(l).z;
  const Matrix z2 = model.augment(l2).z;
  r.z_dist = (z - permute_rows(z2, p)).norm();
  evaluate_bounds(r);

  r.lemma_margins["weyl"] = check_weyl(l, aligned);
  if (r.n >= 2) {
    const Vector lambda = eig_sym(l).eigenvalues;
    int split = 0;
    for (int i = 1; i + 1 < r.n; ++i) {
      if (lambda(i + 1) - lambda(i) > lambda(split + 1) - lambda(split)) split = i;
    }
    const DavisKahanCheck dk = check_davis_kahan(l, aligned, 0, split);
    if (dk.slack) r.lemma_margins["davis_kahan"] = *dk.slack;
  }

  if (!(r.satisfied_delta && r.satisfied_opt) && options.diagnose_probes > 0) {
    FailureDiagnosis d;
    d.j_f_used = r.ledger.j_f;
    d.j_f_reestimate = model.ledger(r.n, options.diagnose_probes, options.diagnose_seed).j_f;
    d.probe_undershoot = d.j_f_reestimate > d.j_f_used;
    LipschitzLedger refreshed = r.ledger;
    refreshed.j_f = std::max(d.j_f_used, d.j_f_reestimate * options.safety_factor);
    d.bound_delta_reestimated = pre_bound(r.n, refreshed, r.delta, r.dl_spec, r.dl_fro);
    d.satisfied_after = within(r.z_dist, d.bound_delta_reestimated);
    r.diagnosis = d;
  }
  return r;
}

StabilityReport run_experiment(const std::string& id, const Graph& g, const PerturbSpec& spec,
                               const OgeModel& model, const LipschitzLedger& ledger,
                               const ExperimentOptions& options) {
  if (options.match == MatchMode::bruteforce && g.num_nodes() > kBruteForceCap) {
    throw CapabilityError("bruteforce matching supports n <= " + std::to_string(kBruteForceCap) +
                          ", got n=" + std::to_string(g.num_nodes()));
  }
  StabilityReport r = compare_laplacians(id, build_laplacian(g), laplacian_of(perturb(g, spec)),
                                         model, ledger, options);
  r.spec = spec;
  r.seed = spec.seed;
  return r;
}

void SuiteConfig::validate() const {
  if (experiments < 1) throw ValidationError("empty experiment grid");
  if (n_min < 2 || n_max < n_min) throw ValidationError("suite needs 2 <= n_min <= n_max");
  if (match == MatchMode::bruteforce && n_max > kBruteForceCap) {
    throw CapabilityError("bruteforce matching supports n <= " + std::to_string(kBruteForceCap));
  }
  if (!(edge_probability > 0.0 && edge_probability <= 1.0)) {
    throw ValidationError("edge probability must lie in (0, 1]");
  }
  if (flips < 1) throw ValidationError("flips must be >= 1");
  if (probes < 1) throw ValidationError("probes must be >= 1");
  if (!(safety_factor > 0.0)) throw ValidationError("safety factor must be > 0");
}

double SuiteResult::rate_delta() const {
  return reports.empty() ? 0.0 : static_cast<double>(satisfied_delta) / reports.size();
}

double SuiteResult::rate_opt() const {
  return reports.empty() ? 0.0 : static_cast<double>(satisfied_opt) / reports.size();
}

SuiteResult run_stability_suite(const OgeModel& model, const SuiteConfig& config) {
  config.validate();
  const int span = config.n_max - config.n_min + 1;

  std::vector<LipschitzLedger> ledgers(static_cast<std::size_t>(span));
  parallel_for(config.jobs, ledgers.size(), [&](std::size_t k) {
    const int n = config.n_min + static_cast<int>(k);
    ledgers[k] = model.ledger(n, config.probes, mix_seed(config.seed, 0x1ed9e5ULL + n));
  });

  ExperimentOptions options;
  options.match = config.match;
  options.safety_factor = config.safety_factor;
  options.diagnose_probes = config.diagnose_probes;

  SuiteResult result;
  result.reports.resize(static_cast<std::size_t>(config.experiments));
  parallel_for(config.jobs, result.reports.size(), [&](std::size_t k) {
    const int n = config.n_min + static_cast<int>(k) % span;
    Rng rng(mix_seed(config.seed, 2 * k));
    const Graph g = graphs::random_connected(n, config.edge_probability, rng);
    const PerturbSpec spec = PerturbSpec::edge_flip(config.flips, mix_seed(config.seed, 2 * k + 1));
    char id[16];
    std::snprintf(id, sizeof id, "g%04zu", k);
    ExperimentOptions local = options;
    local.diagnose_seed = mix_seed(config.seed, 0xd1a9ULL + k);
    result.reports[k] = run_experiment(id, g, spec, model,
                                       ledgers[static_cast<std::size_t>(n - config.n_min)], local);
  });

  for (const StabilityReport& r : result.reports) {
    result.satisfied_delta += r.satisfied_delta;
    result.satisfied_opt += r.satisfied_opt;
    if (r.diagnosis && r.diagnosis->probe_undershoot) ++result.diagnosed_undershoot;
  }
  return result;
}

ContrastResult smooth_vs_hard(const Graph& g, const std::vector<double>& sigmas,
                              std::uint64_t noise_seed, const OgeModel& oge,
                              const VanillaModel& vanilla, double envelope) {
  if (sigmas.empty()) throw ValidationError("contrast needs at least one sigma");
  const Matrix l = build_laplacian(g);
  const Spectrum base = eig_sym(l);
  const Matrix z_rep = oge.augment(base, OgePath::repeated).z;
  const Matrix z_grp = oge.augment(base, OgePath::grouped).z;
  const Matrix z_van = vanilla.augment(base).z;
  const double tau = oge.config().tau_group > 0.0 ? oge.config().tau_group
                                                   : default_group_tolerance(base);

  ContrastResult out;
  out.envelope = envelope;
  for (double sigma : sigmas) {
    const Matrix noisy = noisy_laplacian(g, sigma, noise_seed);
    const Spectrum s = eig_sym(noisy);
    ContrastRow row;
    row.sigma = sigma;
    row.dl_fro = (noisy - l).norm();
    row.repeated_diff = (oge.augment(s, OgePath::repeated).z - z_rep).norm();
    row.grouped_diff = (oge.augment(s, OgePath::grouped).z - z_grp).norm();
    row.vanilla_diff = (vanilla.augment(s).z - z_van).norm();
    row.groups_before = static_cast<int>(group_eigenspaces(base, tau).groups.size());
    row.groups_after = static_cast<int>(group_eigenspaces(s, tau).groups.size());
    out.rows.push_back(row);
  }
  out.repeated_decreasing = true;
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    if (out.rows[k].repeated_diff > envelope * out.rows[k - 1].repeated_diff) {
      out.repeated_decreasing = false;
    }
  }
  return out;
}

ScalingFit scaling_law(const Graph& g, const std::vector<double>& sigmas, std::uint64_t noise_seed,
                       const OgeModel& model) {
  if (sigmas.size() < 2) throw ValidationError("scaling fit needs at least two sigmas");
  const Matrix l = build_laplacian(g);
  const Matrix z = model.augment(l).z;
  ScalingFit fit;
  for (double sigma : sigmas) {
    const Matrix noisy = noisy_laplacian(g, sigma, noise_seed);
    fit.sigmas.push_back(sigma);
    fit.dl_fro.push_back((noisy - l).norm());
    fit.z_dist.push_back((model.augment(noisy).z - z).norm());
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(sigmas.size()), 2);
  Eigen::VectorXd target(static_cast<Eigen::Index>(sigmas.size()));
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    design(static_cast<Eigen::Index>(k), 0) = std::log(fit.dl_fro[k]);
    design(static_cast<Eigen::Index>(k), 1) = 1.0;
    target(static_cast<Eigen::Index>(k)) = std::log(std::max(fit.z_dist[k], 1e-300));
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  fit.exponent = coef(0);
  fit.intercept = coef(1);
  return fit;
}

std::string report_to_json(const StabilityReport& r) {
  nlohmann::ordered_json doc;
  doc["graph_id"] = r.graph_id;
  doc["seed"] = r.seed;
  doc["perturbation"] = describe(r.spec);
  doc["n"] = r.n;
  doc["dl_spec"] = r.dl_spec;
  doc["dl_fro"] = r.dl_fro;
  if (r.p_star) {
    doc["p_star"] = r.p_star->mapping();
  } else {
    doc["p_star"] = "identity";
  }
  doc["z_dist"] = r.z_dist;
  doc["delta"] = r.delta;
  doc["bound_opt"] = r.bound_opt;
  doc["bound_delta"] = r.bound_delta;
  doc["satisfied_opt"] = r.satisfied_opt;
  doc["satisfied_delta"] = r.satisfied_delta;
  doc["ledger"] = {{"j_phi", r.ledger.j_phi},
                   {"j_psi", r.ledger.j_psi},
                   {"j_rho", r.ledger.j_rho},
                   {"j_f", r.ledger.j_f},
                   {"safety_factor", r.safety_factor},
                   {"method", r.ledger.method}};
  nlohmann::ordered_json margins = nlohmann::ordered_json::object();
  for (const auto& [name, slack] : r.lemma_margins) margins[name] = slack;
  doc["lemma_margins"] = margins;
  if (r.diagnosis) {
    const FailureDiagnosis& d = *r.diagnosis;
    doc["diagnosis"] = {{"j_f_used", d.j_f_used},
                        {"j_f_reestimate", d.j_f_reestimate},
                        {"probe_undershoot", d.probe_undershoot},
                        {"bound_delta_reestimated", d.bound_delta_reestimated},
                        {"satisfied_after", d.satisfied_after}};
  }
  return doc.dump();
}

std::string report_csv_header() {
  return "graph_id,seed,dl_spec,dl_fro,z_dist,bound_delta,bound_opt,satisfied_delta,satisfied_opt";
}

std::string report_to_csv(const StabilityReport& r) {
  return r.graph_id + ',' + std::to_string(r.seed) + ',' + fmt(r.dl_spec) + ',' + fmt(r.dl_fro) +
         ',' + fmt(r.z_dist) + ',' + fmt(r.bound_delta) + ',' + fmt(r.bound_opt) + ',' +
         (r.satisfied_delta ? "true" : "false") + ',' + (r.satisfied_opt ? "true" : "false");
}

}  // namespace spectral_aug
