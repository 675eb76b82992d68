#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectral_aug/graph.hpp"
#include "spectral_aug/oge.hpp"
#include "spectral_aug/vanilla.hpp"

namespace spectral_aug {

enum class MatchMode { bruteforce, identity };

std::string to_string(MatchMode mode);
MatchMode parse_match_mode(const std::string& text);

struct ExperimentOptions {
  MatchMode match = MatchMode::bruteforce;
  double safety_factor = 1.0;  // multiplies j_f before the bounds are evaluated
  int diagnose_probes = 4096;  // j_f re-estimate on failure; 0 disables
  std::uint64_t diagnose_seed = 0x5eed;
};

/// Attached to a report whose bound failed.
struct FailureDiagnosis {
  double j_f_used = 0.0;        // after the safety factor
  double j_f_reestimate = 0.0;  // raw, from diagnose_probes probes
  bool probe_undershoot = false;
  double bound_delta_reestimated = 0.0;
  bool satisfied_after = false;
};

struct StabilityReport {
  std::string graph_id;
  std::uint64_t seed = 0;
  PerturbSpec spec;
  int n = 0;
  double dl_spec = 0.0;
  double dl_fro = 0.0;
  std::optional<Permutation> p_star;  // empty in identity mode
  double z_dist = 0.0;
  double delta = 0.0;
  double bound_opt = 0.0;
  double bound_delta = 0.0;
  double safety_factor = 1.0;
  LipschitzLedger ledger;  // j_f already multiplied by safety_factor
  bool satisfied_opt = false;
  bool satisfied_delta = false;
  std::map<std::string, double> lemma_margins;
  std::optional<FailureDiagnosis> diagnosis;
};

/// Z(G), Z(G'), P_*, both bounds and satisfaction flags for one
/// perturbation. `ledger` carries the raw (unscaled) j_f for size n.
StabilityReport run_experiment(const std::string& id, const Graph& g, const PerturbSpec& spec,
                               const OgeModel& model, const LipschitzLedger& ledger,
                               const ExperimentOptions& options);

/// Same as above for an explicit perturbed Laplacian.
StabilityReport compare_laplacians(const std::string& id, const Matrix& l, const Matrix& l2,
                                   const OgeModel& model, const LipschitzLedger& ledger,
                                   const ExperimentOptions& options);

struct SuiteConfig {
  int experiments = 200;
  int n_min = 4;
  int n_max = 8;
  double edge_probability = 0.5;
  int flips = 1;
  int probes = 256;
  double safety_factor = 2.0;
  MatchMode match = MatchMode::bruteforce;
  int diagnose_probes = 4096;
  std::uint64_t seed = 1;
  int jobs = 1;

  void validate() const;
};

struct SuiteResult {
  std::vector<StabilityReport> reports;  // ordered by graph id
  int satisfied_delta = 0;
  int satisfied_opt = 0;
  int diagnosed_undershoot = 0;

  double rate_delta() const;
  double rate_opt() const;
};

/// Random connected graphs with n cycling through [n_min, n_max] and
/// `flips` edge flips each. Ledgers are estimated once per n.
SuiteResult run_stability_suite(const OgeModel& model, const SuiteConfig& config);

struct ContrastRow {
  double sigma = 0.0;
  double dl_fro = 0.0;
  double repeated_diff = 0.0;  // ||Z(L + E) - Z(L)||_F
  double grouped_diff = 0.0;
  double vanilla_diff = 0.0;
  int groups_before = 0;
  int groups_after = 0;
};

struct ContrastResult {
  std::vector<ContrastRow> rows;  // in the given sigma order
  double envelope = 1.05;
  bool repeated_decreasing = false;  // each diff <= envelope * previous diff
};

/// Gaussian Laplacian noise at each sigma along one fixed noise direction.
/// The grouped and vanilla paths keep the configured tau_group, so a lifted
/// degeneracy shows up as a jump.
ContrastResult smooth_vs_hard(const Graph& g, const std::vector<double>& sigmas,
                              std::uint64_t noise_seed, const OgeModel& oge,
                              const VanillaModel& vanilla, double envelope = 1.05);

struct ScalingFit {
  double exponent = 0.0;  // least-squares slope of log z_dist against log dl_fro
  double intercept = 0.0;
  std::vector<double> sigmas, dl_fro, z_dist;
};

ScalingFit scaling_law(const Graph& g, const std::vector<double>& sigmas, std::uint64_t noise_seed,
                       const OgeModel& model);

/// One JSON object, no trailing newline.
std::string report_to_json(const StabilityReport& report);
std::string report_csv_header();
std::string report_to_csv(const StabilityReport& report);

}  // namespace spectral_aug
