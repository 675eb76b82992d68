// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "spectral_aug/iso.hpp"
#include "spectral_aug/lemmas.hpp"
#include "spectral_aug/oge.hpp"
#include "spectral_aug/stability.hpp"
#include "spectral_aug/vanilla.hpp"

namespace sa = spectral_aug;
namespace fs = std::filesystem;
using sa::Graph;
using sa::Matrix;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

int default_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome equivariance() {
  const sa::VanillaModel vanilla(sa::VanillaConfig{});
  const sa::OgeModel oge(sa::OgeConfig{});
  sa::Rng rng(2024);
  double worst_vanilla = 0.0;
  double worst_oge = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const Graph g = sa::graphs::random_connected(n, 0.4, rng);
    const Matrix zv = vanilla.augment(g).z;
    const Matrix zo = oge.augment(g).z;
    for (int r = 0; r < 10; ++r) {
      const sa::Permutation p = sa::random_permutation(n, rng);
      const Graph h = sa::apply_permutation(g, p);
      worst_vanilla = std::max(worst_vanilla, sa::max_abs(vanilla.augment(h).z - sa::permute_rows(zv, p)));
      worst_oge = std::max(worst_oge, sa::max_abs(oge.augment(h).z - sa::permute_rows(zo, p)));
    }
  }
  const bool pass = worst_vanilla <= 1e-6 && worst_oge <= 1e-6;
  return {pass, fmt("max deviation vanilla=%.3e oge=%.3e (limit 1e-6, 500 relabelings)", worst_vanilla,
                    worst_oge)};
}

Outcome basis_invariance() {
  const sa::VanillaModel vanilla(sa::VanillaConfig{});
  const sa::OgeModel oge(sa::OgeConfig{});
  sa::Rng rng(2025);
  double worst = 0.0;
  int degenerate_blocks = 0;
  for (const Graph& g : {sa::graphs::cycle(4), sa::graphs::cycle(6), sa::graphs::complete(4),
                         sa::graphs::star(5)}) {
    const sa::Spectrum s = sa::eig_sym(sa::build_laplacian(g));
    const auto grouped = sa::group_eigenspaces(s, sa::default_group_tolerance(s));
    const Matrix zv = vanilla.augment(s).z;
    const Matrix zr = oge.augment(s, sa::OgePath::repeated).z;
    const Matrix zg = oge.augment(s, sa::OgePath::grouped).z;
    for (const auto& block : grouped.groups) {
      if (block.multiplicity < 2) continue;
      ++degenerate_blocks;
      for (int t = 0; t < 20; ++t) {
        sa::Spectrum rotated = s;
        rotated.vectors.middleCols(block.first, block.multiplicity) =
            block.vectors * sa::random_orthogonal(rng, block.multiplicity);
        worst = std::max(worst, sa::max_abs(vanilla.augment(rotated).z - zv));
        worst = std::max(worst, sa::max_abs(oge.augment(rotated, sa::OgePath::repeated).z - zr));
        worst = std::max(worst, sa::max_abs(oge.augment(rotated, sa::OgePath::grouped).z - zg));
      }
    }
  }
  return {worst <= 1e-7 && degenerate_blocks >= 4,
          fmt("max output change %.3e over %d degenerate eigenspaces x 20 rotations (limit 1e-7)", worst,
              degenerate_blocks)};
}

Outcome stability_gate() {
  const sa::OgeModel model(sa::OgeConfig{});
  sa::SuiteConfig config;  // 200 experiments, n 4..8, 256 probes, safety 2, bruteforce
  config.jobs = default_jobs();
  const sa::SuiteResult result = sa::run_stability_suite(model, config);
  int failures = 0;
  int undiagnosed = 0;
  for (const auto& r : result.reports) {
    if (!r.satisfied_delta) {
      ++failures;
      if (!r.diagnosis) ++undiagnosed;
    }
  }
  double tightest = 0.0;
  for (const auto& r : result.reports) {
    if (r.bound_delta > 0.0) tightest = std::max(tightest, r.z_dist / r.bound_delta);
  }
  const bool pass = result.reports.size() == 200 && result.rate_delta() >= 0.99 && undiagnosed == 0;
  return {pass, fmt("pre_bound satisfied %.1f%%, stability_bound %.1f%%, failures %d (undiagnosed %d), "
                    "max z_dist/bound %.3e",
                    100.0 * result.rate_delta(), 100.0 * result.rate_opt(), failures, undiagnosed,
                    tightest)};
}

Outcome lemma_sweeps() {
  const auto sweeps = sa::run_lemma_sweeps(sa::LemmaSweepConfig{});
  bool pass = sweeps.size() == 3;
  std::string detail;
  for (const auto& s : sweeps) {
    pass = pass && s.violations == 0 && s.min_relative_slack >= -1e-8;
    detail += fmt("%s: %d cases, %d skipped, %d violations, min rel slack %.2e; ", s.name.c_str(), s.cases,
                  s.skipped, s.violations, s.min_relative_slack);
  }
  pass = pass && sweeps[0].cases == 500 && sweeps[1].cases + sweeps[1].skipped == 200 &&
         sweeps[2].cases == 200;
  if (!detail.empty()) detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome contrast() {
  const sa::OgeModel oge(sa::OgeConfig{});
  const sa::VanillaModel vanilla(sa::VanillaConfig{});
  const auto result = sa::smooth_vs_hard(sa::graphs::cycle(6), {1e-2, 1e-3, 1e-4, 1e-5}, 17, oge, vanilla);
  std::string detail = "repeated diffs";
  for (const auto& row : result.rows) detail += fmt(" %.2e", row.repeated_diff);
  detail += "; vanilla jumps";
  for (const auto& row : result.rows) detail += fmt(" %.2e", row.vanilla_diff);
  detail += "; grouped";
  for (const auto& row : result.rows) detail += fmt(" %.2e", row.grouped_diff);
  return {result.repeated_decreasing && result.rows.size() == 4, detail};
}

Outcome distinguishing() {
  sa::StudyConfig c;
  c.n_max = 6;
  c.jobs = default_jobs();
  c.pipeline = sa::Pipeline::vanilla;
  const auto vanilla = sa::distinguishing_study(c);
  c.pipeline = sa::Pipeline::baseline_wl;
  const auto wl = sa::distinguishing_study(c);
  const bool pair_ok = !vanilla.named_pairs.empty() && !wl.named_pairs.empty() &&
                       wl.named_pairs[0].fingerprints_equal && !vanilla.named_pairs[0].fingerprints_equal &&
                       !vanilla.named_pairs[0].isomorphic;
  const bool pass = vanilla.total_false_separations() == 0 &&
                    vanilla.total_collisions() <= wl.total_collisions() && pair_ok;

  // n = 7 is reported only.
  sa::StudyConfig seven = c;
  seven.n_min = seven.n_max = 7;
  seven.pipeline = sa::Pipeline::vanilla;
  const auto v7 = sa::distinguishing_study(seven);
  seven.pipeline = sa::Pipeline::baseline_wl;
  const auto w7 = sa::distinguishing_study(seven);

  return {pass, fmt("n<=6 vanilla collisions %lld false separations %lld, baseline-wl collisions %lld; "
                    "C6 vs 2xC3 %s under baseline-wl, %s under vanilla; n=7 (non-gating): vanilla "
                    "collisions %lld false separations %lld, baseline-wl collisions %lld",
                    vanilla.total_collisions(), vanilla.total_false_separations(), wl.total_collisions(),
                    wl.named_pairs.empty() ? "?" : (wl.named_pairs[0].fingerprints_equal ? "collides" : "separates"),
                    vanilla.named_pairs.empty() ? "?" : (vanilla.named_pairs[0].fingerprints_equal ? "collides" : "separates"),
                    v7.total_collisions(), v7.total_false_separations(), w7.total_collisions())};
}

// Every pair of consecutive eigenvalues is either inside one group or
// separated by more than the threshold.
bool well_separated(const sa::Spectrum& s, double tau, double threshold) {
  for (int k = 1; k < s.size(); ++k) {
    const double d = s.eigenvalues(k) - s.eigenvalues(k - 1);
    if (d > tau && d <= threshold) return false;
  }
  return true;
}

Outcome path_equivalence() {
  const sa::OgeModel model(sa::OgeConfig{});
  sa::Rng rng(2026);
  int accepted = 0;
  int drawn = 0;
  double worst = 0.0;
  while (accepted < 50 && drawn < 200000) {
    ++drawn;
    const int n = 3 + static_cast<int>(rng.below(6));
    const Graph g = sa::graphs::random_connected(n, 0.5, rng);
    const sa::Spectrum s = sa::eig_sym(sa::build_laplacian(g));
    const double tau = sa::default_group_tolerance(s);
    if (!well_separated(s, tau, std::max(10.0 * tau, model.config().smoothing.delta))) continue;
    ++accepted;
    worst = std::max(worst, sa::max_abs(model.augment(s, sa::OgePath::repeated).z -
                                        model.augment(s, sa::OgePath::grouped).z));
  }
  return {accepted == 50 && worst <= 1e-7,
          fmt("%d graphs accepted of %d drawn, max |repeated - grouped| %.3e (limit 1e-7)", accepted, drawn,
              worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome determinism(const fs::path& cli, const fs::path& data, const fs::path& work) {
  if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found: " + cli.string()};
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path config = work / "acceptance.ini";
  std::ofstream(config) << "seed = 3\n"
                           "[stability]\nexperiments = 40\nprobes = 64\n"
                           "[iso]\nn_max = 5\n"
                           "[lemmas]\nweyl_pairs = 100\ndavis_kahan_pairs = 50\nproduct_chains = 50\n";
  const std::vector<std::string> commands{
      "augment --method oge " + quote(data / "graphs"),
      "augment --method vanilla " + quote(data / "graphs"),
      "stability",
      "iso",
      "lemmas",
  };
  int compared = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::vector<fs::path> runs;
    const fs::path out = work / "out";
    for (int run = 0; run < 2; ++run) {
      fs::remove_all(out);
      fs::create_directories(out);
      const fs::path stdout_file = work / "stdout.txt";
      const std::string line = quote(cli) + " --config " + quote(config) + " --out " + quote(out) + " " +
                               commands[k] + " > " + quote(stdout_file) + " 2>&1";
      if (std::system(line.c_str()) != 0) return {false, "command failed: " + commands[k]};
      fs::rename(stdout_file, out / "stdout.txt");
      const fs::path kept = work / ("cmd" + std::to_string(k)) / ("run" + std::to_string(run));
      fs::create_directories(kept.parent_path());
      fs::rename(out, kept);
      runs.push_back(kept);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(runs[0])) {
      if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), runs[0]));
    }
    std::size_t second_count = 0;
    for (const auto& entry : fs::recursive_directory_iterator(runs[1])) second_count += entry.is_regular_file();
    if (files.size() != second_count) return {false, "file sets differ for: " + commands[k]};
    for (const fs::path& rel : files) {
      if (slurp(runs[0] / rel) != slurp(runs[1] / rel)) {
        return {false, "outputs differ for '" + commands[k] + "': " + rel.string()};
      }
      ++compared;
    }
  }
  return {true, fmt("%zu commands run twice, %d files byte-identical (including stdout)", commands.size(),
                    compared)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate"};
  fs::path cli;
  fs::path data;
  fs::path work = fs::temp_directory_path() / "spectral_aug_acceptance";
  std::vector<int> only;
  app.add_option("--cli", cli, "spectral-aug binary");
  app.add_option("--data", data, "test data directory");
  app.add_option("--work", work, "scratch directory");
  app.add_option("--only", only, "criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "equivariance", 60, equivariance},
      {2, "basis invariance", 30, basis_invariance},
      {3, "stability bound gate", 600, stability_gate},
      {4, "lemma sweeps", 120, lemma_sweeps},
      {5, "smooth vs hard contrast", 60, contrast},
      {6, "distinguishing study", 300, distinguishing},
      {7, "path equivalence", 60, path_equivalence},
      {8, "CLI determinism", 600, [&] { return determinism(cli, data, work); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += fmt("; over runtime budget of %.0f s", c.budget_seconds);
    }
    failed += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", "
              << fmt("%.1f", seconds) << " s): " << outcome.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
