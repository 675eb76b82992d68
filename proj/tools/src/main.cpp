#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectral_aug/error.hpp"
#include "spectral_aug_cli/commands.hpp"
#include "spectral_aug_cli/config.hpp"

namespace sa = spectral_aug;

int main(int argc, char** argv) {
  CLI::App app{"Laplacian eigenvector augmentations, stability and isomorphism studies"};
  app.set_version_flag("--version", "spectral-aug 0.3.0");
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir = "out";
  app.add_option("--config", config_path, "INI-style config file");
  app.add_option("--seed", seed, "global seed (overrides the config file)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads")->envname("SPECTRAL_AUG_JOBS");

  CLI::App* augment = app.add_subcommand("augment", "write <stem>.aug.json per input graph");
  std::vector<std::string> inputs;
  std::optional<std::string> method;
  bool strict = true;
  augment->add_option("inputs", inputs, "graph JSON files or directories")->required();
  augment->add_option("--method", method, "oge or vanilla")->check(CLI::IsMember({"oge", "vanilla"}));
  CLI::Option* strict_flag =
      augment->add_flag("--strict,!--no-strict", strict, "all-or-nothing writes (default)");

  CLI::App* stability = app.add_subcommand("stability", "perturbation experiments against the bounds");
  CLI::App* iso = app.add_subcommand("iso", "distinguishing-power study over small graphs");
  CLI::App* lemmas = app.add_subcommand("lemmas", "Weyl, Davis-Kahan and product-norm sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(sa::ErrorCategory::validation);
  }

  try {
    sa::cli::RunConfig config =
        sa::cli::load_config(config_path ? std::optional<std::filesystem::path>(*config_path)
                                         : std::nullopt);
    if (seed) config.seed = *seed;
    if (jobs) config.jobs = *jobs;
    if (method) config.method = *method;
    if (strict_flag->count() > 0) config.strict = strict;
    config.propagate();

    if (augment->parsed()) {
      sa::cli::AugmentRequest request;
      for (const std::string& input : inputs) request.inputs.emplace_back(input);
      request.out_dir = out_dir;
      return sa::cli::cmd_augment(config, request, std::cout, std::cerr);
    }
    if (stability->parsed()) return sa::cli::cmd_stability(config, out_dir, std::cout);
    if (iso->parsed()) return sa::cli::cmd_iso(config, out_dir, std::cout);
    if (lemmas->parsed()) return sa::cli::cmd_lemmas(config, out_dir, std::cout);
  } catch (const sa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return static_cast<int>(sa::ErrorCategory::internal);
  }
  return static_cast<int>(sa::ErrorCategory::internal);
}
