#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spectral_aug_cli/config.hpp"

namespace spectral_aug::cli {

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct AugmentRequest {
  std::vector<std::filesystem::path> inputs;  // files or directories of *.json
  std::filesystem::path out_dir = "out";
};

/// One <stem>.aug.json per input graph. In strict mode nothing is written
/// unless every input succeeds. Returns the exit code.
int cmd_augment(const RunConfig& config, const AugmentRequest& request, std::ostream& out,
                std::ostream& err);

/// stability.ndjson, stability.csv and, when enabled, contrast.csv plus
/// stability_summary.json.
int cmd_stability(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out);

/// iso_summary.json and exemplars/<n>_<k>_{a,b}.json.
int cmd_iso(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out);

/// lemmas.csv with one row per sweep.
int cmd_lemmas(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out);

}  // namespace spectral_aug::cli
