#include "spectral_aug_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spectral_aug/error.hpp"

namespace spectral_aug::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * rate);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_augmentation_file(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() >= 9 && name.compare(name.size() - 9, 9, ".aug.json") == 0;
}

std::vector<fs::path> collect_inputs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const fs::path& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            !is_augmentation_file(entry.path())) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  return files;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw InternalError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InternalError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

int cmd_augment(const RunConfig& config, const AugmentRequest& request, std::ostream& out,
                std::ostream& err) {
  const std::vector<fs::path> files = collect_inputs(request.inputs);
  if (files.empty()) throw ValidationError("no input graphs given");

  std::optional<OgeModel> oge;
  std::optional<VanillaModel> vanilla;
  if (config.method == "oge") {
    oge.emplace(config.oge);
  } else if (config.method == "vanilla") {
    vanilla.emplace(config.vanilla);
  } else {
    throw ValidationError("unknown method '" + config.method + "' (expected oge or vanilla)");
  }

  struct Output {
    fs::path path;
    std::string content;
  };
  std::vector<Output> outputs;
  std::map<std::string, fs::path> stems;
  int first_failure = 0;
  for (const fs::path& file : files) {
    try {
      const std::string stem = file.stem().string();
      if (const auto clash = stems.find(stem); clash != stems.end()) {
        throw ValidationError("output name " + stem + ".aug.json also produced by " +
                              clash->second.string());
      }
      stems.emplace(stem, file);
      const Graph g = parse_graph(read_file(file));
      const Augmentation aug = oge ? oge->augment(g) : vanilla->augment(g);
      outputs.push_back({request.out_dir / (stem + ".aug.json"), serialize_augmentation(aug)});
    } catch (const Error& e) {
      err << file.string() << ": " << e.what() << '\n';
      if (first_failure == 0) first_failure = static_cast<int>(e.category());
    }
  }

  if (first_failure != 0 && config.strict) {
    err << "no files written (strict mode)\n";
    return first_failure;
  }
  ensure_dir(request.out_dir);
  for (const Output& o : outputs) write_atomic(o.path, o.content);
  out << "wrote " << outputs.size() << " of " << files.size() << " augmentation files to "
      << request.out_dir.string() << '\n';
  return first_failure;
}

int cmd_stability(const RunConfig& config, const fs::path& out_dir, std::ostream& out) {
  const OgeModel model(config.oge);
  const SuiteResult result = run_stability_suite(model, config.stability);
  ensure_dir(out_dir);

  std::string ndjson;
  std::string csv = report_csv_header() + '\n';
  for (const StabilityReport& r : result.reports) {
    ndjson += report_to_json(r) + '\n';
    csv += report_to_csv(r) + '\n';
  }
  write_atomic(out_dir / "stability.ndjson", ndjson);
  write_atomic(out_dir / "stability.csv", csv);

  nlohmann::ordered_json summary;
  summary["experiments"] = result.reports.size();
  summary["satisfied_delta"] = result.satisfied_delta;
  summary["satisfied_opt"] = result.satisfied_opt;
  summary["rate_delta"] = result.rate_delta();
  summary["rate_opt"] = result.rate_opt();
  summary["probe_undershoots"] = result.diagnosed_undershoot;
  summary["safety_factor"] = config.stability.safety_factor;

  if (config.contrast) {
    const Graph c6 = graphs::cycle(6);
    const ContrastResult contrast =
        smooth_vs_hard(c6, config.contrast_sigmas, config.seed, model, VanillaModel(config.vanilla));
    std::string rows = "sigma,dl_fro,repeated_diff,grouped_diff,vanilla_diff,groups_before,groups_after\n";
    nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
    for (const ContrastRow& row : contrast.rows) {
      rows += fmt(row.sigma) + ',' + fmt(row.dl_fro) + ',' + fmt(row.repeated_diff) + ',' +
              fmt(row.grouped_diff) + ',' + fmt(row.vanilla_diff) + ',' +
              std::to_string(row.groups_before) + ',' + std::to_string(row.groups_after) + '\n';
      json_rows.push_back({{"sigma", row.sigma},
                           {"dl_fro", row.dl_fro},
                           {"repeated_diff", row.repeated_diff},
                           {"grouped_diff", row.grouped_diff},
                           {"vanilla_diff", row.vanilla_diff},
                           {"repeated_ratio", row.repeated_diff / row.dl_fro},
                           {"vanilla_ratio", row.vanilla_diff / row.dl_fro}});
    }
    write_atomic(out_dir / "contrast.csv", rows);
    summary["contrast"] = {{"graph", "C6"},
                           {"envelope", contrast.envelope},
                           {"repeated_decreasing", contrast.repeated_decreasing},
                           {"rows", std::move(json_rows)}};
    if (config.scaling_sigmas.size() >= 2) {
      const ScalingFit fit = scaling_law(c6, config.scaling_sigmas, config.seed, model);
      summary["scaling"] = {{"graph", "C6"},
                            {"exponent", fit.exponent},
                            {"intercept", fit.intercept},
                            {"expected_range", {0.5, 1.1}},
                            {"in_expected_range", fit.exponent >= 0.5 && fit.exponent <= 1.1}};
    }
  }
  write_atomic(out_dir / "stability_summary.json", summary.dump(2) + '\n');

  out << "stability: " << result.reports.size() << " experiments, pre_bound satisfied "
      << percent(result.rate_delta()) << ", stability_bound satisfied " << percent(result.rate_opt())
      << ", probe undershoots " << result.diagnosed_undershoot << '\n';
  return 0;
}

int cmd_iso(const RunConfig& config, const fs::path& out_dir, std::ostream& out) {
  const StudySummary summary = distinguishing_study(config.iso);
  ensure_dir(out_dir);
  write_atomic(out_dir / "iso_summary.json", serialize_study(summary) + '\n');
  bool any_exemplar = false;
  for (const LevelSummary& level : summary.levels) any_exemplar |= !level.exemplars.empty();
  if (any_exemplar) {
    const fs::path dir = out_dir / "exemplars";
    ensure_dir(dir);
    for (const LevelSummary& level : summary.levels) {
      for (std::size_t k = 0; k < level.exemplars.size(); ++k) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "n%d_%02zu", level.n, k);
        write_atomic(dir / (std::string(stem) + "_a.json"), serialize_graph(level.exemplars[k].a) + '\n');
        write_atomic(dir / (std::string(stem) + "_b.json"), serialize_graph(level.exemplars[k].b) + '\n');
      }
    }
  }
  for (const LevelSummary& level : summary.levels) {
    out << to_string(summary.pipeline) << " n=" << level.n << " classes=" << level.classes
        << " pairs=" << level.pairs << " collisions=" << level.collisions
        << " false_separations=" << level.false_separations << '\n';
  }
  for (const NamedPairCheck& check : summary.named_pairs) {
    out << check.name << ": fingerprints " << (check.fingerprints_equal ? "collide" : "differ") << '\n';
  }
  return 0;
}

int cmd_lemmas(const RunConfig& config, const fs::path& out_dir, std::ostream& out) {
  const std::vector<LemmaSweep> sweeps = run_lemma_sweeps(config.lemmas);
  ensure_dir(out_dir);
  std::string csv = "lemma,cases,skipped,violations,min_slack,min_relative_slack\n";
  for (const LemmaSweep& s : sweeps) {
    csv += s.name + ',' + std::to_string(s.cases) + ',' + std::to_string(s.skipped) + ',' +
           std::to_string(s.violations) + ',' + fmt(s.min_slack) + ',' + fmt(s.min_relative_slack) +
           '\n';
  }
  write_atomic(out_dir / "lemmas.csv", csv);
  out << csv;
  return 0;
}

}  // namespace spectral_aug::cli
