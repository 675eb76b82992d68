#include "spectral_aug_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spectral_aug/error.hpp"

namespace spectral_aug::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::set<std::string> encoder{"kind", "width", "depth", "out_dim", "seed"};
  static const std::set<std::string> set{"width", "hidden_layers", "m", "d_out", "seed"};
  static const std::map<std::string, std::set<std::string>> keys{
      {"smoothing", {"family", "delta"}},
      {"oge", {"path", "tau_group"}},
      {"encoder", encoder},
      {"set", set},
      {"vanilla", {"tau_group", "generalized"}},
      {"vanilla_encoder", encoder},
      {"vanilla_set", set},
      {"augment", {"method", "strict"}},
      {"stability",
       {"experiments", "n_min", "n_max", "edge_probability", "flips", "probes", "safety_factor",
        "match", "diagnose_probes", "contrast", "contrast_sigmas", "scaling_sigmas"}},
      {"iso", {"n_min", "n_max", "pipeline", "rounds", "decimals", "relabelings", "max_exemplars"}},
      {"lemmas", {"weyl_pairs", "davis_kahan_pairs", "product_chains", "n_max", "tolerance"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\"");
  return s.substr(first, last - first + 1);
}

// Drops a trailing "# ..." or "; ..." that follows whitespace.
std::string strip_comment(const std::string& value) {
  for (std::size_t k = 1; k < value.size(); ++k) {
    if ((value[k] == '#' || value[k] == ';') && (value[k - 1] == ' ' || value[k - 1] == '\t')) {
      return value.substr(0, k);
    }
  }
  return value;
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("config key '" + key + "': cannot parse '" + text + "' as a number");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("config key '" + key + "': expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::string text = trim(raw);
  if (!text.empty() && text.front() == '[') text.erase(0, 1);
  if (!text.empty() && text.back() == ']') text.pop_back();
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_number<double>(key, item));
  }
  return out;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string section) : tree_(tree), section_(std::move(section)) {}

  template <typename T>
  void number(const std::string& key, T& target) const {
    if (const auto raw = get(key)) target = parse_number<T>(name(key), *raw);
  }
  void boolean(const std::string& key, bool& target) const {
    if (const auto raw = get(key)) target = parse_bool(name(key), *raw);
  }
  void text(const std::string& key, std::string& target) const {
    if (const auto raw = get(key)) target = trim(*raw);
  }
  void list(const std::string& key, std::vector<double>& target) const {
    if (const auto raw = get(key)) target = parse_list(name(key), *raw);
  }
  template <typename Parse, typename T>
  void parsed(const std::string& key, T& target, Parse parse) const {
    if (const auto raw = get(key)) target = parse(trim(*raw));
  }

 private:
  std::optional<std::string> get(const std::string& key) const {
    const pt::ptree* node = &tree_;
    if (!section_.empty()) {
      const auto child = tree_.get_child_optional(pt::ptree::path_type(section_, '\0'));
      if (!child) return std::nullopt;
      node = &*child;
    }
    const auto value = node->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    return value ? std::optional<std::string>(strip_comment(*value)) : std::nullopt;
  }
  std::string name(const std::string& key) const {
    return section_.empty() ? key : section_ + "." + key;
  }

  const pt::ptree& tree_;
  std::string section_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [name, child] : tree) {
    if (child.empty()) {
      if (name != "seed" && name != "jobs") {
        throw ValidationError("unknown config key '" + name + "'");
      }
      continue;
    }
    const auto section = schema().find(name);
    if (section == schema().end()) throw ValidationError("unknown config section '" + name + "'");
    for (const auto& [key, value] : child) {
      if (!section->second.contains(key)) {
        throw ValidationError("unknown config key '" + name + "." + key + "'");
      }
    }
  }
}

void read_encoder(const Reader& r, EncoderConfig& c) {
  r.parsed("kind", c.kind, parse_encoder_kind);
  r.number("width", c.width);
  r.number("depth", c.depth);
  r.number("out_dim", c.out_dim);
  r.number("seed", c.seed);
}

void read_set(const Reader& r, SetEncoderConfig& c) {
  r.number("width", c.width);
  r.number("hidden_layers", c.hidden_layers);
  r.number("m", c.m);
  r.number("d_out", c.d_out);
  r.number("seed", c.seed);
}

}  // namespace

void RunConfig::propagate() {
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
  stability.seed = seed;
  stability.jobs = jobs;
  iso.seed = seed;
  iso.jobs = jobs;
  iso.oge = oge;
  iso.vanilla = vanilla;
  lemmas.seed = seed;
}

RunConfig parse_config_text(const std::string& text) {
  pt::ptree tree;
  std::istringstream stream(text);
  try {
    pt::read_ini(stream, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config: " + e.message() + " at line " + std::to_string(e.line()));
  }
  check_keys(tree);

  RunConfig c;
  const Reader root(tree, "");
  root.number("seed", c.seed);
  root.number("jobs", c.jobs);

  const Reader smoothing(tree, "smoothing");
  smoothing.parsed("family", c.oge.smoothing.family, parse_smoothing_family);
  smoothing.number("delta", c.oge.smoothing.delta);
  const Reader oge(tree, "oge");
  oge.parsed("path", c.oge.path, parse_oge_path);
  oge.number("tau_group", c.oge.tau_group);
  read_encoder(Reader(tree, "encoder"), c.oge.encoder);
  read_set(Reader(tree, "set"), c.oge.set);

  const Reader vanilla(tree, "vanilla");
  vanilla.number("tau_group", c.vanilla.tau_group);
  vanilla.boolean("generalized", c.vanilla.generalized);
  read_encoder(Reader(tree, "vanilla_encoder"), c.vanilla.encoder);
  read_set(Reader(tree, "vanilla_set"), c.vanilla.set);

  const Reader augment(tree, "augment");
  augment.text("method", c.method);
  augment.boolean("strict", c.strict);

  const Reader stability(tree, "stability");
  stability.number("experiments", c.stability.experiments);
  stability.number("n_min", c.stability.n_min);
  stability.number("n_max", c.stability.n_max);
  stability.number("edge_probability", c.stability.edge_probability);
  stability.number("flips", c.stability.flips);
  stability.number("probes", c.stability.probes);
  stability.number("safety_factor", c.stability.safety_factor);
  stability.parsed("match", c.stability.match, parse_match_mode);
  stability.number("diagnose_probes", c.stability.diagnose_probes);
  stability.boolean("contrast", c.contrast);
  stability.list("contrast_sigmas", c.contrast_sigmas);
  stability.list("scaling_sigmas", c.scaling_sigmas);

  const Reader iso(tree, "iso");
  iso.number("n_min", c.iso.n_min);
  iso.number("n_max", c.iso.n_max);
  iso.parsed("pipeline", c.iso.pipeline, parse_pipeline);
  iso.number("rounds", c.iso.rounds);
  iso.number("decimals", c.iso.decimals);
  iso.number("relabelings", c.iso.relabelings);
  iso.number("max_exemplars", c.iso.max_exemplars);

  const Reader lemmas(tree, "lemmas");
  lemmas.number("weyl_pairs", c.lemmas.weyl_pairs);
  lemmas.number("davis_kahan_pairs", c.lemmas.davis_kahan_pairs);
  lemmas.number("product_chains", c.lemmas.product_chains);
  lemmas.number("n_max", c.lemmas.n_max);
  lemmas.number("tolerance", c.lemmas.tolerance);

  if (c.method != "oge" && c.method != "vanilla") {
    throw ValidationError("config key 'augment.method': expected oge or vanilla, got '" + c.method + "'");
  }
  return c;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path) {
  if (!path) return RunConfig{};
  std::ifstream in(*path);
  if (!in) throw ValidationError("cannot read config file " + path->string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace spectral_aug::cli
