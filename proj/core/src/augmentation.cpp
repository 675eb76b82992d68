#include "spectral_aug/augmentation.hpp"

#include <nlohmann/json.hpp>

#include "spectral_aug/error.hpp"

namespace spectral_aug {

using nlohmann::json;

std::string serialize_augmentation(const Augmentation& aug) {
  json z = json::array();
  for (Eigen::Index i = 0; i < aug.z.rows(); ++i) {
    for (Eigen::Index k = 0; k < aug.z.cols(); ++k) z.push_back(aug.z(i, k));
  }
  json eigenvalues = json::array();
  for (Eigen::Index i = 0; i < aug.meta.eigenvalues.size(); ++i) {
    eigenvalues.push_back(aug.meta.eigenvalues(i));
  }
  json doc;
  doc["n"] = aug.n();
  doc["d"] = aug.d();
  doc["z"] = std::move(z);
  doc["meta"] = {
      {"method", aug.meta.method},
      {"path", aug.meta.path},
      {"config_hash", aug.meta.config_hash},
      {"encoder_seed", aug.meta.encoder_seed},
      {"set_seed", aug.meta.set_seed},
      {"tau_group", aug.meta.tau_group},
      {"eigenvalues", std::move(eigenvalues)},
  };
  return doc.dump();
}

Augmentation parse_augmentation(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("augmentation JSON: ") + e.what());
  }
  try {
    Augmentation aug;
    const int n = doc.at("n").get<int>();
    const int d = doc.at("d").get<int>();
    const json& z = doc.at("z");
    if (n < 0 || d < 0 || z.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
      throw ValidationError("augmentation JSON: z has " + std::to_string(z.size()) +
                            " entries, expected n*d");
    }
    aug.z.resize(n, d);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) aug.z(i, k) = z.at(static_cast<std::size_t>(i * d + k)).get<double>();
    }
    if (doc.contains("meta")) {
      const json& meta = doc.at("meta");
      aug.meta.method = meta.value("method", "");
      aug.meta.path = meta.value("path", "");
      aug.meta.config_hash = meta.value("config_hash", "");
      aug.meta.encoder_seed = meta.value("encoder_seed", std::uint64_t{0});
      aug.meta.set_seed = meta.value("set_seed", std::uint64_t{0});
      aug.meta.tau_group = meta.value("tau_group", 0.0);
      if (meta.contains("eigenvalues")) {
        const auto values = meta.at("eigenvalues").get<std::vector<double>>();
        aug.meta.eigenvalues = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
      }
    }
    return aug;
  } catch (const json::exception& e) {
    throw ParseError(std::string("augmentation JSON: ") + e.what());
  }
}

}  // namespace spectral_aug
