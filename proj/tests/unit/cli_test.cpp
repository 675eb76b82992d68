#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spectral_aug/error.hpp"
#include "spectral_aug_cli/commands.hpp"
#include "spectral_aug_cli/config.hpp"

namespace sa = spectral_aug;
namespace cli = spectral_aug::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SPECTRAL_AUG_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("spectral_aug_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

std::string error_of(const std::string& text) {
  try {
    cli::parse_config_text(text).propagate();
  } catch (const sa::Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  auto c = cli::parse_config_text(
      "seed = 9\njobs = 2\n[smoothing]\nfamily = cosine\ndelta = 0.25\n"
      "[encoder]\nkind = cartesian-tensor-2\nwidth = 8\n"
      "[stability]\nexperiments = 7\ncontrast_sigmas = [0.1, 0.01]\n"
      "[iso]\npipeline = baseline-wl\nn_max = 4\n");
  c.propagate();
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.stability.seed, 9u);
  EXPECT_EQ(c.stability.jobs, 2);
  EXPECT_EQ(c.oge.smoothing.family, sa::SmoothingFamily::cosine);
  EXPECT_EQ(c.oge.smoothing.delta, 0.25);
  EXPECT_EQ(c.oge.encoder.kind, sa::EncoderKind::cartesian_tensor_2);
  EXPECT_EQ(c.oge.encoder.width, 8);
  EXPECT_EQ(c.oge.encoder.depth, 3);
  EXPECT_EQ(c.stability.experiments, 7);
  EXPECT_EQ(c.contrast_sigmas, (std::vector<double>{0.1, 0.01}));
  EXPECT_EQ(c.iso.pipeline, sa::Pipeline::baseline_wl);
  EXPECT_EQ(c.iso.n_max, 4);
  EXPECT_EQ(c.iso.seed, 9u);

  const auto d = cli::parse_config_text("");
  EXPECT_EQ(d.method, "oge");
  EXPECT_TRUE(d.strict);
  EXPECT_EQ(d.stability.experiments, 200);
}

TEST(Config, RejectsUnknownOrMalformedEntries) {
  EXPECT_NE(error_of("[stability]\nfoo = 1\n").find("stability.foo"), std::string::npos);
  EXPECT_NE(error_of("[nonsense]\nx = 1\n").find("nonsense"), std::string::npos);
  EXPECT_NE(error_of("bogus = 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(error_of("[encoder]\nwidth = wide\n").find("encoder.width"), std::string::npos);
  EXPECT_NE(error_of("[augment]\nstrict = maybe\n").find("augment.strict"), std::string::npos);
  EXPECT_NE(error_of("[augment]\nmethod = spectral\n").find("augment.method"), std::string::npos);
  EXPECT_FALSE(error_of("[smoothing]\nfamily = box\n").empty());
  EXPECT_FALSE(error_of("jobs = 0\n").empty());
  EXPECT_THROW(cli::load_config(fs::path("/nonexistent/config.ini")), sa::ValidationError);
}

using Augment = ScratchDir;

TEST_F(Augment, DirectoryRunIsDeterministic) {
  cli::RunConfig config;
  std::ostringstream out, err;
  const fs::path first = dir_ / "a";
  const fs::path second = dir_ / "b";
  ASSERT_EQ(cli::cmd_augment(config, {{kData / "graphs"}, first}, out, err), 0) << err.str();
  ASSERT_EQ(cli::cmd_augment(config, {{kData / "graphs"}, second}, out, err), 0) << err.str();
  int files = 0;
  for (const auto& entry : fs::directory_iterator(first)) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(second / entry.path().filename()));
  }
  EXPECT_EQ(files, 5);
  const auto k3 = nlohmann::json::parse(slurp(first / "k3.aug.json"));
  EXPECT_EQ(k3.at("n"), 3);
  const auto z = k3.at("z").get<std::vector<double>>();
  for (double v : z) EXPECT_NEAR(v, z.front(), 1e-7);
}

TEST_F(Augment, StrictModeWritesNothingOnFailure) {
  cli::RunConfig config;
  std::ostringstream out, err;
  const fs::path target = dir_ / "strict";
  const int code = cli::cmd_augment(
      config, {{kData / "graphs" / "k3.json", kData / "bad" / "out_of_range.json"}, target}, out, err);
  EXPECT_EQ(code, static_cast<int>(sa::ErrorCategory::validation));
  EXPECT_FALSE(fs::exists(target / "k3.aug.json"));
  EXPECT_NE(err.str().find("out_of_range.json"), std::string::npos);
  EXPECT_NE(err.str().find("index"), std::string::npos);
}

TEST_F(Augment, NonStrictModeWritesValidSiblings) {
  cli::RunConfig config;
  config.strict = false;
  config.method = "vanilla";
  std::ostringstream out, err;
  const fs::path target = dir_ / "loose";
  const int code = cli::cmd_augment(
      config, {{kData / "graphs" / "k3.json", kData / "bad" / "malformed.json"}, target}, out, err);
  EXPECT_NE(code, 0);
  EXPECT_TRUE(fs::exists(target / "k3.aug.json"));
  EXPECT_FALSE(fs::exists(target / "malformed.aug.json"));
  const auto k3 = nlohmann::json::parse(slurp(target / "k3.aug.json"));
  EXPECT_EQ(k3.at("meta").at("method"), "vanilla");
}

using Commands = ScratchDir;

TEST_F(Commands, SmallStabilityRunIsByteIdentical) {
  auto config = cli::parse_config_text(
      "[encoder]\nwidth = 8\n[set]\nwidth = 8\n"
      "[stability]\nexperiments = 6\nn_min = 4\nn_max = 5\nprobes = 16\ndiagnose_probes = 32\n"
      "contrast_sigmas = 0.01, 0.001\nscaling_sigmas = 0.001, 0.01\n");
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_stability(config, dir_ / "a", out), 0);
  ASSERT_EQ(cli::cmd_stability(config, dir_ / "b", out), 0);
  for (const char* name : {"stability.ndjson", "stability.csv", "contrast.csv", "stability_summary.json"}) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / name)) << name;
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
  const std::string csv = slurp(dir_ / "a" / "stability.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST_F(Commands, EmptyGridIsRejected) {
  auto config = cli::parse_config_text("[stability]\nexperiments = 0\n");
  std::ostringstream out;
  try {
    cli::cmd_stability(config, dir_, out);
    FAIL() << "expected a validation error";
  } catch (const sa::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("empty experiment grid"), std::string::npos);
  }
}

TEST_F(Commands, IsoBaselineAtFourNodes) {
  auto config = cli::parse_config_text("[iso]\npipeline = baseline-wl\nn_max = 4\n");
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_iso(config, dir_, out), 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "iso_summary.json"));
  EXPECT_EQ(doc.at("pipeline"), "baseline-wl");
  for (const auto& level : doc.at("levels")) {
    EXPECT_GE(level.at("collisions").get<long long>(), 0);
    EXPECT_EQ(level.at("false_separations").get<long long>(), 0);
  }
}

TEST_F(Commands, LemmaTableHasThreeRows) {
  auto config = cli::parse_config_text("[lemmas]\nweyl_pairs = 20\ndavis_kahan_pairs = 20\nproduct_chains = 20\n");
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_lemmas(config, dir_, out), 0);
  const std::string csv = slurp(dir_ / "lemmas.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("weyl"), std::string::npos);
  EXPECT_NE(csv.find("davis_kahan"), std::string::npos);
  EXPECT_NE(csv.find("product_norm"), std::string::npos);
}

TEST_F(Commands, AtomicWriteReplacesContent) {
  const fs::path file = dir_ / "x.txt";
  cli::write_atomic(file, "one");
  cli::write_atomic(file, "two");
  EXPECT_EQ(slurp(file), "two");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++entries;
  EXPECT_EQ(entries, 1);
}

TEST(Config, InlineCommentsAreIgnored) {
  const auto c = cli::parse_config_text(
      "[smoothing]\nfamily = cosine   # hat | cosine\ndelta = 0.2 ; cutoff\n"
      "[stability]\ncontrast_sigmas = 0.1, 0.01  # two values\n");
  EXPECT_EQ(c.oge.smoothing.family, sa::SmoothingFamily::cosine);
  EXPECT_EQ(c.oge.smoothing.delta, 0.2);
  EXPECT_EQ(c.contrast_sigmas, (std::vector<double>{0.1, 0.01}));
}
