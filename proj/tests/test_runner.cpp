#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qrad/config.hpp"
#include "qrad/runner.hpp"

using namespace qrad;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qrad_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.pair.domain = "hexagon";
  c.pair.A = Mat2::diag(1.0, 2.0);
  c.deltas = {1.0 / 16, 1.0 / 32};
  c.grid = {128, 16.0, {}};
  c.params["tiles"] = {20};
  return c;
}

int qrlab(const std::string& args) {
  const std::string cmd = std::string(QRLAB_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = small_config();
  c.seed = 12345678901234ULL;
  c.family.name = "random";
  c.params["t"] = {0.5, 1.0 / 3};
  const ExperimentConfig back = config_from_json(to_json(c));
  EXPECT_TRUE(back == c);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 64u);
}

TEST(Config, HashTracksContent) {
  ExperimentConfig a = small_config(), b = small_config();
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, UnknownFieldRejected) {
  const std::string good = to_json(small_config());
  std::string bad = good;
  bad.insert(1, "\"colour\":1,");
  try {
    config_from_json(bad);
    FAIL() << "expected a configuration error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Configuration);
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(Config, ValidationNamesFields) {
  ExperimentConfig c = small_config();
  c.pair.domain = "triangle";
  c.deltas = {0.5};
  try {
    validate(c);
    FAIL() << "expected a configuration error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Configuration);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("domain"), std::string::npos);
    EXPECT_NE(msg.find("delta"), std::string::npos);
  }
}

TEST(Config, Params) {
  const ExperimentConfig c = small_config();
  EXPECT_EQ(c.param("tiles", 1.0), 20.0);
  EXPECT_EQ(c.param("absent", 3.5), 3.5);
  EXPECT_EQ(c.param_list("absent", {1.0, 2.0}).size(), 2u);
}

TEST(Runner, DeterministicOutputs) {
  ExperimentConfig c = small_config();
  c.seed = 7;
  c.out = scratch("det").string();
  const RunResult a = run(c, "active-time");
  std::vector<std::string> first;
  for (const std::string& f : a.files) first.push_back(slurp(fs::path(c.out) / f));
  fs::remove_all(c.out);
  const RunResult b = run(c, "active-time");
  ASSERT_EQ(a.files, b.files);
  for (std::size_t k = 0; k < a.files.size(); ++k) EXPECT_EQ(slurp(fs::path(c.out) / a.files[k]), first[k]) << a.files[k];
  const std::string csv = slurp(fs::path(c.out) / "active-time.csv");
  EXPECT_EQ(csv.rfind("# config_hash " + config_hash(c), 0), 0u);
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "manifest.json"));
}

TEST(Runner, UnknownSubcommand) {
  EXPECT_THROW(run(small_config(), "no-such-thing"), std::invalid_argument);
  EXPECT_EQ(subcommands().size(), 12u);
}

TEST(Runner, ExitStatus) {
  RunResult r;
  r.pass = true;
  EXPECT_EQ(exit_status(r), 0);
  r.pass = false;
  EXPECT_EQ(exit_status(r), 2);
  EXPECT_EQ(exit_status(ErrorKind::Configuration), 3);
  EXPECT_EQ(exit_status(ErrorKind::Validation), 3);
  EXPECT_EQ(exit_status(ErrorKind::Resolution), 4);
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("cli");
  EXPECT_EQ(qrlab(""), 64);
  EXPECT_EQ(qrlab("frobnicate"), 64);
  EXPECT_EQ(qrlab("br-mean --grid 128,x"), 64);
  EXPECT_EQ(qrlab("br-mean --domain triangle --out " + out.string()), 3);
  EXPECT_EQ(qrlab("br-mean --print-config"), 0);
  EXPECT_EQ(qrlab("br-mean --grid 128,16 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "br-mean.csv"));
  const fs::path cfg = out / "bad.json";
  std::ofstream(cfg) << "{\"seed\": 1, \"bogus\": true}";
  EXPECT_EQ(qrlab("br-mean -c " + cfg.string()), 3);
}
