/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "xenqc/io/report.hpp"
#include "xenqc/io/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("xenqc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(const std::string &args) const {
    const std::string cmd = std::string(XENQC_CLI_PATH) + " " + args + " > " + (root_ / "stdout.txt").string() +
                            " 2> " + (root_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string write_config(const std::string &name, const std::string &body) const {
    const fs::path p = root_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  static std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Every file of the run with the timestamp removed from JSON reports.
  static std::map<std::string, std::string> snapshot(const fs::path &dir) {
    std::map<std::string, std::string> out;
    for (const auto &e : fs::directory_iterator(dir)) {
      std::string text = slurp(e.path());
      if (e.path().extension() == ".json") {
        json j = json::parse(text);
        j.erase("generated_at");
        text = j.dump();
      }
      out[e.path().filename().string()] = text;
    }
    return out;
  }

  fs::path root_;
};

} // namespace

TEST_F(Cli, EnhanceTraceStartsAtInitialEnhancement) {
  const fs::path out = root_ / "trace";
  ASSERT_EQ(run("--out " + out.string() + " enhance-trace --duration 100 --step 10"), 0);
  std::istringstream csv(slurp(out / "enhance_trace.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t_s,eps_h,eps_c");
  std::getline(csv, line);
  EXPECT_EQ(line, "0,-11,18");
  int rows = 1;
  while (std::getline(csv, line))
    ++rows;
  EXPECT_EQ(rows, 11);
}

TEST_F(Cli, EnhanceTraceZeroDurationHasOneRow) {
  const fs::path out = root_ / "trace";
  ASSERT_EQ(run("--out " + out.string() + " --svg enhance-trace --duration 0"), 0);
  EXPECT_EQ(slurp(out / "enhance_trace.csv"), "t_s,eps_h,eps_c\n0,-11,18\n");
  EXPECT_TRUE(fs::exists(out / "enhance_trace.svg"));
}

TEST_F(Cli, EffpureReportMatchesLibrary) {
  const fs::path out = root_ / "eff";
  const std::string cfg = write_config("c.json", R"({"jitter": 0})");
  ASSERT_EQ(run("--config " + cfg + " --out " + out.string() + " effpure --mode multi"), 0);
  const json report = json::parse(slurp(out / "effpure_report.json"));
  EXPECT_TRUE(report["generated_at"].is_string());
  xenqc::io::RunConfig rc;
  rc.jitter = 0.0;
  const auto run = xenqc::run_effective_pure_pipeline(rc.pipeline(), xenqc::SampleMode::MultiSample);
  EXPECT_EQ(report["enhancement"].get<double>(), run.enhancement);
  EXPECT_NEAR(report["enhancement"].get<double>(), 12.4, 1e-9);
  EXPECT_EQ(report["labeling"]["ground"], "10");
  for (int i = 0; i < 3; ++i)
    for (const char *ch : {"h", "c"}) {
      const std::string stem = "effpure_exp" + std::to_string(i) + "_" + ch;
      EXPECT_TRUE(fs::exists(out / (stem + ".csv"))) << stem;
      EXPECT_EQ(xenqc::io::parse_csv(slurp(out / (stem + "_peaks.csv"))).size(), 2u);
    }
}

TEST_F(Cli, OutputsAreReproducible) {
  for (const char *dir : {"a", "b"})
    ASSERT_EQ(run("--out " + (root_ / dir).string() + " --seed 5 effpure --mode multi"), 0);
  const auto a = snapshot(root_ / "a"), b = snapshot(root_ / "b");
  EXPECT_EQ(a.size(), b.size());
  EXPECT_TRUE(a == b);
  ASSERT_EQ(run("--out " + (root_ / "c").string() + " --seed 6 effpure --mode multi"), 0);
  EXPECT_NE(snapshot(root_ / "c").at("effpure_report.json"), a.at("effpure_report.json"));
}

TEST_F(Cli, GroverAllDecodes) {
  const fs::path out = root_ / "g";
  ASSERT_EQ(run("--out " + out.string() + " grover --all --shared-sample"), 0);
  const json report = json::parse(slurp(out / "grover_report.json"));
  EXPECT_TRUE(report["all_decoded"].get<bool>());
  ASSERT_EQ(report["cases"].size(), 4u);
  for (const auto &c : report["cases"]) {
    EXPECT_EQ(c["target"], c["decoded"]);
    EXPECT_GE(c["enhancement"].get<double>(), 2.0);
    EXPECT_LE(c["enhancement"].get<double>(), 7.0);
  }
  EXPECT_TRUE(fs::exists(out / "grover_01_h.csv"));
  EXPECT_TRUE(fs::exists(out / "grover_11_c_peaks.csv"));
}

TEST_F(Cli, ProbeThermal) {
  const fs::path out = root_ / "p";
  ASSERT_EQ(run("--out " + out.string() + " probe --state thermal"), 0);
  const json report = json::parse(slurp(out / "probe_report.json"));
  const std::vector<double> want = {2.5, 1.5, -1.5, -2.5};
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(report["reconstructed_diagonal"][i].get<double>(), want[i], 1e-9);
}

TEST_F(Cli, SolverFailureExitCode) {
  const std::string cfg = write_config("c.json", R"({"eps0_h": 0, "eps0_c": 0, "jitter": 0})");
  EXPECT_EQ(run("--config " + cfg + " --out " + (root_ / "o").string() + " effpure"), 2);
}

TEST_F(Cli, DecodeMismatchExitCode) {
  // Lines far broader than J leave no dominant line to read.
  const std::string cfg = write_config("c.json", R"({"t2_s": 0.0005})");
  const fs::path out = root_ / "o";
  EXPECT_EQ(run("--config " + cfg + " --out " + out.string() + " grover --target 10"), 3);
  const json report = json::parse(slurp(out / "grover_report.json"));
  EXPECT_FALSE(report["all_decoded"].get<bool>());
  EXPECT_TRUE(report["cases"][0]["decoded"].is_null());
}

TEST_F(Cli, UsageErrors) {
  const std::string out = " --out " + (root_ / "o").string();
  EXPECT_EQ(run(out), 64);
  EXPECT_EQ(run(out + " teleport"), 64);
  EXPECT_EQ(run(out + " grover"), 64);
  EXPECT_EQ(run(out + " grover --target 02"), 64);
  EXPECT_EQ(run(out + " effpure --mode both"), 64);
  EXPECT_EQ(run(out + " enhance-trace --step 0"), 64);
  EXPECT_EQ(run(out + " --config " + write_config("bad.json", R"({"colour": 1})") + " effpure"), 64);
  EXPECT_EQ(run(out + " --config " + write_config("tip.json", R"({"tip_deg": 45})") + " effpure"), 64);
  EXPECT_EQ(run(out + " --config " + (root_ / "missing.json").string() + " effpure"), 64);
}

TEST_F(Cli, UnwritableOutputExitCode) {
  const std::string blocker = write_config("file", "x");
  EXPECT_EQ(run("--out " + blocker + " enhance-trace --duration 0"), 1);
}
