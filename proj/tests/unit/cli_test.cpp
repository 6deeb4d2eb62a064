// Copyright 2026 The ASC Toolkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "asc/cli/cli.hpp"
#include "asc/eval/fusion.hpp"
#include "test_util.hpp"

using namespace asc;
using namespace asc::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Diagnostics are one line and come last; the resolved config may precede them.
std::string last_line(const std::string& s) {
  const auto end = s.find_last_not_of('\n');
  if (end == std::string::npos) return {};
  const auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One tiny corpus shared by the pipeline tests: one source per class on A for
// training, A and S1 for evaluation.
class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::path(ASC_BINARY_DIR) / "cli_test_work";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "tiny.conf") << "# tiny run\nseed = 5\nn_per_class = 1\nn_eval_per_class = 1\n"
                                         "train_devices = A\neval_devices = A, S1\n"
                                         "variant = custom\nwidths = 4,4,4,4\n"
                                         "batch_size = 5\nepochs = 2\nphase1_epochs = 1\nlr_phase1 = 1e-3\n";
    ASSERT_EQ(cli({"synth", "--out", p("corpus")}).code, 0);
    for (const char* split : {"train", "eval"}) {
      const auto r = cli({"features", "--manifest", p("corpus/manifest.csv"), "--split", split, "--out",
                          p(std::string(split) + ".ascf")});
      ASSERT_EQ(r.code, 0) << r.err;
    }
    const auto t = cli({"train", "--cache", p("train.ascf"), "--out", p("a.ascw")});
    ASSERT_EQ(t.code, 0) << t.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string p(const std::string& name) { return (dir_ / name).string(); }
  static Result cli(std::vector<std::string> args) {
    args.insert(args.begin() + 1, {"--config", p("tiny.conf")});
    return run_cli(args);
  }
  static fs::path dir_;
};
fs::path Pipeline::dir_;

}  // namespace

TEST(Config, ParsesCommentsAndRejectsUnknownKeys) {
  RunConfig cfg;
  apply_config_text(cfg, "# header\nseed = 12  # trailing\n\nwidths = 1, 2,3,4\nrecalibrate_bn = yes\n", "t.conf");
  EXPECT_EQ(cfg.get_u64("seed"), 12u);
  EXPECT_EQ(cfg.get_size_list("widths"), (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_TRUE(cfg.get_bool("recalibrate_bn"));
  EXPECT_EQ(cfg.get("frontend"), "logmel");
  try {
    apply_config_text(cfg, "seed = 1\nbogus = 3\n", "t.conf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
    EXPECT_NE(std::string(e.what()).find("t.conf:2"), std::string::npos);
  }
  EXPECT_ASC_ERROR(apply_config_text(cfg, "no equals sign\n", "t"), ErrorCode::kConfigError);
  cfg.set("epochs", "ten");
  EXPECT_ASC_ERROR(cfg.get_size("epochs"), ErrorCode::kConfigError);
  cfg.set("lr_phase1", "1e-3x");
  EXPECT_ASC_ERROR(cfg.get_double("lr_phase1"), ErrorCode::kConfigError);
  EXPECT_ASC_ERROR(apply_config_file(cfg, "/nonexistent.conf"), ErrorCode::kIOFailure);
}

TEST(Config, CommittedBenchmarkConfigLoads) {
  RunConfig cfg;
  apply_config_file(cfg, fs::path(ASC_SOURCE_DIR) / "configs" / "device_mismatch_benchmark.conf");
  EXPECT_EQ(cfg.get_list("eval_devices"), (std::vector<std::string>{"A", "B", "C", "S1", "S2", "S3"}));
  EXPECT_EQ(cfg.get_list("train_devices"), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code(ErrorCode::kConfigError), 2);
  EXPECT_EQ(exit_code(ErrorCode::kUnknownVariant), 2);
  EXPECT_EQ(exit_code(ErrorCode::kIOFailure), 3);
  EXPECT_EQ(exit_code(ErrorCode::kLengthMismatch), 4);
  EXPECT_EQ(exit_code(ErrorCode::kValidationError), 4);
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  const auto h = run_cli({"train", "--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE((h.out + h.err).find("--lr-phase1"), std::string::npos);
  const auto bad = run_cli({"train", "--no-such-flag"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(bad.err.rfind("error[ConfigError]: ", 0), 0u) << bad.err;
  EXPECT_EQ(std::count(bad.err.begin(), bad.err.end(), '\n'), 1);
  EXPECT_EQ(run_cli({"params", "--variant", "red09"}).code, 2);
  EXPECT_EQ(run_cli({"fuse", "/nonexistent/a.csv"}).code, 3);
  EXPECT_EQ(run_cli({"params", "--config", "/nonexistent.conf"}).code, 3);
}

TEST(Cli, ParamsRed02) {
  const auto r = run_cli({"params", "--variant", "red02"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("total trainable parameters: 701804"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("within 15%: yes"), std::string::npos) << r.out;
  const auto csv = run_cli({"params", "--variant", "red03", "--csv"});
  EXPECT_EQ(csv.code, 0);
  EXPECT_NE(csv.out.find(','), std::string::npos);
}

TEST_F(Pipeline, SingleFileFuseReproducesEvalReport) {
  const auto e = cli({"eval", "--cache", p("eval.ascf"), "--weights", p("a.ascw"), "--out", p("a.csv"), "--report",
                      p("eval_report.txt"), "--report-csv", p("eval_report.csv")});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto f = run_cli({"fuse", p("a.csv"), "--report", p("fuse_report.txt"), "--report-csv", p("fuse_report.csv")});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(slurp(p("eval_report.csv")), slurp(p("fuse_report.csv")));
  EXPECT_EQ(slurp(p("eval_report.txt")), slurp(p("fuse_report.txt")));
  const auto csv = slurp(p("eval_report.csv"));
  for (const char* row : {"\nA,", "\nS1,", "\nAverage,"}) EXPECT_NE(csv.find(row), std::string::npos) << row;
  EXPECT_EQ(eval::read_predictions(p("a.csv")).size(), 20u);
}

TEST_F(Pipeline, TrainingIsDeterministic) {
  const auto t = cli({"train", "--cache", p("train.ascf"), "--out", p("b.ascw")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(slurp(p("a.ascw")), slurp(p("b.ascw")));
  EXPECT_EQ(slurp(p("a.ascw.history.csv")), slurp(p("b.ascw.history.csv")));
  EXPECT_NE(t.err.find("# asc train resolved config"), std::string::npos);
}

TEST_F(Pipeline, FuseRejectsMismatchedIds) {
  ASSERT_EQ(cli({"eval", "--cache", p("eval.ascf"), "--weights", p("a.ascw"), "--out", p("full.csv")}).code, 0);
  auto rows = eval::read_predictions(p("full.csv"));
  rows.pop_back();
  eval::write_predictions(p("short.csv"), rows);
  const auto r = run_cli({"fuse", p("full.csv"), p("short.csv")});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(last_line(r.err).rfind("error[ValidationError]: ", 0), 0u) << r.err;
  for (auto& row : rows) row.sample_id = "x" + row.sample_id;
  eval::write_predictions(p("disjoint.csv"), rows);
  const auto d = run_cli({"fuse", p("full.csv"), p("disjoint.csv")});
  EXPECT_EQ(d.code, 4);
  EXPECT_EQ(last_line(d.err).rfind("error[LengthMismatch]: ", 0), 0u) << d.err;
}

TEST_F(Pipeline, FlagsOverrideConfig) {
  const auto r = cli({"train", "--cache", p("train.ascf"), "--out", p("c.ascw"), "--epochs", "1", "--phase1-epochs",
                      "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("epochs = 1\n"), std::string::npos) << r.err;
  const auto bad = cli({"features", "--manifest", p("corpus/manifest.csv"), "--split", "both", "--out", p("x.ascf")});
  EXPECT_EQ(bad.code, 2);
}
