// Copyright 2026 The uamqa Authors
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

#include <sstream>

#include "cli.hpp"
#include "test_support.hpp"
#include "uamqa/io.hpp"
#include "uamqa/synthgen.hpp"
#include "uamqa/tsf.hpp"

namespace uamqa {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "uamqa");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// One small desk dataset and one trained model_1 run shared by the suite.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const auto g = run_cli({"gen", "--desk-preset", "--per-class", "2", "--powers", "900",
                            "--out", data()});
    ASSERT_EQ(g.code, 0) << g.err;
    const auto t = run_cli({"train", "--dataset", data(), "--scenario", "model_1",
                            "--epochs", "1", "--lr", "0.001", "--out", run_dir()});
    ASSERT_EQ(t.code, 0) << t.err;
    train_out_ = new std::string(t.out);
  }
  static void TearDownTestSuite() {
    delete dir_;
    delete train_out_;
  }
  static std::string data() { return (*dir_ / "data").string(); }
  static std::string run_dir() { return (*dir_ / "run").string(); }

  static testing::TempDir* dir_;
  static std::string* train_out_;
};

testing::TempDir* CliTest::dir_ = nullptr;
std::string* CliTest::train_out_ = nullptr;

TEST_F(CliTest, GenReportsClassCounts) {
  const auto g = run_cli({"gen", "--desk-preset", "--per-class", "3", "--powers", "300,900",
                          "--out", (*dir_ / "gen4").string()});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("wrote 12 clips in 4 classes"), std::string::npos) << g.out;
  EXPECT_NE(g.out.find("thermocouple_300W: 3 clips"), std::string::npos) << g.out;
  EXPECT_EQ(read_manifest(*dir_ / "gen4").size(), 12u);
}

TEST_F(CliTest, GenRerunCollidesUnlessOverwrite) {
  const std::vector<std::string> base = {"gen", "--desk-preset", "--per-class", "1",
                                         "--powers", "600", "--out",
                                         (*dir_ / "again").string()};
  ASSERT_EQ(run_cli(base).code, 0);
  const auto first = read_file_bytes(*dir_ / "again" / "baseline_600W_000.tsf");
  const auto clash = run_cli(base);
  EXPECT_EQ(clash.code, 3);
  EXPECT_NE(clash.err.find("collision"), std::string::npos);
  auto args = base;
  args.push_back("--overwrite");
  ASSERT_EQ(run_cli(args).code, 0);
  EXPECT_EQ(read_file_bytes(*dir_ / "again" / "baseline_600W_000.tsf"), first);
}

TEST_F(CliTest, TrainEchoesConfigAndWritesArtifacts) {
  EXPECT_NE(train_out_->find("# train.lr=0.001"), std::string::npos) << *train_out_;
  EXPECT_NE(train_out_->find("epoch 1/1"), std::string::npos);
  const auto s = nlohmann::json::parse(read_file_text(fs::path(run_dir()) / "summary.json"));
  EXPECT_EQ(s.at("config").at("train").at("lr"), 0.001);
  EXPECT_EQ(s.at("param_count"), 13126978u);
  EXPECT_EQ(s.at("class_names"), nlohmann::json({"baseline_900W", "thermocouple_900W"}));
}

TEST_F(CliTest, EvalReproducesTrainingAccuracy) {
  const auto e = run_cli({"eval", "--checkpoint", run_dir() + "/model.uamc", "--dataset", data(),
                          "--out", (*dir_ / "eval").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(read_file_text(*dir_ / "eval" / "confusion.csv"),
            read_file_text(fs::path(run_dir()) / "confusion.csv"));
  EXPECT_NE(e.out.find("class,precision,recall"), std::string::npos);
  const auto wrong = run_cli({"eval", "--checkpoint", run_dir() + "/model.uamc", "--dataset",
                              data(), "--scenario", "model_4"});
  EXPECT_EQ(wrong.code, 2) << wrong.err;
}

TEST_F(CliTest, InferWritesOneRowPerWeldFrame) {
  const fs::path csv = *dir_ / "infer.csv";
  const auto r = run_cli({"infer", "--checkpoint", run_dir() + "/model.uamc", "--input",
                          data() + "/thermocouple_900W_001.tsf", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = read_file_text(csv);
  EXPECT_EQ(text.rfind("frame_index,predicted_class,confidence\n1,", 0), 0u) << text;
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);
  EXPECT_NE(r.out.find("/8 frames)"), std::string::npos) << r.out;
}

TEST_F(CliTest, InferWithoutWeldExitsThree) {
  VideoClip cold;
  cold.width = cold.height = 200;
  cold.fps = 30;
  for (int i = 0; i < 5; ++i) cold.frames.emplace_back(200, 200, 25.0);
  const fs::path clip = *dir_ / "cold.tsf";
  write_tsf(clip, quantize(cold));
  const auto r = run_cli({"infer", "--checkpoint", run_dir() + "/model.uamc", "--input",
                          clip.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("weld"), std::string::npos) << r.err;
}

TEST_F(CliTest, ReportTabulatesRuns) {
  const auto r = run_cli({"report", run_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("model_1"), std::string::npos);
  EXPECT_NE(r.out.find("13,126,978"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto missing = run_cli({"train", "--dataset", "/nonexistent/uamqa", "--epochs", "1",
                                "--out", "/tmp/uamqa_never"});
  EXPECT_EQ(missing.code, 3);
  EXPECT_NE(missing.err.find("/nonexistent/uamqa"), std::string::npos) << missing.err;
  EXPECT_EQ(run_cli({"train", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"train", "--lr", "-1", "--dataset", "/tmp"}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--out", "/tmp/x", "--powers", "450"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

}  // namespace
}  // namespace uamqa
