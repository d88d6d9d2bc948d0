/*
 * Copyright 2026 The embdim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "embdim/cli.hpp"
#include "embdim/io.hpp"
#include "embdim/report.hpp"
#include "embdim/synthetic.hpp"
#include "test_support.hpp"

namespace embdim {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::ScratchDir("cli");
    toys_ = synthetic::WriteToyBundles(dir_->path() / "toys", 0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string Toy(std::size_t i) { return toys_[i].string(); }
  static std::string Scratch(const std::string& name) { return (dir_->path() / name).string(); }

  static testing::ScratchDir* dir_;
  static std::vector<std::filesystem::path> toys_;
};

testing::ScratchDir* CliTest::dir_ = nullptr;
std::vector<std::filesystem::path> CliTest::toys_;

TEST_F(CliTest, ExitCodeMapping) {
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kUsage), 2);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kIo), 2);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kFormat), 3);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kTruncated), 3);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kData), 3);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kAlignment), 3);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kDimension), 3);
  EXPECT_EQ(cli::ExitCodeFor(ErrorKind::kDegenerate), 4);
}

TEST_F(CliTest, SweepRelativeIsOneAtZero) {
  const CliRun r = Call({"sweep", "--task", Toy(0), "--fracs", "0,0.5", "--mode", "random",
                      "--runs", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["aggregate"]["mean_rel"][0], 1.0);
  EXPECT_EQ(j["per_task"].size(), 1u);
}

TEST_F(CliTest, UsageErrors) {
  const CliRun unknown = Call({"sweep", "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(Call({"sweep", "--task", Toy(0), "--fracs", "0.5,0.2"}).code, 2);
  EXPECT_EQ(Call({"sweep", "--task", Toy(0), "--fracs", "1.0"}).code, 2);
  EXPECT_EQ(Call({"sweep", "--task", Scratch("missing")}).code, 2);
  EXPECT_EQ(Call({}).code, 2);
  EXPECT_EQ(Call({"--help"}).code, 0);
}

TEST_F(CliTest, DataAndDegenerateErrors) {
  // A classification bundle next to retrieval bundles of another D.
  auto small = synthetic::MakeBlobClassificationTask(0);
  const std::string small_dir = Scratch("blobs10");
  io::SaveBundle(small_dir, small);
  const CliRun mixed = Call({"sweep", "--task", Toy(0), "--task", small_dir, "--fracs", "0.5"});
  EXPECT_EQ(mixed.code, 3) << mixed.err;

  const std::string bad = Scratch("bad.emb");
  io::WriteFileAtomic(bad, "NOTEMB1!");
  io::WriteFileAtomic(io::IdsPath(bad), "");
  EXPECT_EQ(Call({"geometry", "--emb", bad}).code, 3);

  const std::string flat = Scratch("flat.emb");
  io::SaveEmbeddings(flat, EmbeddingMatrix(4, 3, std::vector<double>(12, 1.0),
                                           testing::MakeIds("r", 4)));
  const CliRun degenerate = Call({"geometry", "--emb", flat});
  EXPECT_EQ(degenerate.code, 4) << degenerate.err;
}

TEST_F(CliTest, AttributeThenCurve) {
  const std::string csv = Scratch("attr.csv");
  const CliRun a = Call({"attribute", "--task", Toy(0), "--out", csv});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto parsed = report::ParseAttributionCsv(testing::ReadAll(csv));
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].attribution.records.size(), 64u);

  const CliRun c = Call({"curve", "--task", Toy(0), "--attribution", csv, "--which", "degrading",
                      "--fracs", "0,0.05", "--format", "csv"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "task,fraction,n_removed,score,relative");
}

TEST_F(CliTest, EverySubcommandIsDeterministic) {
  const std::string csv = Scratch("attr-det.csv");
  ASSERT_EQ(Call({"attribute", "--task", Toy(0), "--out", csv}).code, 0);
  const std::vector<std::vector<std::string>> commands = {
      {"sweep", "--task", Toy(0), "--task", Toy(1), "--mode", "random", "--runs", "3"},
      {"attribute", "--task", Toy(0), "--task", Toy(1)},
      {"curve", "--task", Toy(0), "--attribution", csv, "--which", "improving"},
      {"geometry", "--task", Toy(0)},
      {"outliers", "--task", Toy(0), "--task", Toy(1), "--runs", "4"},
      {"pca", "--task", Toy(0), "--runs", "2"},
      {"rankcorr", "--task", Toy(0), "--fracs", "0.25", "--mode", "random", "--runs", "2"},
      {"classify", "--task", Toy(2)},
      {"report", "--task", Toy(0), "--task", Toy(2), "--fracs", "0.5", "--mode", "random"},
  };
  for (const auto& args : commands) {
    const CliRun first = Call(args);
    const CliRun second = Call(args);
    EXPECT_EQ(first.code, 0) << args[0] << ": " << first.err;
    EXPECT_FALSE(first.out.empty()) << args[0];
    EXPECT_EQ(first.out, second.out) << args[0];
  }
}

TEST_F(CliTest, BinaryWritesFilesAndReportsExitCodes) {
  const std::string exe = EMBDIM_CLI_PATH;
  const std::string out = Scratch("bin-sweep.json");
  const std::string cmd = exe + " sweep --task " + Toy(0) + " --fracs 0,0.25 --out " + out +
                          " > " + Scratch("bin.log") + " 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto doc = nlohmann::json::parse(testing::ReadAll(out));
  EXPECT_TRUE(doc.contains("aggregate"));
  const std::string bad = exe + " sweep --bogus > " + Scratch("bin2.log") + " 2>&1";
  const int status = std::system(bad.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

}  // namespace
}  // namespace embdim
