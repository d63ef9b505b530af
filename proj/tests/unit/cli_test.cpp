// Copyright 2026 The wlpca Authors
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
#include "wlpca/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace wlpca::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("wlpca_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("abab.txt", "a b a b");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }
  CliRun build_abab(const std::string& prefix) const {
    return run({"build-cooc", "--input", path("abab.txt"), "--output", path(prefix),
                "--window", "1", "--min-count", "1"});
  }

  // Log rows without the header, split into columns.
  std::vector<std::vector<std::string>> log_rows(const std::string& prefix) const {
    std::istringstream in(slurp(path(prefix + ".log.tsv")));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "epoch\tobjective\tgrad_norm\tzero_cells_visited\tclamp_events");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
      std::vector<std::string> cols;
      std::istringstream ls(line);
      std::string col;
      while (std::getline(ls, col, '\t')) cols.push_back(col);
      rows.push_back(cols);
    }
    return rows;
  }

  fs::path dir_;
};

TEST_F(CliTest, BuildCoocReportsAbabFixture) {
  const auto r = build_abab("ab");
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("|D|:         6"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("nnz:         2"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(path("ab.cooc")));
  EXPECT_TRUE(fs::exists(path("ab.vocab.tsv")));
  EXPECT_TRUE(fs::exists(path("ab.manifest.json")));
}

TEST_F(CliTest, BuildCoocTsvSummary) {
  const auto r = run({"build-cooc", "--input", path("abab.txt"), "--output",
                      path("ab"), "--window", "1", "--min-count", "1", "--tsv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "tokens\ttotal_pairs\tvocab_size\tnnz\n4\t6\t2\t2\n");
}

TEST_F(CliTest, MinCountExcludingEverythingIsEmptyInput) {
  const auto r = run({"build-cooc", "--input", path("abab.txt"), "--output",
                      path("ab"), "--min-count", "3"});
  EXPECT_EQ(r.code, kEmptyInput);
  EXPECT_FALSE(fs::exists(path("ab.cooc")));
  EXPECT_FALSE(fs::exists(path("ab.manifest.json")));
}

TEST_F(CliTest, EmptyFileIsEmptyInput) {
  write("empty.txt", "  \n ");
  const auto r = run({"build-cooc", "--input", path("empty.txt"), "--output",
                      path("e"), "--min-count", "1"});
  EXPECT_EQ(r.code, kEmptyInput);
}

TEST_F(CliTest, MissingInputIsIoError) {
  const auto r = run({"build-cooc", "--input", path("nope.txt"), "--output", path("x")});
  EXPECT_EQ(r.code, kIoError);
}

TEST_F(CliTest, BadArguments) {
  EXPECT_EQ(run({}).code, kBadArguments);
  EXPECT_EQ(run({"frobnicate"}).code, kBadArguments);
  EXPECT_EQ(run({"build-cooc", "--input", path("abab.txt")}).code, kBadArguments);
  EXPECT_EQ(run({"build-cooc", "--input", path("abab.txt"), "--output", path("x"),
                 "--window", "many"}).code,
            kBadArguments);
  ASSERT_EQ(build_abab("ab").code, kOk);
  EXPECT_EQ(run({"train", "--cooc", path("ab.cooc"), "--output", path("m"),
                 "--objective", "word2vec"}).code,
            kBadArguments);
  EXPECT_EQ(run({"train", "--cooc", path("ab.cooc"), "--output", path("m"),
                 "--biases"}).code,
            kBadArguments);
  EXPECT_EQ(run({"train", "--cooc", path("ab.cooc"), "--output", path("m"),
                 "--zero-rate", "1.5"}).code,
            kBadArguments);
  EXPECT_EQ(run({"train", "--cooc", path("ab.cooc"), "--output", path("m"),
                 "--zero-rate", "half"}).code,
            kBadArguments);
  EXPECT_FALSE(fs::exists(path("m.lxm")));
}

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("build-cooc"), std::string::npos);
}

TEST_F(CliTest, CorruptCoocIsIoError) {
  write("bad.cooc", "LXF1 garbage");
  EXPECT_EQ(run({"train", "--cooc", path("bad.cooc"), "--output", path("m")}).code,
            kIoError);
  EXPECT_EQ(run({"eval", "identity", "--cooc", path("bad.cooc")}).code, kIoError);
}

TEST_F(CliTest, RerunGivesIdenticalFiles) {
  ASSERT_EQ(build_abab("one/ab").code, kOk);
  ASSERT_EQ(build_abab("two/ab").code, kOk);
  for (const char* name : {"ab.cooc", "ab.vocab.tsv", "ab.manifest.json"}) {
    EXPECT_EQ(slurp(dir_ / "one" / name), slurp(dir_ / "two" / name)) << name;
  }
}

TEST_F(CliTest, FullBatchSgnsLogIsNonDecreasing) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  const auto r = run({"train", "--cooc", path("ab.cooc"), "--output", path("m"),
                      "--objective", "sgns", "--k", "1", "--dim", "2", "--mode",
                      "full-batch", "--epochs", "40", "--lr", "0.01"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = log_rows("m");
  ASSERT_EQ(rows.size(), 40u);
  double prev = -1e300;
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 5u);
    const double obj = std::stod(row[1]);
    EXPECT_GE(obj, prev - 1e-12);
    prev = obj;
  }
  EXPECT_TRUE(fs::exists(path("m.lxm")));
}

TEST_F(CliTest, GloveLogShowsNoZeroCells) {
  write("text.txt", "the cat sat on the mat while the dog sat on the log");
  ASSERT_EQ(run({"build-cooc", "--input", path("text.txt"), "--output", path("t"),
                 "--min-count", "1", "--window", "2"}).code,
            kOk);
  const auto r = run({"train", "--cooc", path("t.cooc"), "--output", path("g"),
                      "--objective", "glove", "--dim", "4", "--epochs", "5",
                      "--biases"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = log_rows("g");
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) EXPECT_EQ(row[3], "0");
}

TEST_F(CliTest, SameSeedGivesIdenticalLogs) {
  write("text.txt", "the cat sat on the mat while the dog sat on the log");
  ASSERT_EQ(run({"build-cooc", "--input", path("text.txt"), "--output", path("t"),
                 "--min-count", "1"}).code,
            kOk);
  for (const char* name : {"r1", "r2"}) {
    ASSERT_EQ(run({"train", "--cooc", path("t.cooc"), "--output", path(name),
                   "--dim", "3", "--epochs", "4", "--seed", "9", "--quiet"}).code,
              kOk);
  }
  EXPECT_EQ(slurp(path("r1.log.tsv")), slurp(path("r2.log.tsv")));
  EXPECT_EQ(slurp(path("r1.lxm")), slurp(path("r2.lxm")));
}

TEST_F(CliTest, EvalIdentity) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  const auto r = run({"eval", "identity", "--cooc", path("ab.cooc"), "--k", "1", "--tsv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::size_t cells = 0;
  double dev = 1.0;
  std::getline(in, header);
  in >> cells >> dev;
  EXPECT_EQ(cells, 2u);
  EXPECT_LT(dev, 1e-10);
}

TEST_F(CliTest, EvalIdentityRejectsSmoothing) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  EXPECT_EQ(run({"eval", "identity", "--cooc", path("ab.cooc"), "--alpha", "0.75"}).code,
            kBadArguments);
}

TEST_F(CliTest, EvalNeighborsAndSimilarity) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  ASSERT_EQ(run({"train", "--cooc", path("ab.cooc"), "--output", path("m"), "--dim",
                 "2", "--epochs", "3", "--quiet"}).code,
            kOk);
  const auto nb = run({"eval", "neighbors", "a", "--model", path("m.lxm"), "--vocab",
                       path("ab.vocab.tsv"), "--tsv"});
  ASSERT_EQ(nb.code, kOk) << nb.err;
  EXPECT_EQ(nb.out.rfind("rank\ttoken\tsimilarity\n1\tb\t", 0), 0u) << nb.out;

  const auto sim = run({"eval", "similarity", "a", "a", "--model", path("m.lxm"),
                        "--vocab", path("ab.vocab.tsv")});
  ASSERT_EQ(sim.code, kOk) << sim.err;
  EXPECT_NEAR(std::stod(sim.out), 1.0, 1e-12);

  const auto unknown = run({"eval", "neighbors", "zebra", "--model", path("m.lxm"),
                            "--vocab", path("ab.vocab.tsv")});
  EXPECT_EQ(unknown.code, kUnknownToken);
  EXPECT_NE(unknown.err.find("zebra"), std::string::npos);
  EXPECT_EQ(run({"eval", "similarity", "a", "zebra", "--model", path("m.lxm"),
                 "--vocab", path("ab.vocab.tsv")}).code,
            kUnknownToken);
}

TEST_F(CliTest, EvalGradcheck) {
  for (const char* obj : {"sgns", "sgns-ls", "glove"}) {
    const auto r = run({"eval", "gradcheck", "--objective", obj, "--tsv"});
    ASSERT_EQ(r.code, kOk) << obj << r.err;
    EXPECT_NE(r.out.find("\tpass\n"), std::string::npos) << r.out;
  }
}

TEST_F(CliTest, ReplayReproducesOutputs) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  ASSERT_EQ(run({"train", "--cooc", path("ab.cooc"), "--vocab", path("ab.vocab.tsv"),
                 "--output", path("m"), "--dim", "3", "--epochs", "3", "--quiet",
                 "--export-text"}).code,
            kOk);
  for (const char* m : {"ab", "m"}) {
    const auto r = run({"replay", path(std::string(m) + ".manifest.json"),
                        "--output", path(std::string("re/") + m)});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("replay reproduced all outputs"), std::string::npos);
  }
  EXPECT_EQ(slurp(path("m.lxm")), slurp(path("re/m.lxm")));
  EXPECT_EQ(slurp(path("m.vec")), slurp(path("re/m.vec")));
}

TEST_F(CliTest, ReplayRejectsChangedInput) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  write("abab.txt", "a b a b a");
  EXPECT_EQ(run({"replay", path("ab.manifest.json"), "--output", path("re/ab")}).code,
            kIoError);
}

TEST_F(CliTest, ManifestRecordsDefaults) {
  ASSERT_EQ(build_abab("ab").code, kOk);
  ASSERT_EQ(run({"train", "--cooc", path("ab.cooc"), "--output", path("m"), "--epochs",
                 "1", "--quiet"}).code,
            kOk);
  const auto text = slurp(path("m.manifest.json"));
  for (const char* key : {"\"learning_rate\"", "\"dimension\": 50", "\"k\": 5.0",
                          "\"window\": 1", "\"min_count\": 1", "\"zero_cells\": \"auto\"",
                          "\"sha256\"", "\"tool_version\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace wlpca::cli
