// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <map>
#include <sstream>

#include "../support/test_support.h"
#include "tinyrel/checkpoint.h"
#include "tinyrel/cli.h"
#include "tinyrel/tsv.h"
#include "tinyrel/vocab.h"

namespace tinyrel {
namespace {

using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tinyrel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> KeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string Fixture(const std::string& name) { return testing::DataDir() + "/fixture/" + name; }

// build-vocab -> make-transfer -> train -> eval on the bundled fixture.
struct PipelineOutputs {
  std::string checkpoint;
  std::string report;
  std::string transfer;
  std::string vocab;
};

PipelineOutputs RunPipeline(const TempDir& dir) {
  Result r = Cli({"build-vocab", "--corpus", Fixture("corpus.tsv"), "--min-count", "2", "--out", dir.File("v.tsv")});
  EXPECT_EQ(r.code, 0) << r.err;
  r = Cli({"make-transfer", "--scores", Fixture("teacher_0.tsv"), Fixture("teacher_1.tsv"), "-T", "2", "--out",
           dir.File("transfer.tsv"), "--temp-dir", dir.path().string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(KeyValues(r.out)["distilled"], "10000");
  r = Cli({"train", "--transfer", dir.File("transfer.tsv"), "--vocab", dir.File("v.tsv"), "--hidden", "32,16",
           "--dim", "16", "--epochs", "4", "--batch-size", "64", "--seed", "5", "--out", dir.File("m.ckpt")});
  EXPECT_EQ(r.code, 0) << r.err;
  r = Cli({"eval", "--checkpoint", dir.File("m.ckpt"), "--labeled", Fixture("heldout.tsv"), "--out",
           dir.File("report.txt")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, ReadFile(dir.File("report.txt")));
  return {ReadFile(dir.File("m.ckpt")), r.out, ReadFile(dir.File("transfer.tsv")), ReadFile(dir.File("v.tsv"))};
}

TEST(CliPipeline, FixtureRunsAreBitwiseIdenticalAndLearn) {
  TempDir a, b;
  const auto first = RunPipeline(a);
  const auto second = RunPipeline(b);
  EXPECT_EQ(first.vocab, second.vocab);
  EXPECT_EQ(first.transfer, second.transfer);
  EXPECT_EQ(first.checkpoint, second.checkpoint);
  EXPECT_EQ(first.report, second.report);
  const auto metrics = KeyValues(first.report);
  EXPECT_EQ(metrics.at("count"), "1000");
  EXPECT_GT(*ParseDouble(metrics.at("auc")), 0.9);
  EXPECT_GT(*ParseDouble(metrics.at("pcc")), 0.8);
  // Loss log: header plus one row per epoch, non-increasing at this scale.
  LineReader log(a.File("m.ckpt.loss.tsv"));
  std::string line;
  ASSERT_TRUE(log.Next(line));
  EXPECT_EQ(line, "epoch\tmean_loss");
  std::vector<double> losses;
  while (log.Next(line)) losses.push_back(*ParseDouble(SplitTabs(line)[1]));
  ASSERT_EQ(losses.size(), 4u);
  EXPECT_LT(losses.back(), losses.front());
}

TEST(CliTrain, ZeroLearningRateKeepsInitialization) {
  TempDir dir;
  WriteFile(dir.File("corpus.tsv"), "red shoe\tred shoe for men\nred hat\tblue hat\n");
  WriteFile(dir.File("transfer.tsv"),
            "#transfer v1 T=1 teachers=1\nred hat\tblue hat\t0.25\tdistilled\nred shoe\tred shoe for men\t0.75\t"
            "distilled\n");
  ASSERT_EQ(Cli({"build-vocab", "--corpus", dir.File("corpus.tsv"), "--min-count", "1", "--out", dir.File("v.tsv")})
                .code,
            0);
  const Result r = Cli({"train", "--transfer", dir.File("transfer.tsv"), "--vocab", dir.File("v.tsv"), "--hidden",
                        "8,4", "--dim", "6", "--lr", "0", "--epochs", "3", "--seed", "9", "--out", dir.File("m.ckpt")});
  ASSERT_EQ(r.code, 0) << r.err;

  StudentConfig c;
  c.hidden_sizes = {8, 4};
  c.embedding_dim = 6;
  c.learning_rate = 0;
  c.epochs = 3;
  c.seed = 9;
  const Vocab vocab = LoadVocab(dir.File("v.tsv"));
  SaveCheckpoint(InitStudent<float>(c, vocab.size()), vocab, dir.File("init.ckpt"));
  EXPECT_EQ(ReadFile(dir.File("m.ckpt")), ReadFile(dir.File("init.ckpt")));
}

class CliWithModel : public ::testing::Test {
 protected:
  void SetUp() override {
    WriteFile(dir_.File("corpus.tsv"), "red sweater\tblack sweater\nred shoe\tred hat\n");
    WriteFile(dir_.File("transfer.tsv"), "#transfer v1 T=1 teachers=1\nred shoe\tred hat\t0.5\tdistilled\n");
    ASSERT_EQ(Cli({"build-vocab", "--corpus", dir_.File("corpus.tsv"), "--min-count", "1", "--out",
                   dir_.File("v.tsv")})
                  .code,
              0);
    ASSERT_EQ(Cli({"train", "--transfer", dir_.File("transfer.tsv"), "--vocab", dir_.File("v.tsv"), "--hidden", "4",
                   "--dim", "5", "--epochs", "1", "--out", Model()})
                  .code,
              0);
  }
  std::string Model() const { return dir_.File("m.ckpt"); }

  TempDir dir_;
};

TEST_F(CliWithModel, EmbedDistOfIdenticalTextsIsZero) {
  const Result r = Cli({"embed-dist", "--checkpoint", Model(), "red sweater", "red sweater"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "cosine=0\neuclidean=0\nmanhattan=0\n");
  const auto kv = KeyValues(Cli({"embed-dist", "--checkpoint", Model(), "red sweater", "black sweater"}).out);
  EXPECT_GT(*ParseDouble(kv.at("euclidean")), 0.0);
}

TEST_F(CliWithModel, EmbedDistWithNoKnownTokensIsNumericFailure) {
  const Result r = Cli({"embed-dist", "--checkpoint", Model(), "zzz", "red"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("numeric"), std::string::npos);
}

TEST_F(CliWithModel, HeatmapAndBench) {
  WriteFile(dir_.File("texts.txt"), "red sweater\n\nblack sweater\n");
  Result r = Cli({"embed-heatmap", "--checkpoint", Model(), "--texts", dir_.File("texts.txt"), "--out",
                  dir_.File("heat.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(KeyValues(r.out)["rows"], "2");
  EXPECT_EQ(ReadFile(dir_.File("heat.tsv")).substr(0, 16), "text\te0\te1\te2\te3");

  for (int i = 0; i < 2; ++i) {
    r = Cli({"bench", "--checkpoint", Model(), "--corpus", dir_.File("corpus.tsv"), "--batches", "3", "--batch-size",
             "4", "--tsv", dir_.File("bench.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(KeyValues(r.out)["total_examples"], "12");
  EXPECT_NE(r.err.find("cycling"), std::string::npos);
  LineReader rows(dir_.File("bench.tsv"));
  std::string line;
  std::vector<std::string> lines;
  while (rows.Next(line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].substr(0, 7), "batches");
  EXPECT_EQ(SplitTabs(lines[1]).back(), SplitTabs(lines[2]).back());  // same checksum
}

TEST_F(CliWithModel, EvalReportsFormatErrorWithLocation) {
  WriteFile(dir_.File("labeled.tsv"), "red\tshoe\t1\nred\that\tnope\n");
  const Result r = Cli({"eval", "--checkpoint", Model(), "--labeled", dir_.File("labeled.tsv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("labeled.tsv:2"), std::string::npos) << r.err;
}

TEST_F(CliWithModel, TruncatedCheckpointIsFormatClassExit) {
  const std::string bytes = ReadFile(Model());
  WriteFile(dir_.File("cut.ckpt"), bytes.substr(0, bytes.size() / 2));
  const Result r = Cli({"embed-dist", "--checkpoint", dir_.File("cut.ckpt"), "red", "red"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("truncated"), std::string::npos) << r.err;
}

TEST(CliUsage, BadInvocationsExitOne) {
  EXPECT_EQ(Cli({}).code, 1);
  EXPECT_EQ(Cli({"no-such-command"}).code, 1);
  EXPECT_EQ(Cli({"build-vocab"}).code, 1);  // missing required options
  EXPECT_EQ(Cli({"train", "--transfer", "/nonexistent", "--vocab", "/nonexistent", "--out", "x"}).code, 1);
  TempDir dir;
  WriteFile(dir.File("s.tsv"), "#teacher-scores v1 teacher=a kind=prob\n");
  EXPECT_EQ(Cli({"make-transfer", "--scores", dir.File("s.tsv"), "--policy", "lenient", "--out", dir.File("o")}).code,
            1);
  EXPECT_EQ(Cli({"make-transfer", "--scores", dir.File("s.tsv"), "-T", "0", "--out", dir.File("o")}).code, 1);
}

TEST(CliUsage, HelpForEverySubcommandExitsZero) {
  for (const char* sub : {"build-vocab", "make-transfer", "train", "eval", "bench", "embed-dist", "embed-heatmap"}) {
    const Result r = Cli({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
  const Result top = Cli({"--help"});
  EXPECT_EQ(top.code, 0);
  EXPECT_NE(top.out.find("make-transfer"), std::string::npos);
  EXPECT_EQ(top.out.find("synth-teacher"), std::string::npos);  // hidden
}

TEST(CliConfig, FileOverridesDefaultsAndIsLogged) {
  TempDir dir;
  WriteFile(dir.File("corpus.tsv"), "a b\tc\na\tb c\n");
  WriteFile(dir.File("cfg.toml"), "[build-vocab]\nmin-count = 2\n");
  const Result r = Cli({"--config", dir.File("cfg.toml"), "build-vocab", "--corpus", dir.File("corpus.tsv"), "--out",
                        dir.File("v.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  // Twice-seen tokens: a, b, c, ^a, c$.
  EXPECT_EQ(KeyValues(r.out)["vocab_size"], "5");
  EXPECT_NE(r.err.find("min-count=2"), std::string::npos) << r.err;
}

TEST(CliTransfer, UnsortedInputsBehaviorAndPositives) {
  TempDir dir;
  WriteFile(dir.File("s0.tsv"),
            "#teacher-scores v1 teacher=a kind=logits\nz\tz\t1\t0\nb\tb\t0\t0\na\ta\t2\t-2\nc\tc\t0\t1\n");
  WriteFile(dir.File("s1.tsv"), "#teacher-scores v1 teacher=b kind=prob\nc\tc\t0.5\na\ta\t0.5\nb\tb\t0.5\n");
  WriteFile(dir.File("beh.tsv"), "#behavior v1\nb\tb\t0\t30\t0\t0\na\ta\t1\t1\t1\t0\nc\tc\t0\t1\t0\t0\n");
  WriteFile(dir.File("pos.tsv"), "#positives v1\nq\tclicked\n");
  const Result r = Cli({"make-transfer", "--scores", dir.File("s0.tsv"), dir.File("s1.tsv"), "--behavior",
                        dir.File("beh.tsv"), "--policy", "strict", "--positives", dir.File("pos.tsv"), "--out",
                        dir.File("t.tsv"), "--sort-run-lines", "2", "--temp-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = KeyValues(r.out);
  EXPECT_EQ(kv.at("matched"), "3");
  EXPECT_EQ(kv.at("unmatched"), "1");
  EXPECT_EQ(kv.at("dropped"), "1");  // b: 30 displays, no clicks
  EXPECT_EQ(kv.at("distilled"), "2");
  EXPECT_EQ(kv.at("positives"), "1");
  const std::string text = ReadFile(dir.File("t.tsv"));
  EXPECT_EQ(text.substr(0, text.find('\n')), "#transfer v1 T=1 teachers=2");
  EXPECT_NE(text.find("q\tclicked\t1\t"), std::string::npos);
  // Scratch sort directory is removed.
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    EXPECT_EQ(e.path().filename().string().rfind("tinyrel-transfer-", 0), std::string::npos);
  }
}

TEST(CliTransfer, DuplicateKeyIsFormatError) {
  TempDir dir;
  WriteFile(dir.File("s.tsv"), "#teacher-scores v1 teacher=a kind=prob\nred\tshoe\t0.1\nred\tshoe\t0.2\n");
  const Result r = Cli({"make-transfer", "--scores", dir.File("s.tsv"), "--assume-sorted", "--out", dir.File("t")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("(red, shoe)"), std::string::npos) << r.err;
}

TEST(CliBinary, ExitCodesFromRealProcess) {
  const std::string cli = TINYREL_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status("bogus"), 1);
  TempDir dir;
  WriteFile(dir.File("v.tsv"), "#cwub-vocab v1 size=1\nred\t0\tnotanumber\n");
  WriteFile(dir.File("t.tsv"), "#transfer v1 T=1 teachers=1\n");
  EXPECT_EQ(status("train --transfer " + dir.File("t.tsv") + " --vocab " + dir.File("v.tsv") + " --out " +
                   dir.File("m.ckpt")),
            2);
}

}  // namespace
}  // namespace tinyrel
