#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lwgcn/cli.hpp"
#include "oracles.hpp"

using lwgcn::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = oracle::scratch(std::string("cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    setenv("LWGCN_OUTPUT_ROOT", root_.c_str(), 1);
  }
  void TearDown() override { unsetenv("LWGCN_OUTPUT_ROOT"); }
  std::filesystem::path root_;
};

}  // namespace

TEST_F(Cli, HelpAndUnknownFlags) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"train", "--help"}).code, 0);
  EXPECT_EQ(run({"train", "--no-such-flag"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST_F(Cli, BoundValues) {
  auto r = run({"bound", "--k", "2", "--delta", "0.01", "--eps", "0.01"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bound=528.82"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1000/1000"), std::string::npos);
  r = run({"bound", "--k", "8", "--delta", "0.01", "--eps", "0.01"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bound=667.07"), std::string::npos) << r.out;
  EXPECT_EQ(run({"bound", "--eps", "0.5"}).code, 2);
  EXPECT_EQ(run({"bound", "--k", "1"}).code, 2);
}

TEST_F(Cli, Gradcheck) {
  auto r = run({"gradcheck", "--seeds", "3"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(lines(r.out), 16u);  // 4 modes x 4 groups
  EXPECT_EQ(run({"gradcheck", "--mode", "orth+stc", "--k", "4", "--n", "8", "--seeds", "2"}).code, 0);
  r = run({"gradcheck", "--inject-fault", "--seeds", "1", "--mode", "orth"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("head max_rel_error"), std::string::npos);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, TrainWritesArtifacts) {
  const auto r = run({"train", "--synthetic", "--classes", "5", "--epochs", "50", "--mode", "none", "--out", "t",
                      "--channels", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto dir = root_ / "t";
  EXPECT_EQ(lines(slurp(dir / "metrics.csv")), 51u);  // header + 50 rows
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["epochs_executed"], 50);
  EXPECT_TRUE(summary.contains("mean_class_accuracy"));
  EXPECT_TRUE(summary.contains("pruning_rate"));
  EXPECT_TRUE(summary.contains("max_cross_orth"));
  EXPECT_TRUE(std::filesystem::exists(dir / "checkpoint.json"));
  EXPECT_NE(slurp(dir / "runspec.txt").find("epochs = 50"), std::string::npos);
}

TEST_F(Cli, TrainIsDeterministic) {
  for (const char* out : {"a", "b"})
    ASSERT_EQ(run({"train", "--epochs", "15", "--seed", "7", "--channels", "4", "--out", out}).code, 0);
  EXPECT_EQ(slurp(root_ / "a" / "summary.json"), slurp(root_ / "b" / "summary.json"));
  EXPECT_EQ(slurp(root_ / "a" / "metrics.csv"), slurp(root_ / "b" / "metrics.csv"));
}

TEST_F(Cli, DataErrorsExitTwo) {
  EXPECT_EQ(run({"train", "--fpha"}).code, 2);
  EXPECT_EQ(run({"train", "--fpha", (root_ / "missing.csv").string()}).code, 2);
  EXPECT_EQ(run({"train", "--synthetic", "--fpha", "x.csv"}).code, 2);
  EXPECT_EQ(run({"train", "--mode", "diagonal"}).code, 2);
  EXPECT_EQ(run({"train", "--lr-factor", "1.5"}).code, 2);
  EXPECT_EQ(run({"train", "--k", "2,3"}).code, 2);
}

TEST_F(Cli, DivergenceExitsThree) {
  const auto r = run({"train", "--epochs", "30", "--mode", "none", "--lr", "1e300", "--lr-max", "1e300",
                      "--channels", "4", "--activation", "identity"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("state:"), std::string::npos);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = root_ / "run.cfg";
  std::ofstream(cfg) << "# comment\nepochs = 9\nmode = orth\nchannels = 4\nout = c\n";
  auto r = run({"train", "--config", cfg.string(), "--epochs", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(slurp(root_ / "c" / "metrics.csv")), 5u);
  const auto echo = slurp(root_ / "c" / "runspec.txt");
  EXPECT_NE(echo.find("epochs = 4"), std::string::npos);
  EXPECT_NE(echo.find("mode = \"orth\""), std::string::npos);
  // the echoed spec reproduces the run
  r = run({"train", "--config", (root_ / "c" / "runspec.txt").string(), "--out", "c2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(root_ / "c" / "summary.json"), slurp(root_ / "c2" / "summary.json"));
  // unknown keys are rejected
  std::ofstream(cfg) << "epochz = 9\n";
  EXPECT_EQ(run({"train", "--config", cfg.string()}).code, 2);
}

TEST_F(Cli, EvalAndPrune) {
  ASSERT_EQ(run({"train", "--epochs", "10", "--mode", "orth", "--channels", "4", "--out", "m"}).code, 0);
  const auto ckpt = (root_ / "m" / "checkpoint.json").string();
  auto r = run({"eval", "--checkpoint", ckpt, "--out", "e"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ev = nlohmann::json::parse(slurp(root_ / "e" / "eval.json"));
  const auto tr = nlohmann::json::parse(slurp(root_ / "m" / "summary.json"));
  EXPECT_EQ(ev["mean_class_accuracy"], tr["mean_class_accuracy"]);
  EXPECT_EQ(ev["confusion"].size(), 5u);

  r = run({"prune", "--checkpoint", ckpt, "--prune-rate", "80", "--fine-tune-epochs", "3", "--mode", "orth",
           "--channels", "4", "--out", "p"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ps = nlohmann::json::parse(slurp(root_ / "p" / "summary.json"));
  EXPECT_TRUE(ps["pruned"].get<bool>());
  EXPECT_GE(ps["pruning_rate"].get<double>(), 80.0);
  EXPECT_EQ(lines(slurp(root_ / "p" / "metrics.csv")), 4u);
  EXPECT_EQ(run({"prune", "--prune-rate", "50"}).code, 2);
  EXPECT_EQ(run({"eval", "--checkpoint", ckpt, "--joints", "9"}).code, 2);  // shape mismatch
}

TEST_F(Cli, PeriodicCheckpoints) {
  ASSERT_EQ(run({"train", "--epochs", "6", "--checkpoint-every", "3", "--channels", "4", "--out", "pc"}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(root_ / "pc" / "checkpoint_epoch_3.json"));
  EXPECT_TRUE(std::filesystem::exists(root_ / "pc" / "checkpoint_epoch_6.json"));
  EXPECT_FALSE(std::filesystem::exists(root_ / "pc" / "checkpoint_epoch_4.json"));
}

TEST_F(Cli, AblateTables) {
  auto r = run({"ablate", "--k", "2", "--modes", "L", "--epochs", "2", "--channels", "4", "--out", "a1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(slurp(root_ / "a1" / "ablation.csv")), 2u);

  r = run({"ablate", "--k", "2,4", "--modes", "L,L+orth", "--epochs", "2", "--channels", "4", "--out", "a2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(root_ / "a2" / "ablation.csv");
  EXPECT_EQ(lines(csv), 5u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "K,mode,accuracy,pruning_rate,target_rate");
  EXPECT_NE(csv.find("2,L,"), std::string::npos);
  EXPECT_NE(csv.find(",none,none"), std::string::npos);

  r = run({"ablate", "--modes", "L+orth+stc", "--k", "8", "--joints", "21", "--epochs", "1", "--channels", "2",
           "--per-class", "2", "--out", "a3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(root_ / "a3" / "ablation.json"));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["target_rate"], 95.0);
  EXPECT_EQ(run({"ablate", "--modes", "L+nonsense", "--epochs", "1"}).code, 2);
}

TEST_F(Cli, OutputRootOverride) {
  ASSERT_EQ(run({"train", "--epochs", "2", "--channels", "4", "--out", "rooted"}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(root_ / "rooted" / "summary.json"));
}
