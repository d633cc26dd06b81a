#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("macs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("small.yaml", R"(network:
  trunk_hidden1: 32
  trunk_hidden2: 16
  head_hidden: 8
  input_scale: 0.05
agent:
  minibatch: 8
training:
  horizon: 30
  pretrain_transitions: 20
  pretrain_steps: 5
experiment:
  seeds: [1, 2]
  eval_horizon: 20
)");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  std::string read(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(MACS_CLI) + " " + args + " > " + (dir_ / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string config() const { return "--config " + (dir_ / "small.yaml").string(); }
  std::string out(const std::string& sub) const { return "--out " + (dir_ / sub).string(); }

  fs::path dir_;
};

TEST_F(Cli, TrainThenCompare) {
  ASSERT_EQ(run("train " + config() + " " + out("t")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "t" / "checkpoint.bin"));
  EXPECT_TRUE(fs::exists(dir_ / "t" / "training.csv"));
  const std::string ckpt = "--checkpoint " + (dir_ / "t" / "checkpoint.bin").string();
  ASSERT_EQ(run("compare " + config() + " " + ckpt + " " + out("c")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "c" / "compare.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "c" / "compare_summary.csv"));
}

TEST_F(Cli, RerunsAreByteIdentical) {
  ASSERT_EQ(run("train " + config() + " --seed 3 " + out("a")), 0);
  ASSERT_EQ(run("train " + config() + " --seed 3 " + out("b")), 0);
  EXPECT_EQ(read(dir_ / "a" / "checkpoint.bin"), read(dir_ / "b" / "checkpoint.bin"));
  EXPECT_EQ(read(dir_ / "a" / "training.csv"), read(dir_ / "b" / "training.csv"));
  const std::string ckpt = "--checkpoint " + (dir_ / "a" / "checkpoint.bin").string();
  ASSERT_EQ(run("compare " + config() + " --seed 9 " + ckpt + " " + out("c1")), 0);
  ASSERT_EQ(run("compare " + config() + " --seed 9 " + ckpt + " " + out("c2")), 0);
  EXPECT_EQ(read(dir_ / "c1" / "compare.csv"), read(dir_ / "c2" / "compare.csv"));
  EXPECT_NE(read(dir_ / "c1" / "compare.csv").find("\n9,learned,0,"), std::string::npos);
}

TEST_F(Cli, OtherSubcommands) {
  EXPECT_EQ(run("online-train " + config() + " " + out("o")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "online_checkpoint.bin"));
  EXPECT_EQ(run("gen-topology " + out("g")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "g" / "topology.csv"));
  write("baselines.yaml", "experiment:\n  policies: [greedy, anti_entropy]\n  seeds: [1]\n  eval_horizon: 10\n");
  EXPECT_EQ(run("sweep --config " + (dir_ / "baselines.yaml").string() + " --axis budget_lambda --values 1,3,5 " +
                out("s")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "sweep_budget_lambda.csv"));
}

TEST_F(Cli, ConfigErrorsExitWithOne) {
  write("bad.yaml", "dynamics:\n  budget: 3\n");
  EXPECT_EQ(run("train --config " + (dir_ / "bad.yaml").string() + " " + out("x")), 1);
  write("malformed.yaml", "agent: {gamma: [\n");
  EXPECT_EQ(run("compare --config " + (dir_ / "malformed.yaml").string()), 1);
  EXPECT_EQ(run("train --config " + (dir_ / "absent.yaml").string()), 1);
  EXPECT_EQ(run("sweep --axis budget_lambda --values 1,x"), 1);
  EXPECT_EQ(run("sweep --axis gamma --values 1"), 1);
  EXPECT_EQ(run("bogus"), 1);
  EXPECT_EQ(run(""), 1);
  write("oneway.yaml", "topology:\n  domains: 2\n  edges: [[0, 1]]\n");
  EXPECT_EQ(run("gen-topology --config " + (dir_ / "oneway.yaml").string() + " " + out("x")), 1);
  write("odd.yaml", "topology:\n  degree_sequence: [1, 1, 1]\n");
  EXPECT_EQ(run("gen-topology --config " + (dir_ / "odd.yaml").string() + " " + out("x")), 1);
}

TEST_F(Cli, ShippedConfigsParse) {
  for (const char* name : {"scenario1.yaml", "smoke.yaml"}) {
    EXPECT_EQ(run("gen-topology --config " + std::string(MACS_CONFIG_DIR) + "/" + name + " " + out(name)), 0) << name;
  }
}

TEST_F(Cli, RuntimeErrorsExitWithTwo) {
  EXPECT_EQ(run("compare " + config() + " " + out("c")), 2);
  EXPECT_EQ(run("compare " + config() + " --checkpoint " + (dir_ / "none.bin").string() + " " + out("c")), 2);
  write("garbage.bin", "not a checkpoint");
  EXPECT_EQ(run("compare " + config() + " --checkpoint " + (dir_ / "garbage.bin").string() + " " + out("c")), 2);
}

TEST_F(Cli, HelpSucceeds) { EXPECT_EQ(run("--help"), 0); }

}  // namespace
