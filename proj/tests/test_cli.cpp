#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aptrisk/graph.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("aptrisk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(APTRISK_CLI) + "' " +
                            args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

const std::string kSpecs = std::string(APTRISK_SOURCE_DIR) + "/experiments/";

}  // namespace

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("loss --graph path:n=2 --strategy UN --bogus 1").code, 1);
  EXPECT_EQ(run("loss --graph path:n=2").code, 1);  // --strategy missing
  EXPECT_EQ(run("loss --graph path:n=2 --strategy 1,2,3").code, 1);
  EXPECT_EQ(run("assess --graph path:n=2 --restarts 0").code, 1);
  EXPECT_EQ(run("check-theorems --trials 0").code, 1);
  EXPECT_EQ(run("sweep --graph path:n=2 --B 1..3 --T 1..3").code, 1);
  EXPECT_EQ(run("compare --spec " + kSpecs + "exp4_ci.spec --graph gsw").code, 1);
  EXPECT_EQ(run("scan --spec " + kSpecs + "exp4_ci.spec").code, 1);
  EXPECT_EQ(run("compare --spec missing.spec").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ModelErrorsExitTwo) {
  std::ofstream(dir_ / "bad.edges") << "1 2\n3 3\n";
  const Outcome bad = run("loss --graph bad.edges --strategy UN");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run("loss --graph missing.edges --strategy UN").code, 2);
  EXPECT_EQ(run("loss --graph path:n=2 --strategy UN --gamma 0").code, 2);
  EXPECT_EQ(run("scan --graph path:n=5 --divisions 2").code, 2);
  EXPECT_EQ(run("simulate --graph path:n=2 --strategy 1e10,1e10 --alpha 1e300").code, 2);
}

TEST_F(Cli, EmptyGridCreatesNoFile) {
  const Outcome r = run("compare --graph path:n=2 --B '' --out result.csv");
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(dir_ / "result.csv"));
}

TEST_F(Cli, GenerateRoundTrip) {
  const Outcome r = run("generate --graph sw:n=20,k=4,p=0.3,seed=5 --out g.edges");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(aptrisk::read_edge_list(slurp(dir_ / "g.edges")),
            aptrisk::generate_small_world(20, 4, 0.3, 5));
  const Outcome again = run("generate --graph g.edges");
  EXPECT_EQ(again.out, slurp(dir_ / "g.edges"));
}

TEST_F(Cli, LossAndSimulate) {
  const Outcome loss = run("loss --graph path:n=2 --T 50 --strategy 1,1");
  ASSERT_EQ(loss.code, 0) << loss.err;
  const auto j = nlohmann::json::parse(loss.out);
  EXPECT_GT(j["loss"].get<double>(), 0);
  EXPECT_EQ(j["strategy"], (std::vector<double>{1, 1}));

  const Outcome sim = run("simulate --graph path:n=2 --T 50 --strategy 1,1");
  ASSERT_EQ(sim.code, 0);
  const auto last = sim.out.substr(sim.out.rfind('\n', sim.out.size() - 2) + 1);
  EXPECT_EQ(last.substr(0, 3), "50,");
  EXPECT_NEAR(std::stod(last.substr(3)), 0.6180339887498949, 1e-6);

  std::ofstream(dir_ / "x.csv") << "# budget=10\n2,8\n";
  EXPECT_EQ(run("loss --graph path:n=2 --strategy x.csv").code, 0);
  EXPECT_EQ(run("loss --graph path:n=2 --strategy x.csv --B 5").code, 1);
  EXPECT_EQ(run("loss --graph path:n=2 --strategy SL --B 3").code, 0);
}

TEST_F(Cli, AssessWritesStrategy) {
  const Outcome r = run("assess --graph path:n=2 --restarts 2 --strategy-out hc.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["restart_losses"].size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "hc.csv"));
  EXPECT_EQ(run("loss --graph path:n=2 --strategy hc.csv").code, 0);
}

TEST_F(Cli, ByteIdenticalForSameSeed) {
  const std::string commands[] = {
      "assess --graph gsf --T 5 --B 3 --seed 9 --restarts 2",
      "compare --graph four:3 --T 5 --B 1,2 --seed 4 --restarts 2",
      "sweep --graph path:n=3 --B 1..3 --T 5 --seed 4 --restarts 1",
      "scan --graph complete:n=3 --divisions 20",
      "check-theorems --trials 2 --seed 5",
      "generate --graph ba:n=40,m=2,seed=3",
  };
  for (const std::string& c : commands) {
    const Outcome a = run(c);
    const Outcome b = run(c);
    ASSERT_EQ(a.code, 0) << c << "\n" << a.err;
    EXPECT_FALSE(a.out.empty()) << c;
    EXPECT_EQ(a.out, b.out) << c;
  }
}

TEST_F(Cli, ScanWritesLatticeAndSummary) {
  const Outcome r = run("scan --graph path:n=2 --divisions 10 --out scan/lattice.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "scan" / "lattice.csv"));
  EXPECT_EQ(slurp(dir_ / "scan" / "lattice_summary.csv"), r.out);
}

TEST_F(Cli, CheckTheoremsReport) {
  const Outcome r = run("check-theorems --trials 3 --seed 2 --out report.json");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_EQ(j["theorems"].size(), 4u);
  EXPECT_NE(r.err.find("theorem 4"), std::string::npos);
}
