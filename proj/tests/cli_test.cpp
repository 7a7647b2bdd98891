#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = FORCE_CLI_PATH;
const std::string kSamples = FORCE_SAMPLES_DIR;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  auto path = fs::temp_directory_path() / ("force_cli_" + std::to_string(::getpid()) + ".out");
  int status = std::system((kCli + " " + args + " >" + path.string() + " 2>&1").c_str());
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  fs::remove(path);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("force_cli_" + std::to_string(::getpid()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(tmp(name)) << text;
    return tmp(name);
  }

  const std::string cfg_ = kSamples + "/toy.cfg";
  const std::string traces_ = kSamples + "/toy.traces";
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthToy) {
  auto r = run("synth --config " + cfg_ + " --traces " + traces_ + " --out " + tmp("out.txt") + " --stats " + tmp("s.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  auto out = slurp(tmp("out.txt"));
  EXPECT_EQ(out.rfind("force-format v1\n", 0), 0u);
  EXPECT_NE(out.find("forall X1:X. p(X1) | q(X1)\n"), std::string::npos);
  EXPECT_NE(out.find("forall X1:X. p(X1) | ~r(X1)\n"), std::string::npos);
  EXPECT_NE(slurp(tmp("s.json")).find("\"tested\""), std::string::npos);
  // Every synthesized formula re-verifies.
  auto check = run("check --config " + cfg_ + " --traces " + traces_ + " --formulas " + tmp("out.txt"));
  EXPECT_EQ(check.code, 0) << check.out;
}

TEST_F(Cli, MissingTracesIsAUsageError) {
  EXPECT_EQ(run("synth --config " + cfg_ + " --out " + tmp("o")).code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, InputErrorsNameTheFile) {
  auto bad = write("bad.traces", "universe: X=3\nsample\np: (7)\nend\n");
  auto r = run("synth --config " + cfg_ + " --traces " + bad + " --out " + tmp("o"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("bad.traces:3:5"), std::string::npos) << r.out;
}

TEST_F(Cli, CheckVerdicts) {
  auto phi = kSamples + "/toy_phi.txt";
  EXPECT_EQ(run("check --config " + cfg_ + " --traces " + traces_ + " --formulas " + phi).code, 0);
  auto m1 = write("m1.traces", "universe: X=3\nsample\np: (0) (1)\nq: (1) (2)\nend\n");
  auto unit = write("unit.txt", "forall X1:X. p(X1)\n");
  auto r = run("check --config " + cfg_ + " --traces " + m1 + " --formulas " + unit);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAILED"), std::string::npos);
  auto empty = write("empty.txt", "");
  auto e = run("check --config " + cfg_ + " --traces " + traces_ + " --formulas " + empty);
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("warning"), std::string::npos);
}

TEST_F(Cli, OracleDiff) {
  auto base = "oracle-diff --config " + cfg_ + " --traces " + traces_;
  auto r = run(base);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("equivalent"), std::string::npos);
  EXPECT_EQ(run(base + " --no-dnf-filter").code, 0);
  EXPECT_EQ(run(base + " --no-blocking --universe-bound 2").code, 0);
  auto lockserv = kSamples + "/lockserv.cfg";
  auto traces = tmp("l.traces");
  ASSERT_EQ(run("gen-traces --protocol lockserv --universe node=2,lock=1 --samples 5 --out " + traces).code, 0);
  EXPECT_EQ(run("oracle-diff --config " + lockserv + " --traces " + traces).code, 3);
}

TEST_F(Cli, GenTracesIsDeterministic) {
  auto args = "gen-traces --protocol lockserv --universe node=3,lock=2 --universe node=2,lock=1 --steps 10 --samples 30 --seed 7 --out ";
  ASSERT_EQ(run(args + tmp("a")).code, 0);
  ASSERT_EQ(run(args + tmp("b")).code, 0);
  EXPECT_EQ(slurp(tmp("a")), slurp(tmp("b")));
  auto random = "gen-traces --protocol random --config " + cfg_ + " --universe X=3 --samples 10 --density 0.3 --out ";
  ASSERT_EQ(run(random + tmp("c")).code, 0);
  EXPECT_EQ(run("gen-traces --protocol random --universe X=3 --out " + tmp("d")).code, 3);
  EXPECT_EQ(run("gen-traces --protocol paxos --universe X=3").code, 2);
}

TEST_F(Cli, ThreadCountDoesNotChangeTheOutput) {
  auto traces = tmp("l.traces");
  ASSERT_EQ(run("gen-traces --protocol lockserv --universe node=2,lock=1 --universe node=3,lock=2 --steps 15 "
                "--samples 60 --seed 3 --out " + traces).code, 0);
  auto lockserv = kSamples + "/lockserv.cfg";
  for (const char* t : {"1", "8"})
    ASSERT_EQ(run("synth --config " + lockserv + " --traces " + traces + " --threads " + t + " --out " + tmp(std::string("o") + t)).code, 0);
  EXPECT_EQ(slurp(tmp("o1")), slurp(tmp("o8")));
  ASSERT_EQ(run("synth --format filter --config " + lockserv + " --traces " + traces + " --out " + tmp("f")).code, 0);
  EXPECT_NE(slurp(tmp("f")).find("clause-filter signature=fnv1a-"), std::string::npos);
}
