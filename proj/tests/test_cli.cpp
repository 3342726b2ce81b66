#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace {

using namespace mls;
using namespace mls::testing;
namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(MLS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mls_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  [[nodiscard]] std::string at(const std::string& name) const { return (dir_ / name).string(); }
  static std::string data(const std::string& name) { return std::string(MLS_DATA_DIR) + "/" + name; }

  fs::path dir_;
};

TEST_F(Cli, GenIsDeterministicAndParses) {
  const Outcome a = run("gen --seed 4 --vertices 6 --extra 3");
  const Outcome b = run("gen --seed 4 --vertices 6 --extra 3");
  ASSERT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const MetricGraph g = parse_graph(a.out);
  EXPECT_EQ(g, random_graph(4, RandomGraphParams{6, 3, 10, 4}));
  EXPECT_EQ(run("gen --vertices 0").status, 2);
}

TEST_F(Cli, DisguiseThenReconstructAccepts) {
  ASSERT_EQ(run("gen --seed 1 --out " + at("g1.txt")).status, 0);
  ASSERT_EQ(run("disguise " + at("g1.txt") + " --seed 9 --out-graph " + at("g2.txt") + " --out-hom " + at("phi.txt")).status, 0);
  const Outcome r = run("reconstruct " + at("g1.txt") + " " + at("g2.txt") + " " + at("phi.txt"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("verdict ACCEPT"), std::string::npos);
  const DisguiseTruth truth = parse_truth(slurp(at("phi.txt")));
  for (const auto& [x, y] : truth.branch_map) {
    EXPECT_NE(r.out.find("branch " + std::to_string(x) + " -> " + std::to_string(y)), std::string::npos) << r.out;
  }
  EXPECT_EQ(run("check-iso " + at("g1.txt") + " " + at("g2.txt")).status, 0);
}

TEST_F(Cli, PerturbedGraphIsRejected) {
  {
    std::ofstream out(at("bumped.txt"));
    out << format_graph(with_length(theta(), 1, Rational(15, 7)));
  }
  {
    std::ofstream out(at("id.txt"));
    out << "hom id\ngen g1 = g1\ngen g2 = g2\ninverse\ngen g1 = g1\ngen g2 = g2\n";
  }
  const Outcome r = run("reconstruct " + data("theta.txt") + " " + at("bumped.txt") + " " + at("id.txt"));
  EXPECT_EQ(r.status, 1) << r.out;
  EXPECT_NE(r.out.find("verdict REJECT spectrum-mismatch"), std::string::npos) << r.out;
  EXPECT_EQ(run("check-iso " + data("theta.txt") + " " + at("bumped.txt")).status, 1);
}

TEST_F(Cli, ReduceAndSpectrum) {
  const Outcome r = run("reduce " + data("theta.txt") + " --path \"e1 e1^-1 e2\"");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out, "e2\n");
  EXPECT_EQ(run("reduce " + data("theta.txt") + " --path \"e9\"").status, 2);
  const Outcome s = run("spectrum " + data("theta.txt") + " --max-len 1");
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(s.out, "cyclic_word\tlength\ng1\t3/1\ng1^-1\t3/1\ng2\t4/1\ng2^-1\t4/1\n");
  EXPECT_EQ(run("core " + data("dumbbell.txt")).status, 0);
}

TEST_F(Cli, DisguisingATreeFails) {
  {
    std::ofstream out(at("tree.txt"));
    out << "graph tree\nvertex 0\nvertex 1\nedge 0 0 1 1\n";
  }
  const Outcome r = run("disguise " + at("tree.txt") + " --out-graph " + at("x.txt") + " --out-hom " + at("y.txt"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("core is empty"), std::string::npos) << r.out;
}

TEST_F(Cli, MissingFileIsAnError) {
  EXPECT_EQ(run("core " + at("absent.txt")).status, 2);
  EXPECT_EQ(run("").status, 2);
}

}  // namespace
