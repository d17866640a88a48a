#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "kgeom/determinant.hpp"
#include "kgeom/json_io.hpp"

using namespace kgeom;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run(const std::string& args) {
  const std::string err_path = ::testing::TempDir() + "kgeom_cli_stderr.txt";
  const std::string cmd = std::string(KGEOM_CLI) + " " + args + " 2>" + err_path;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err_path);
  return r;
}

std::vector<Vec> vecs(const Json& j) { return vecs_from_json(j, "test"); }

}  // namespace

TEST(Cli, EuclideanModulus) {
  const CliRun r = run("modulus --space lp:2:3 --mode kur --k 1 --eps 1.0");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  const Json& est = j["estimate"];
  EXPECT_NEAR(est["value"].get<double>(), 1.0 - std::sqrt(3.0) / 2.0, 0.02);
  EXPECT_TRUE(est["converged"].get<bool>());
  // witness certifies the constraint: ||x_1 - x_2|| >= 1
  const auto w = vecs(est["witness"]);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_GE((w[0] - w[1]).norm(), 1.0 - 1e-9);
  EXPECT_NEAR(1.0 - (w[0] + w[1]).norm() / 2.0, est["value"].get<double>(), 1e-9);
}

TEST(Cli, CubePresetStallsAtFour) {
  const CliRun r = run("diagnose --preset cube-3e1 --k 2");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["report"]["verdict"], "stalls-above-floor");
  EXPECT_NEAR(j["report"]["floor"].get<double>(), 4.0, 1e-9);
  const auto pts = vecs(j["report"]["floor_certificate"]["points"]);
  const auto fs = vecs(j["report"]["floor_certificate"]["functionals"]);
  EXPECT_NEAR(std::fabs(dk_determinant(pts, fs)), 4.0, 1e-12);
  for (const auto& p : pts) EXPECT_NEAR(p.lpNorm<Eigen::Infinity>(), 1.0, 1e-12);
}

TEST(Cli, DiagnoseCsvHasVersionedHeader) {
  const CliRun r = run("diagnose --preset line-sum-kwuc --k 2 --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# kgeom decay table v1: delta,supDet,diamK\n", 0), 0u);
}

TEST(Cli, VerifyDeterminantSuite) {
  const CliRun r = run("verify --suite determinant --seed 7");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["seed"], 7);
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["name"], "determinant");
  EXPECT_GE(j["suites"][0]["checks"].size(), 3u);
  for (const auto& c : j["suites"][0]["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Cli, MalformedDescriptorNamesField) {
  const CliRun r = run("volume --space '{\"variant\":\"Lp\",\"p\":\"x\",\"dim\":2}' --points '[[0,0],[1,0]]'");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("descriptor.p"), std::string::npos) << r.err;
  const CliRun missing = run("volume --space '{\"variant\":\"Lp\",\"p\":2}' --points '[[0,0],[1,0]]'");
  EXPECT_EQ(missing.status, 1);
  EXPECT_NE(missing.err.find("dim"), std::string::npos) << missing.err;
}

TEST(Cli, ValidationErrorsExitOne) {
  EXPECT_EQ(run("diagnose --preset no-such-preset").status, 1);
  EXPECT_EQ(run("det --points '[[0,0],[1,0]]' --functionals '[[1,0,0]]'").status, 1);
  EXPECT_EQ(run("modulus --space lp:2:3 --mode sideways --eps 1").status, 1);
  EXPECT_EQ(run("verify --suite nonsense").status, 1);
  EXPECT_EQ(run("classify --space lp:1:2 --k 2").status, 1);
  EXPECT_EQ(run("").status, 1);
}

TEST(Cli, DeterminantValue) {
  const CliRun r = run("det --points '[[0,0],[1,0]]' --functionals '[[1,0]]'");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["value"].get<double>(), 1.0);
}

TEST(Cli, IdenticalBytesAcrossRuns) {
  const std::string args = "modulus --space lp:1.5:3 --mode kwur --k 1 --eps 0.5 --functionals '[[0,1,0]]' --seed 3";
  const CliRun a = run(args);
  const CliRun b = run(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OutWritesArtifact) {
  const std::string path = ::testing::TempDir() + "kgeom_cli_zoo.json";
  const CliRun r = run("zoo --out " + path);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const Json j = Json::parse(slurp(path));
  EXPECT_GE(j["spaces"].size(), 10u);
}

TEST(Cli, ModulusSweepCsv) {
  const CliRun r = run("modulus --space lp:2:2 --k 1 --eps 0.5,1.0 --format csv --budget '{\"starts\":8}'");
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# kgeom modulus sweep v1: epsilon,mode,value,converged");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Cli, ProjectAndClassify) {
  const CliRun p = run("project --space lp:2:3 --set '{\"kind\":\"UnitBall\"}' --x '[3,0,0]' --delta 0.1");
  ASSERT_EQ(p.status, 0) << p.err;
  const Json pj = Json::parse(p.out);
  EXPECT_DOUBLE_EQ(pj["distance"]["distance"].get<double>(), 2.0);
  EXPECT_FALSE(pj["near_sample"]["points"].empty());

  const CliRun c = run("classify --space lp:1:3 --k 2");
  ASSERT_EQ(c.status, 0) << c.err;
  const Json cj = Json::parse(c.out);
  EXPECT_EQ(cj["verdict"]["classification"], "witness-found");
  EXPECT_GE(cj["verdict"]["volume"].get<double>(), 0.1);
}

TEST(Cli, ProductWitnessAndQuotientSweep) {
  const std::string factor =
      "{\"space\":{\"variant\":\"Lp\",\"p\":\"inf\",\"dim\":2},\"x\":[1,1],\"y\":[1,-1],\"f\":[0,1]}";
  const CliRun w = run("product-witness --p 2 --factors '[" + factor + "," + factor + "]'");
  ASSERT_EQ(w.status, 0) << w.err;
  const Json wj = Json::parse(w.out)["witness"];
  EXPECT_NEAR(wj["determinant"].get<double>(), wj["formula"].get<double>(), 1e-12);
  EXPECT_NEAR(wj["determinant"].get<double>(), 2.0, 1e-12);  // 2^(-2/2) * 2 * 2

  const CliRun q = run(
      "quotient-sweep --space lp:inf:3 --functionals '[[1,0,0]]' --family '[[[0,0,1]]]' --eps 0.5 "
      "--budget '{\"starts\":8,\"local_steps\":200}'");
  ASSERT_EQ(q.status, 0) << q.err;
  EXPECT_EQ(Json::parse(q.out)["result"]["infimum"].get<double>(), 0.0);
}
