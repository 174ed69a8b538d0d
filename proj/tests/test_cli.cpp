#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

const std::string cli      = HSR_CLI;
const std::string data_dir = HSR_TEST_DATA;

struct Run
{
  int code;
  std::string out;
};

std::string temp_path(const std::string & tag) { return ::testing::TempDir() + "hsr_cli_" + tag; }

std::string slurp(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string & args)
{
  const std::string out = temp_path("stdout");
  const int status      = std::system((cli + " " + args + " > " + out + " 2> " + temp_path("stderr")).c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST(CliValidate, ExitCodes)
{
  EXPECT_EQ(run("validate --model cartan").code, 0);
  const auto broken = run("validate --model " + data_dir + "/broken_jacobi.json");
  EXPECT_EQ(broken.code, 1);
  const auto j = nlohmann::json::parse(broken.out);
  EXPECT_FALSE(j["valid"].get<bool>());
  EXPECT_EQ(j["algebra_violations"].size(), 1u);
  EXPECT_EQ(run("validate --model nosuch").code, 2);
  EXPECT_EQ(run("validate --model " + data_dir + "/malformed.json").code, 2);
  EXPECT_EQ(run("validate --model " + data_dir + "/missing.json").code, 2);
  EXPECT_EQ(run("validate").code, 2);
}

TEST(CliValidate, EveryBundledModelIsClean)
{
  for (const char * name : {"heisenberg", "free_step2_rank2", "free_step2_rank3", "free_step2_rank4", "free_step2_rank5", "free_step2_rank6", "cartan",
         "so3_axisym", "so3_generic", "sl2_axisym", "so3_kp", "sl2_kp", "rolling_sphere", "biinvariant_compact"}) {
    EXPECT_EQ(run(std::string("validate --model ") + name).code, 0) << name;
  }
}

TEST(CliIntegrate, HeisenbergReturnsAfterFullPeriod)
{
  const auto r = run("integrate --model heisenberg --p0 1,0,1 --T 6.283185307179586 --step 1e-3");
  ASSERT_EQ(r.code, 0);
  std::stringstream ss(r.out);
  std::string line, last;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("t,p_1,p_2,p_3,p_4,H,C1", 0), 0u);
  while (std::getline(ss, line)) {
    if (!line.empty()) { last = line; }
  }
  std::stringstream row(last);
  std::string cell;
  std::vector<double> v;
  while (std::getline(row, cell, ',')) { v.push_back(std::stod(cell)); }
  ASSERT_GE(v.size(), 5u);
  EXPECT_NEAR(v[1], 1.0, 1e-7);
  EXPECT_NEAR(v[2], 0.0, 1e-7);
  EXPECT_NEAR(v[3], 1.0, 1e-7);
}

TEST(CliIntegrate, BadArgumentsAndBlowUp)
{
  EXPECT_EQ(run("integrate --model heisenberg --p0 1,0,1 --T 0").code, 2);
  EXPECT_EQ(run("integrate --model heisenberg --p0 1,0,1 --step -1").code, 2);
  EXPECT_EQ(run("integrate --model heisenberg --p0 1,2").code, 2);
  EXPECT_EQ(run("integrate --model heisenberg --p0 1,x,1").code, 2);
  EXPECT_EQ(run("integrate --model " + data_dir + "/riccati.json --p0 0,1000 --T 100 --step 0.5").code, 3);
}

TEST(CliIntegrate, PhasePortraitCirclesAroundAxis)
{
  const auto r = run("integrate --model so3_axisym --phase-portrait --samples 20 --curves 4 --T 5 --step 1e-3");
  ASSERT_EQ(r.code, 0);
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("kind,id,t,p_1", 0), 0u);
  // each trajectory keeps p3 and the radius in the (p1, p2) plane fixed
  std::map<int, std::pair<double, double>> first;
  double worst = 0.0;
  std::size_t rows = 0;
  while (std::getline(ss, line)) {
    if (line.rfind("trajectory", 0) != 0) { continue; }
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) { cells.push_back(cell); }
    const int id    = std::stoi(cells[1]);
    const double p1 = std::stod(cells[3]), p2 = std::stod(cells[4]), p3 = std::stod(cells[5]);
    const double rad = std::hypot(p1, p2);
    auto it          = first.find(id);
    if (it == first.end()) {
      first[id] = {rad, p3};
    } else {
      worst = std::max({worst, std::abs(rad - it->second.first), std::abs(p3 - it->second.second)});
    }
    ++rows;
  }
  EXPECT_EQ(first.size(), 4u);
  EXPECT_GT(rows, 4000u);
  EXPECT_LT(worst, 1e-6);
}

TEST(CliCheck, CartanExitCodes)
{
  const auto h = run("check --model cartan --p0 1,0,0,0,0");
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(nlohmann::json::parse(h.out)["verdict"], "homogeneous");
  const auto n = run("check --model cartan --p0 1,0,0,1,0");
  EXPECT_EQ(n.code, 1);
  EXPECT_EQ(nlohmann::json::parse(n.out)["verdict"], "not_homogeneous");
  EXPECT_EQ(run("check --model cartan --p0 1,0,0,0,0,0.5").code, 2);
  EXPECT_EQ(run("check --model cartan").code, 2);
  EXPECT_EQ(run("check --model cartan --p0 1,0,0,0,0 --tol 0").code, 2);
}

TEST(CliCheck, ResidualInRetryBandIsInconclusive)
{
  // residual 0.5 sits inside [tol, 10 tol] for tol = 0.1, and the exact retry finds no witness
  const auto r = run("check --model cartan --p0 1,0,0,1,0 --tol 0.1");
  EXPECT_EQ(r.code, 4);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "inconclusive");
  EXPECT_TRUE(j["exact_retry"].get<bool>());
}

TEST(CliGo, VerdictsAndDeterminism)
{
  const auto f = run("go --model free_step2_rank3 --samples 200");
  ASSERT_EQ(f.code, 0);
  EXPECT_EQ(nlohmann::json::parse(f.out)["status"], "GO_affirmed_up_to_degree");
  const auto c = run("go --model cartan --samples 200 --seed 3");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(nlohmann::json::parse(c.out)["status"], "GO_refuted_with_witness");
  EXPECT_EQ(run("go --model cartan --samples 200 --seed 3 --jobs 4").out, c.out);
  EXPECT_EQ(run("go --model so3_generic --degree-cap 2 --samples 50").code, 0);
  EXPECT_EQ(run("go --model cartan --degree-cap 1").code, 2);
}

TEST(CliExist, RoutesAndHypothesisFailure)
{
  const auto r = run("exist --model so3_kp");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["route"], "factorized");
  EXPECT_TRUE(j["audit"]["eigen"]["verified"].get<bool>());
  EXPECT_EQ(nlohmann::json::parse(run("exist --model heisenberg").out)["route"], "solvable_case");
  // nilpotent algebra with central isotropy: Ker K = g differs from m and K vanishes on Δ
  EXPECT_EQ(run("exist --model " + data_dir + "/no_hypothesis.json").code, 1);
}

TEST(CliOutput, OutFileMatchesStdoutByteForByte)
{
  const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
  ASSERT_EQ(run("integrate --model cartan --T 1 --seed 9 --out " + a).code, 0);
  ASSERT_EQ(run("integrate --model cartan --T 1 --seed 9 --out " + b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), run("integrate --model cartan --T 1 --seed 9").out);
  EXPECT_FALSE(slurp(a).empty());
}

TEST(CliMisc, InvariantsAndFixedPoints)
{
  const auto inv = run("invariants --model heisenberg --degree-cap 2");
  EXPECT_EQ(inv.code, 0);
  EXPECT_EQ(inv.out, "y3\ny1^2 + y2^2\ny3^2\n");
  const auto fp = run("fixed-points --model so3_generic --samples 200");
  EXPECT_EQ(fp.code, 0);
  EXPECT_EQ(nlohmann::json::parse(fp.out)["fixed_points"].size(), 6u);
}
