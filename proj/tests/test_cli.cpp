#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lepage/cli.hpp"
#include "lepage/point.hpp"
#include "support.hpp"

using namespace lepage;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lepage");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const char* name) { return std::string(LEPAGE_PROBLEMS_DIR) + "/" + name; }

json base() { return {{"schema", "lepage-problem/1"}, {"chart", {{"n", 2}, {"m", 1}}}, {"metric", {{"euclidean", true}}}}; }

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"check-zermelo", "--problem", problem("minimal_r3.json")}).code, 0);
  EXPECT_EQ(invoke({"check-lepage", "--problem", problem("antisymmetric_control.json")}).code, 0);
  EXPECT_EQ(invoke({"noether", "--problem", problem("minimal_r3.json")}).code, 0);
  EXPECT_EQ(invoke({"check-lepage", "--problem", problem("not_lepage.json")}).code, 1);
  EXPECT_EQ(invoke({"lepage", "--kind", "hc", "--problem", problem("dirichlet.json")}).code, 1);
  EXPECT_EQ(invoke({"noether", "--problem", problem("scaling.json")}).code, 1);
  EXPECT_EQ(invoke({"derive-el", "--problem", problem("nonsense.json")}).code, 2);
  EXPECT_EQ(invoke({"derive-el", "--problem", problem("missing.json")}).code, 2);
  EXPECT_EQ(invoke({"lepage", "--problem", problem("minimal_r3.json")}).code, 2);
  EXPECT_EQ(invoke({"minsurf", "--format", "latex"}).code, 2);
  EXPECT_EQ(invoke({"minsurf", "--grid", "2"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
}

TEST(Cli, ReportShape) {
  Outcome r = invoke({"check-lepage", "--kind", "fundamental", "--problem", problem("minimal_r3.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "lepage-report/1");
  EXPECT_EQ(j["command"], "check-lepage");
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_FALSE(j.contains("seconds"));
  j = json::parse(invoke({"check-zermelo", "--timing", "--problem", problem("minimal_r3.json")}).out);
  EXPECT_TRUE(j.contains("seconds"));
}

TEST(Cli, Deterministic) {
  for (const char* cmd : {"check-lepage", "noether", "check-zermelo"}) {
    Outcome a = invoke({cmd, "--seed", "7", "--problem", problem("minimal_r3.json")});
    Outcome b = invoke({cmd, "--seed", "7", "--problem", problem("minimal_r3.json")});
    EXPECT_EQ(a.out, b.out) << cmd;
  }
  Outcome a = invoke({"minsurf", "--grid", "9"}), b = invoke({"minsurf", "--grid", "9"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, MinimalFormCoefficients) {
  Outcome r = invoke({"lepage", "--kind", "w", "--problem", problem("minimal_r3.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  const json& terms = j["form"]["terms"];
  ASSERT_EQ(terms.size(), 3u);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    PointAssignment p;
    double y[4][3];
    for (int K = 1; K <= 3; ++K)
      for (int i = 1; i <= 2; ++i) p.set(Symbol::y1(K, i), y[K][i] = U(rng));
    auto D = [&](int A, int B) { return y[A][1] * y[B][2] - y[A][2] * y[B][1]; };
    double L = std::sqrt(D(1, 2) * D(1, 2) + D(1, 3) * D(1, 3) + D(2, 3) * D(2, 3));
    for (const auto& t : terms) {
      std::string w0 = t["word"][0], w1 = t["word"][1];
      int A = w0.back() - '0', B = w1.back() - '0';
      double c = eval(parse(t["coeff"].get<std::string>()), p);
      EXPECT_NEAR(c, D(A, B) / L, 1e-10) << w0 << "^" << w1;
    }
  }
}

TEST(Cli, SchemaViolations) {
  auto rejects = [](const json& doc) {
    EXPECT_THROW(cli::load_problem(doc), cli::InputError) << doc.dump();
  };
  EXPECT_NO_THROW(cli::load_problem(base()));
  json d = base();
  d["schema"] = "lepage-problem/2";
  rejects(d);
  d = base();
  d.erase("chart");
  rejects(d);
  d = base();
  d["chart"]["n"] = 0;
  rejects(d);
  d = base();
  d["lagrangian"] = "y1_1";
  rejects(d);
  d = base();
  d.erase("metric");
  rejects(d);
  d = base();
  d["extra"] = 1;
  rejects(d);
  d = base();
  d["fields"] = {{"1", "0"}};
  rejects(d);
  d = base();
  d["fields"] = {{"q", "0", "0"}};
  rejects(d);
  d = base();
  d["adapted"] = {1, 1};
  rejects(d);
  d = base();
  d["seed"] = -1;
  rejects(d);
  d = base();
  d.erase("metric");
  d["lagrangian"] = "sqrt(1 + y1_1^2 + y1_2";
  rejects(d);
}

TEST(Cli, LatexOutput) {
  Outcome r = invoke({"derive-el", "--format", "latex", "--problem", problem("arclength.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\\["), std::string::npos);
}

TEST(Cli, CsvBoundaryRoundTrip) {
  std::string path = ::testing::TempDir() + "lepage_scherk.csv";
  Outcome a = invoke({"minsurf", "--grid", "9", "--csv", path});
  ASSERT_EQ(a.code, 0) << a.err;
  Outcome b = invoke({"minsurf", "--grid", "9", "--boundary", "@" + path});
  ASSERT_EQ(b.code, 0) << b.err;
  json ja = json::parse(a.out), jb = json::parse(b.out);
  EXPECT_NEAR(ja["residuals"]["max_interior"].get<double>(), 0, 1e-10);
  EXPECT_NEAR(jb["residuals"]["max_interior"].get<double>(), 0, 1e-10);
  EXPECT_EQ(invoke({"minsurf", "--grid", "7", "--boundary", "@" + path}).code, 2);
}
