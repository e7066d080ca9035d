#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string cli() {
  const char* p = std::getenv("QMOM_CLI");
  REQUIRE_MESSAGE(p != nullptr, "QMOM_CLI must point at the qmom binary");
  return p;
}

std::string golden(const std::string& name) {
  const char* dir = std::getenv("QMOM_GOLDEN");
  REQUIRE_MESSAGE(dir != nullptr, "QMOM_GOLDEN must point at tests/golden");
  std::ifstream in(std::string(dir) + "/" + name);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// stdout only; stderr goes to the test log.
Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + cli() + "' " + args;
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l))
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string t;
  while (std::getline(ss, t, ',')) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("moments CSV matches golden files") {
  auto a = run("moments --q 5 --r 2 --D 1..4");
  CHECK(a.code == 0);
  CHECK(a.out == golden("moments_q5_r2.csv"));
  auto b = run("moments --q 13 --r 3 --D 1..3");
  CHECK(b.code == 0);
  CHECK(b.out == golden("moments_q13_r3.csv"));
  auto ls = lines(a.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "q,r,D,moment_a,moment_b,moment_float,count,seconds");
  // M_2(2) at q = 5 is 24 - 8 sqrt 5 over 20 squarefree d
  CHECK(ls[2] == "5,2,2,24,-8,6.1114561800016816,20,0.0000");
  // the reference oracle prints the same rows
  CHECK(run("moments --q 5 --r 2 --D 1..4 --naive").out == a.out);
}

TEST_CASE("moments output does not depend on the thread count") {
  auto a = run("moments --q 5 --r 4 --D 5", "QMOM_THREADS=1");
  auto b = run("moments --q 5 --r 4 --D 5", "QMOM_THREADS=3");
  auto c = run("--threads 2 moments --q 5 --r 4 --D 5");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("roots JSON lines") {
  auto r = run("roots --r 4 --level 2");
  CHECK(r.code == 0);
  CHECK(r.out == golden("roots_r4_level2.jsonl"));
  auto ls = lines(r.out);
  CHECK(ls.size() == 8);
  for (auto& l : ls) {
    auto j = json::parse(l);
    CHECK(j["vector"].size() == 5);
    CHECK(j["level"] == 2);
    int h = 0;
    for (auto& k : j["vector"]) h += k.get<int>();
    CHECK(j["height"] == h);
    CHECK(j["word"].size() == static_cast<size_t>(4 + (h - 5) / 2));
  }
  CHECK(lines(run("roots --r 5 --level 1").out).size() == 32);
}

TEST_CASE("cocycle gamma-table") {
  auto r = run("cocycle gamma-table --q 5");
  CHECK(r.code == 0);
  CHECK(r.out == golden("gamma_table_q5.json"));
  auto j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 4);
  CHECK(j["rows"][0]["polynomial"] ==
        "1 + q^(1/4) + 10 q^(1/2) + 7 q^(3/4) + 20 q + 7 q^(5/4) + 10 q^(3/2) + q^(7/4) + q^2");
  CHECK(j["rows"][0]["zeta"] == "1");
  CHECK(j["rows"][1]["sgn"] == -1);
  CHECK(j["rows"][1]["polynomial"] ==
        "1 - i q^(1/4) - 4 q^(1/2) + 7i q^(3/4) + 6 q - 7i q^(5/4) - 4 q^(3/2) + i q^(7/4) + q^2");
  // at q = 5 the sgn = 1 entry is 126 + 36 t + 60 t^2 + 12 t^3 with t^4 = 5
  CHECK(j["rows"][0]["exact"] == "126 + 36*t + 60*t^2 + 12*t^3");
  CHECK(run("cocycle gamma-table --q 7").code == 2);
}

TEST_CASE("cocycle eval") {
  auto e = run("cocycle eval --word 1,2,3,4 --z 1/2,1/3,2/5+1/7i,3 --q 5 --exact");
  CHECK(e.code == 0);
  CHECK(e.out == golden("cocycle_eval_exact.json"));
  auto b = run("cocycle eval --word 5 --z 1/2,1/3,1/4,1/5,2 --q 13 --exact --bar");
  CHECK(b.out == golden("cocycle_eval_bar_q13.json"));
  // complex evaluation agrees with the embedded exact one
  auto c = run("cocycle eval --word 1,2,3,4 --z 0.5,0.3333333333333333,0.4+0.14285714285714285i,3 --q 5");
  CHECK(c.code == 0);
  auto je = json::parse(e.out), jc = json::parse(c.out);
  CHECK(jc["mode"] == "complex");
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < 2; ++p) {
        double x = je["matrix"][i][k][p], y = jc["matrix"][i][k][p];
        CHECK(std::abs(x - y) < 1e-12);
      }
  // the identity word
  auto id = json::parse(run("cocycle eval --word '' --z 1/2,3 --q 5 --exact").out);
  CHECK(id["exact"][0][0] == "1");
  CHECK(id["exact"][0][1] == "0");
  // z = 1 makes the letter-2 matrix singular
  CHECK(run("cocycle eval --word 1,2 --z 1/2,1,3 --q 5 --exact").code == 3);
  CHECK(run("cocycle eval --word 1 --z x,2 --q 5").code == 2);
}

TEST_CASE("predict JSON schema") {
  auto r = run("predict q1 --q 5 --r 4 --D 3..5 --pmax 4 --rho 0.1 --quad 16 --out json");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  for (const char* k : {"kind", "q", "r", "pmax", "rho", "quad", "euler_tail", "outside_range", "note", "rows"})
    CHECK_MESSAGE(j.contains(k), k);
  CHECK(j["kind"] == "q1");
  CHECK(j["outside_range"] == false);
  REQUIRE(j["rows"].size() == 3);
  for (auto& row : j["rows"]) {
    CHECK(row["value"].size() == 2);
    CHECK(row["delta"].get<double>() >= 0);
  }
  CHECK(j["euler_tail"].get<double>() > 0);
  CHECK(run("predict q1 --q 5 --r 4 --D 3..5 --pmax 4 --rho 0.1 --quad 16 --out json").out == r.out);

  auto low = json::parse(run("predict q1 --r 2 --D 3 --quad 16").out);
  CHECK(low["outside_range"] == true);
  CHECK(!low["note"].get<std::string>().empty());

  auto q2 = run("predict q2 --r 4 --D 20,21 --quad 8 --pmax 3");
  CHECK(q2.code == 0);
  auto j2 = json::parse(q2.out);
  REQUIRE(j2["rows"].size() == 2);
  CHECK(j2["rows"][0]["per_zeta"].size() == 4);
  CHECK(run("predict q2 --r 3 --quad 8").code == 3);

  auto csv = lines(run("predict q1 --D 3 --quad 16 --out csv").out);
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "kind,q,r,D,re,im,delta,euler_tail,outside_range");
  CHECK(fields(csv[1]).size() == 9);
}

TEST_CASE("verify report") {
  auto a = run("verify --quad 16");
  CHECK(a.code == 0);
  auto ls = lines(a.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "q,r,D,moment_a,moment_b,moment_float,Q1_re,Q1_im,prediction,residual,normalized");
  for (size_t k = 1; k < ls.size(); ++k) {
    auto f = fields(ls[k]);
    REQUIRE(f.size() == 11);
    CHECK(std::stoi(f[2]) == static_cast<int>(k) + 2);
    double m = std::stod(f[5]), p = std::stod(f[8]), res = std::stod(f[9]);
    CHECK(std::abs(m - p - res) <= 1e-9 * std::abs(m));
  }
  // byte-identical reruns, also across thread counts
  CHECK(run("verify --quad 16").out == a.out);
  CHECK(run("verify --quad 16", "QMOM_THREADS=2").out == a.out);

  auto two = lines(run("verify --N 2 --theta 0.45 --D 3 --quad 8 --pmax 3").out);
  REQUIRE(two.size() == 2);
  CHECK(fields(two[0]).size() == 13);

  CHECK(run("verify --N 2 --theta 0.6").code == 2);
  CHECK(run("verify --N 1 --theta 0.45").code == 2);
  CHECK(run("verify --q 7").code == 2);
}

TEST_CASE("selftest subcommand and usage errors") {
  auto r = run("selftest --only 5,7,8");
  CHECK(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  for (auto& l : ls) CHECK(l.find(": PASS") != std::string::npos);
  CHECK(run("nosuchcommand 2>/dev/null").code != 0);
  CHECK(run("predict q3 2>/dev/null").code != 0);
}
