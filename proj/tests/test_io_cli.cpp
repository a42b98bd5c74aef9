#include <catch2/catch.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "circlaw/ensembles.hpp"
#include "circlaw/gff.hpp"
#include "circlaw/io.hpp"

using namespace circlaw;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(CIRCLAW_CLI_PATH) + " " + args;
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/circlaw_test_") + name;
}

int count_lines(const std::string& text) {
  int c = 0;
  for (char ch : text)
    if (ch == '\n') ++c;
  return c;
}

}  // namespace

TEST_CASE("sample csv round trip and metadata header") {
  auto s = sample_iid_disk(5, 7);
  std::ostringstream os;
  write_sample_csv(os, s);
  std::string text = os.str();
  REQUIRE(text.rfind("# ensemble=iid_disk n=5 seed=7", 0) == 0);
  REQUIRE(count_lines(text) == 7);  // header + columns + 5 rows
  std::ostringstream os2;
  write_sample_csv(os2, s);
  REQUIRE(os2.str() == text);
}

TEST_CASE("sample json carries schema, config and points") {
  auto s = sample_ginibre_eigs(4, 9);
  json j = sample_to_json(s);
  REQUIRE(j["schema"] == 1);
  REQUIRE(j["ensemble"] == "ginibre");
  REQUIRE(j["n"] == 4);
  REQUIRE(j["seed"] == 9);
  REQUIRE(j["points"].size() == 4);
}

TEST_CASE("running sums are ordered by argument and total correctly") {
  auto s = sample_iid_disk(40, 3);
  std::ostringstream os;
  write_running_sums_csv(os, s);
  std::string text = os.str();
  REQUIRE(count_lines(text) == 42);
  // last line carries the full sum
  Complex total = 0.0;
  for (auto z : s.points) total += z;
  auto last = text.rfind('\n', text.size() - 2);
  std::string last_line = text.substr(last + 1);
  int m;
  double re, im;
  REQUIRE(std::sscanf(last_line.c_str(), "%d,%lf,%lf", &m, &re, &im) == 3);
  REQUIRE(m == 40);
  REQUIRE(re == Approx(total.real()).margin(1e-12));
  REQUIRE(im == Approx(total.imag()).margin(1e-12));
}

TEST_CASE("field grid csv has one row per node plus sidecar metadata") {
  EnsembleSpec ens(Family::ginibre, 6);
  ExpectedLogAbs table(ens);
  auto s = sample_ginibre_eigs(6, 2);
  GridSpec spec;
  spec.resolution = 8;
  auto grid = field_grid(s, spec, table);
  std::ostringstream os;
  write_field_grid_csv(os, grid);
  REQUIRE(count_lines(os.str()) == 2 + 64);
  json meta = field_grid_meta(grid);
  REQUIRE(meta["resolution"] == 8);
  REQUIRE(meta["schema"] == 1);
}

TEST_CASE("cli: sample row count, determinism and bounded support") {
  std::string out1 = tmp_path("s1.csv"), out2 = tmp_path("s2.csv");
  REQUIRE(run_cli("sample --ensemble ginibre --n 150 --seed 7 --out " + out1) == 0);
  REQUIRE(run_cli("sample --ensemble ginibre --n 150 --seed 7 --out " + out2) == 0);
  std::string a = slurp(out1), b = slurp(out2);
  REQUIRE(a == b);  // byte-identical rerun
  REQUIRE(count_lines(a) == 152);
  std::string out3 = tmp_path("s3.csv");
  REQUIRE(run_cli("sample --ensemble iid_disk --n 150 --seed 7 --out " + out3) == 0);
  std::ifstream is(out3);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  while (std::getline(is, line)) {
    double re, im;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &re, &im) == 2);
    REQUIRE(re * re + im * im <= 1.0 + 1e-12);
  }
}

TEST_CASE("cli: seed is mandatory for sampling commands") {
  REQUIRE(run_cli("sample --ensemble ginibre --n 5 2>/dev/null") != 0);
}

TEST_CASE("cli: exact cumulant JSON") {
  std::string out = tmp_path("cum.json");
  REQUIRE(run_cli("cumulant --exponents \"1,0;0,1\" --n 100 --out " + out) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["exact_value_as_fraction"] == "1");
  REQUIRE(j["asymptotic"]["constant_term"] == "1");
  REQUIRE(j["asymptotic"]["n_coefficient"] == "0");
}

TEST_CASE("cli: verify-clt on a constant is identically zero and passes") {
  std::string out = tmp_path("clt0.json");
  REQUIRE(run_cli("verify-clt --f \"1\" --ensemble iid_disk --n 4 --replicas 120 --seed 3 --out " +
                  out) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["mc_variance"]["value"] == 0.0);
  REQUIRE(j["predicted"]["total"] == 0.0);
  REQUIRE(j["pass"] == true);
}

TEST_CASE("cli: verify-clt reports the exact finite-n trace variance") {
  std::string out = tmp_path("cltz.json");
  REQUIRE(run_cli("verify-clt --f \"z\" --ensemble ginibre --n 12 --replicas 400 --seed 11 --out " +
                  out) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["exact_finite_n"] == 1.0);
  REQUIRE(j["predicted"]["total"].get<double>() == Approx(1.0).epsilon(1e-8));
  double z = j["z_score"].get<double>();
  REQUIRE(std::abs(z) <= 3.0);
}

TEST_CASE("cli: lemma table exits zero and flags the broken spec as a violation") {
  std::string out = tmp_path("lem.json");
  REQUIRE(run_cli("lemmas --max-k 3 --range 2 --out " + out) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["pass"] == true);
  bool saw_violation = false;
  for (const auto& row : j["results"])
    if (row["status"] == "hypothesis-violation") saw_violation = true;
  REQUIRE(saw_violation);
}

TEST_CASE("cli: universality table converges for every family") {
  std::string out = tmp_path("univ.json");
  REQUIRE(run_cli("universality --n-list 8 16 32 --degree 2 --out " + out) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["pass"] == true);
}

TEST_CASE("cli: gff grid emission is deterministic") {
  std::string out1 = tmp_path("g1.csv"), out2 = tmp_path("g2.csv");
  REQUIRE(run_cli("gff --n 16 --seed 5 --grid-only --resolution 32 --out " + out1) == 0);
  REQUIRE(run_cli("gff --n 16 --seed 5 --grid-only --resolution 32 --out " + out2) == 0);
  REQUIRE(slurp(out1) == slurp(out2));
  REQUIRE(count_lines(slurp(out1)) == 2 + 32 * 32);
  json meta = json::parse(slurp(out1 + ".json"));
  REQUIRE(meta["n"] == 16);
}

TEST_CASE("cli: the threads flag never changes results") {
  std::string o1 = tmp_path("t1.json"), o2 = tmp_path("t2.json");
  std::string base = "verify-clt --f \"Re z\" --ensemble ginibre --n 6 --replicas 200 --seed 9 ";
  int rc1 = run_cli("--threads 1 " + base + "--out " + o1);
  int rc2 = run_cli("--threads 2 " + base + "--out " + o2);
  REQUIRE(rc1 == rc2);
  REQUIRE(slurp(o1) == slurp(o2));
  REQUIRE(rc1 == 0);
}

TEST_CASE("cli: matrix csv dump helper") {
  circlaw::ComplexMatrix m(2);
  m(0, 0) = {1.5, -2.0};
  m(1, 1) = {0.0, 3.25};
  std::ostringstream os;
  circlaw::write_matrix_csv(os, m);
  REQUIRE(os.str() == "# n=2\n1.5,-2,0,0\n0,0,0,3.25\n");
}

TEST_CASE("cli: moments table export") {
  std::string out = tmp_path("mom.json");
  REQUIRE(run_cli("moments --ensemble bergman --n 8 --max-ell 6 --out " + out) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["log_moments"].size() == 7);
  REQUIRE(j["log_moments"][0] == 0.0);
}
