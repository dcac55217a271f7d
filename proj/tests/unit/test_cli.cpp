#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "fkdv/cli.hpp"
#include "fkdv/error.hpp"

using namespace fkdv;
using namespace fkdv::cli;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FKDV5_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t k = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Json parse_report(const std::string& s) { return Json::parse(s); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fkdv5-test-cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("argument parsers") {
  CHECK(parse_range("1:2").lo == 1.0);
  CHECK(parse_range("-5:5").lo == -5.0);
  CHECK(parse_range("-3:-1").hi == -1.0);
  CHECK(parse_range("1e-3:2").lo == 1e-3);
  CHECK_THROWS_AS(parse_range("2:1"), Error);
  CHECK_THROWS_AS(parse_range("1"), Error);
  CHECK_THROWS_AS(parse_range("a:b"), Error);
  const OdeState ic = parse_ic("1,-0.5,0,2e-1,3");
  CHECK(ic[1] == -0.5);
  CHECK(ic[3] == 0.2);
  CHECK_THROWS_AS(parse_ic("1,2,3"), Error);
  CHECK_THROWS_AS(parse_ic("1,2,3,4,x"), Error);
  CHECK(parse_grid("40x60") == std::make_pair(40, 60));
  CHECK_THROWS_AS(parse_grid("40"), Error);
  CHECK_THROWS_AS(parse_grid("0x5"), Error);
  CHECK(parse_subalgebra("g4.1:-1").second == -1.0);
  CHECK(parse_subalgebra("g4.2").first == "g4.2");
  CHECK(!parse_subalgebra("g4.2").second.has_value());
}

TEST_CASE("deterministic dump") {
  Json j;
  j["b"] = 1.5;
  j["a"] = std::numeric_limits<double>::quiet_NaN();
  j["c"] = Json::array({1, "x"});
  CHECK(dump(j) == "{\n  \"b\": 1.500000000000e+00,\n  \"a\": null,\n  \"c\": [\n    1,\n    \"x\"\n  ]\n}\n");
  CHECK(dump(measured(0.25, 1e-6)) == "{\n  \"value\": 2.500000000000e-01,\n  \"tolerance\": 1.000000000000e-06\n}\n");
}

TEST_CASE("csv reader") {
  std::istringstream in("t,x,u\n1,0,1\n1,1,2\n2,0,3\n2,1,4\n");
  const SampledField f = read_csv(in);
  CHECK(f.t.size() == 2);
  CHECK(f.x.size() == 2);
  CHECK(f.at(1, 0) == 3.0);
  std::istringstream no_header("1,0,1,0\n1,1,2,0\n2,0,3,0\n2,1,4,0\n");
  CHECK(read_csv(no_header).at(0, 1) == 2.0);
  std::istringstream holes("1,0,1\n1,1,2\n2,0,3\n");
  CHECK_THROWS_AS(read_csv(holes), Error);
  std::istringstream junk("t,x,u\n1,0,zz\n");
  CHECK_THROWS_AS(read_csv(junk), Error);
  std::istringstream empty("t,x,u\n");
  CHECK_THROWS_AS(read_csv(empty), Error);
}

TEST_CASE("classify command") {
  SUBCASE("power law") {
    const Run r = run("classify --n 2 --alpha 0 --beta 't^2'");
    CHECK(r.code == 0);
    const Json j = parse_report(r.out);
    CHECK(j["schema"] == kSchema);
    CHECK(j["classification"]["case"] == "POWER");
    CHECK(j["classification"]["epsilon"] == 1);
    CHECK(j["classification"]["rho"]["value"].get<double>() == doctest::Approx(2.0));
    CHECK(j["symmetries"]["count"] == 2);
  }
  SUBCASE("constant") {
    const Json j = parse_report(run("classify --n 2 --alpha 0 --beta 1").out);
    CHECK(j["classification"]["case"] == "CONSTANT");
    CHECK(j["symmetries"]["count"] == 3);
    CHECK(j["algebra"]["label"] == "A3.5");
    CHECK(j["algebra"]["a"]["value"].get<double>() == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("gauged exponential with n = 3 and alpha = 1/t") {
    // beta = lambda T_t e^{m T} with the gauge of alpha = 1/t, n = 3:
    // T_t = e^{-3 ln t} = t^-3, T = (1 - t^-2)/2; lambda = 2, m = 1.5.
    const Json j = parse_report(run("classify --n 3 --alpha '1/t' --beta '2*t^(-3)*exp(1.5*(1-t^(-2))/2)'").out);
    CHECK(j["classification"]["case"] == "EXPONENTIAL");
  }
  SUBCASE("generic case exits 2") {
    const Run r = run("classify --n 2 --beta '1+t^2+sin(t)'");
    CHECK(r.code == 2);
    CHECK(parse_report(r.out)["classification"]["case"] == "GENERIC");
  }
  SUBCASE("input errors exit 1") {
    const Run r = run("classify --n 2 --beta 't^^2'");
    CHECK(r.code == 1);
    CHECK(parse_report(r.out)["error"]["kind"] == "parse");
    CHECK(run("classify --n 2 --beta t --t-range 2:1").code == 1);
    CHECK(run("classify --bogus").code == 1);
    CHECK(run("").code == 1);
  }
}

TEST_CASE("criterion command") {
  const Json j = parse_report(run("criterion --n 2 --beta '1/t'").out);
  CHECK(j["reducible"] == true);
  CHECK(j["transform"].get<std::string>().find("ln(t)") != std::string::npos);
  CHECK(parse_report(run("criterion --n 2 --beta 't^2'").out)["reducible"] == false);
}

TEST_CASE("reduce command") {
  SUBCASE("row 4 with the scaled tanh profile") {
    const auto csv = scratch("row4.csv");
    const Run r = run(
        "reduce --n 2 --beta -1 --subalgebra g4.1:1 --omega-span -3:3 "
        "--ic=-2.5819888974716116,0,1.5811388300841902,0,-2.5819888974716125 --csv " +
        csv.string());
    CHECK(r.code == 0);
    const Json j = parse_report(r.out);
    CHECK(j["lift"]["passed"] == true);
    CHECK(j["lift"]["canonical"]["max_rel"]["value"].get<double>() <= 1e-6);
    const std::string rows = slurp(csv);
    CHECK(rows.rfind("t,x,u,residual\n", 0) == 0);
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 1 + 40 * 40);
  }
  SUBCASE("g0 is refused") {
    const Run r = run("reduce --n 2 --beta 1 --subalgebra g0 --ic 1,0,0,0,0");
    CHECK(r.code == 1);
    CHECK(parse_report(r.out)["error"]["message"].get<std::string>().find("constants only") != std::string::npos);
  }
  SUBCASE("row 5 blow-up is reported") {
    const Json j = parse_report(run("solve --n 2 --beta 1 --subalgebra g4.2 --ic 1,1,1,1,1 --omega-span 0:50").out);
    CHECK(j["trajectory"]["truncated"] == true);
    CHECK(j["trajectory"]["blow_up"] == true);
  }
}

TEST_CASE("catalog and verify commands") {
  const Json cat = parse_report(run("catalog --n 2 --epsilon -1 --alpha 0.3").out);
  CHECK(cat["entries"].size() == 6);
  for (const auto& e : cat["entries"]) CHECK(e["passed"] == true);

  const auto csv = scratch("wave.csv");
  const Run v = run("verify --n 2 --beta -1 --solution travelling-wave+ --csv " + csv.string());
  CHECK(v.code == 0);
  const Json vj = parse_report(v.out);
  CHECK(vj["passed"] == true);
  CHECK(vj["symmetry_checks"].size() == 3);

  // Reading the samples back scores the lattice with difference quotients.
  const Run back = run("verify --n 2 --beta -1 --tol 1 --solution " + csv.string());
  CHECK(back.code == 0);
  CHECK(parse_report(back.out)["residual"]["derivatives"] == "finite-difference");
  CHECK(run("verify --n 2 --beta -1 --solution no-such-entry").code == 1);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string args = "classify --n 3 --alpha 'sin(t)+2' --beta 1";
  const Run a = run(args), b = run(args);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);
  const auto p1 = scratch("a.json"), p2 = scratch("b.json");
  CHECK(run("reduce --n 2 --beta t^2 --subalgebra g2.1 --ic 0.5,0.1,0,0,0 --json " + p1.string()).code == 0);
  CHECK(run("reduce --n 2 --beta t^2 --subalgebra g2.1 --ic 0.5,0.1,0,0,0 --json " + p2.string()).code == 0);
  CHECK(slurp(p1) == slurp(p2));
}
