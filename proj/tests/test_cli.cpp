#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gdof/commands.hpp"
#include "gdof/core.hpp"

using namespace gdof;
using namespace gdof::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args, const Theorem1Fn& t1 = {}) {
  std::ostringstream out, err;
  const int code = run(args, out, err, t1);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) v.push_back(cell);
  if (!line.empty() && line.back() == ',') v.push_back("");
  return v;
}

}  // namespace

TEST_CASE("bounds at the symmetric unit point") {
  const auto r = invoke({"bounds", "--alpha1", "1", "--alpha2", "1"});
  REQUIRE(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "alpha1,alpha2,swapped,region,theorem1,lower,upper,tight,a_sum_star");
  CHECK(l[1] == "1.000000000,1.000000000,0,BOTH_WEAK,1.333333333,1.333333333,1.333333333,1,");
}

TEST_CASE("bounds in the open mixed region") {
  const auto r = invoke({"bounds", "--alpha1", "1.5", "--alpha2", "0.2"});
  REQUIRE(r.code == kExitOk);
  const auto f = fields(lines(r.out)[1]);
  CHECK(f[3] == "MIXED_OPEN");
  CHECK(f[4] == "OPEN");
  CHECK(f[5] == "");
  CHECK(f[6] == "1.766666667");
  CHECK(f[7] == "0");
}

TEST_CASE("bounds without interference, swapped input, json") {
  auto r = invoke({"bounds", "--alpha1", "0", "--alpha2", "0"});
  auto f = fields(lines(r.out)[1]);
  CHECK(f[6] == "2.000000000");
  CHECK(f[7] == "1");

  r = invoke({"bounds", "--alpha1", "0.5", "--alpha2", "1.5", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("\"swapped\": true") != std::string::npos);
  CHECK(r.out.find("\"region\": \"MIXED_COVERED\"") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({"bounds", "--alpha1", "1"}).code == kExitUsage);
  CHECK(invoke({"bounds", "--alpha1", "x", "--alpha2", "1"}).code == kExitUsage);
  CHECK(invoke({"bounds", "--alpha1", "-1", "--alpha2", "1"}).code == kExitUsage);
  CHECK(invoke({}).code == kExitUsage);
  CHECK(invoke({"bounds", "--alpha1", "1", "--alpha2", "1", "--format", "xml"}).code ==
        kExitUsage);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("sweep rows, order and bounds") {
  const auto r = invoke({"sweep", "--min", "0", "--max", "2", "--step", "0.5"});
  REQUIRE(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 26);
  CHECK(l[0] == "alpha1,alpha2,region,lower,upper,tight,a_sum_star");
  CHECK(l[1].rfind("0.000000000,0.000000000,", 0) == 0);
  CHECK(l[2].rfind("0.000000000,0.500000000,", 0) == 0);
  bool saw_unit = false;
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto f = fields(l[i]);
    REQUIRE(f.size() == 7);
    if (f[2] == "MIXED_OPEN") {
      CHECK(f[3].empty());
    } else {
      CHECK(std::stod(f[3]) <= std::stod(f[4]) + 1e-9);
    }
    if (f[0] == "1.000000000" && f[1] == "1.000000000") {
      saw_unit = true;
      CHECK(f[5] == "1");
      CHECK(f[4] == "1.333333333");
    }
  }
  CHECK(saw_unit);
}

TEST_CASE("sweep writes files and reports I/O errors") {
  const auto path = std::filesystem::temp_directory_path() / "gdof_sweep_test.json";
  auto r = invoke({"sweep", "--max", "1", "--step", "0.5", "--format", "json", "--out",
                   path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str().find("\"region\"") != std::string::npos);
  std::filesystem::remove(path);

  r = invoke({"sweep", "--out", "/nonexistent-dir/x.csv"});
  CHECK(r.code == kExitIo);
  CHECK(invoke({"sweep", "--min", "2", "--max", "1"}).code == kExitUsage);
}

TEST_CASE("sweep output is byte-identical across runs") {
  const std::vector<std::string> args{"sweep", "--step", "0.25"};
  CHECK(invoke(args).out == invoke(args).out);
}

TEST_CASE("verify battery on a coarse grid") {
  VerifyOptions o;
  o.step = 0.5;
  o.grid_step_a = 0.1;
  o.maximin_pair_step = 0.5;
  o.lp_programs = 50;
  const auto report = run_verify(o);
  REQUIRE(report.checks.size() == 5);
  CHECK(report.checks[0].name == "tightness");
  CHECK(report.checks[0].passed);
  CHECK(report.checks[0].checked >= 49);
  CHECK(report.checks[1].passed);
  CHECK(report.checks[2].passed);
  CHECK(report.checks[4].passed);
  // Maximin agreement is reported, pass or fail, with a counterexample on failure.
  CHECK(report.checks[3].checked > 0);
  CHECK(report.checks[3].passed == report.checks[3].counterexample.empty());
  CHECK(report.passed() == report.checks[3].passed);
}

TEST_CASE("verify catches a perturbed closed form") {
  auto perturbed = [](AlphaPair a) -> std::optional<double> {
    if (classify_region(a) == RegionCase::kBothWeak) return 2.0 - (a.alpha1 + a.alpha2) / 3.1;
    return theorem1_sum_gdof(a);
  };
  const auto r = invoke({"verify", "--step", "0.5", "--grid-step-a", "0.1"}, perturbed);
  CHECK(r.code == kExitVerifyFailed);
  CHECK(r.out.find("FAIL tightness") != std::string::npos);
  CHECK(r.out.find("closed form") != std::string::npos);
  CHECK(r.out.find("RESULT FAIL") != std::string::npos);
}

TEST_CASE("slopes output") {
  const auto r = invoke({"slopes", "--selector", "BE7", "--k", "2", "--alpha2", "0.7",
                         "--trials", "200"});
  REQUIRE(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "selector,k,alpha2,slope,expected,abs_err,r2");
  const auto f = fields(l[1]);
  CHECK(f[0] == "BE7");
  CHECK(f[4] == "0.000000000");
  CHECK(std::abs(std::stod(f[3])) <= 0.05);

  const auto two = invoke({"slopes", "--selector", "BE5,BE6", "--k", "0", "--alpha2", "2.5",
                           "--trials", "200"});
  REQUIRE(two.code == kExitOk);
  const auto l2 = lines(two.out);
  REQUIRE(l2.size() == 3);
  CHECK(fields(l2[1])[4] == "2.500000000");

  CHECK(invoke({"slopes", "--rhos", "100,1000", "--trials", "200"}).code == kExitUsage);
  CHECK(invoke({"slopes", "--k", "3", "--trials", "200"}).code == kExitUsage);
}

TEST_CASE("ledger output") {
  auto r = invoke({"ledger", "--alpha1", "0.6", "--alpha2", "0.3"});
  REQUIRE(r.code == kExitOk);
  const auto l = lines(r.out);
  CHECK(l[0] == "slot,receiver,source,gdof,symbols");
  CHECK(l.size() == 12);
  CHECK(l[9] == "total,1,,0.900000000,");
  CHECK(l[10] == "total,2,,0.800000000,");

  r = invoke({"ledger", "--alpha1", "1", "--alpha2", "1", "--format", "json"});
  CHECK(r.out.find("\"d1\": 0.666666667") != std::string::npos);

  r = invoke({"ledger", "--alpha1", "1.5", "--alpha2", "0.5"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("bounds") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  const std::string bin = GDOF_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("bounds --alpha1 1 --alpha2 1") == 0);
  CHECK(status("bounds --alpha1 1") == 2);
  CHECK(status("sweep --out /nonexistent-dir/x.csv") == 3);
}

TEST_CASE("number formatting") {
  CHECK(format_number(-0.0) == "0.000000000");
  CHECK(format_number(-1e-12) == "0.000000000");
  CHECK(format_number(4.0 / 3.0) == "1.333333333");
  CHECK(grid_values(0.0, 1.0, 0.1).size() == 11);
  CHECK(grid_values(0.0, 1.0, 0.1)[3] == 0.3);
}
