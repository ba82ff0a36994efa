#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cbal/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cbal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cbal::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(CBAL_DATA_DIR) + "/" + name; }

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path p = fs::temp_directory_path() / ("cbal_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

}  // namespace

TEST_CASE("index command") {
  auto r = run({"index", "--input", data("descending5.csv")});
  CHECK(r.code == 0);
  CHECK(r.out == "HHI 2444.4, High\n");

  r = run({"index", "--input", data("equal4.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "HHI 2500.0, High\n");

  r = run({"index", "--input", data("descending5.csv"), "--cr", "2"});
  CHECK(r.out == "HHI 2444.4, High\nCR2 0.6000\n");

  r = run({"index", "--input", data("descending5.csv"), "--format", "json"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["band"] == "High");
  CHECK(j["hhi_points"].get<double>() == doctest::Approx(2444.4444444));
  CHECK(j["hhi_points"].get<double>() == j["hhi_raw"].get<double>() * 10000);

  r = run({"index", "--input", data("descending5.csv"), "--format", "csv"});
  CHECK(r.out.starts_with("hhi_raw,hhi_points,band\n"));
}

TEST_CASE("thresholds command") {
  auto r = run({"thresholds", "--input", data("descending5.csv"), "--endowment", "50"});
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("k* = 4 at E = 50\n"));
  CHECK(r.out.find("   4  threshold                  60.00               10.00") != std::string::npos);
  CHECK(r.out.find("always-decreasing") != std::string::npos);

  r = run({"thresholds", "--input", data("three.csv"), "--endowment", "7", "--format", "json"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["k_star"] == 3);
  CHECK(j["rows"][0]["classification"] == "never-improves");
  CHECK(j["rows"][1]["classification"] == "never-improves");
  CHECK(j["rows"][1]["e_hat"].is_null());

  r = run({"thresholds", "--input", data("descending5.csv"), "--endowment", "50", "--format", "csv"});
  CHECK(r.out.find("4,threshold,60,10,true\n") != std::string::npos);
}

TEST_CASE("sweep command") {
  auto r = run({"sweep", "--input", data("descending5.csv"), "--k", "4", "--grid", "0,10,20,60"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "E,hhi_points,band,delta");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ends_with(",High,0"));
  CHECK(rows[1].starts_with("10,2400"));
  CHECK(rows[1].find(",High,-0.00444") != std::string::npos);
  CHECK(rows[2].find(",High,-0.00362") != std::string::npos);
  CHECK(rows[3].ends_with(",High,0"));

  const fs::path out = fs::temp_directory_path() / "cbal_test_sweep.csv";
  r = run({"sweep", "--input", data("two.csv"), "--k", "1", "--grid", "0:4:4", "--out",
           out.string()});
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == "E,hhi_points,band,delta\n0,6250,High,0\n"
                         "1,6800.000000000001,High,0.05500000000000005\n"
                         "2,7222.222222222222,High,0.09722222222222221\n"
                         "3,7551.020408163265,High,0.13010204081632648\n"
                         "4,7812.5,High,0.15625\n");

  r = run({"sweep", "--input", data("two.csv"), "--k", "1", "--grid", "0,4", "--points"});
  CHECK(r.out.find("4,7812.5,High,1562.5\n") != std::string::npos);

  r = run({"sweep", "--input", data("two.csv"), "--k", "1", "--grid", "0,4", "--format", "table"});
  CHECK(r.out.find("Moderate") == std::string::npos);
  CHECK(r.out.find("7812.5") != std::string::npos);
}

TEST_CASE("apply command") {
  auto r = run({"apply", "--input", data("three.csv"), "--endowment", "4", "--k", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("(improves)") != std::string::npos);

  r = run({"apply", "--input", data("two.csv"), "--endowment", "4", "--k", "1", "--format", "json"});
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["delta"] == 0.15625);
  CHECK(j["effect"] == "hurts");

  r = run({"apply", "--input", data("three.csv"), "--endowment", "4", "--weights", "0.75,0.25",
           "--format", "csv"});
  CHECK(r.out == "club,budget,award,awarded\nA,3,3,6\nB,2,1,3\nC,1,0,1\n");

  r = run({"apply", "--input", data("descending5.csv"), "--endowment", "10", "--amounts",
           data("descending5_bottom_amounts.csv"), "--format", "json"});
  CHECK(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["effect"] == "improves");

  r = run({"apply", "--input", data("three.csv"), "--endowment", "4", "--k", "2", "--weights", "1"});
  CHECK(r.code == 2);
  r = run({"apply", "--input", data("three.csv"), "--endowment", "4", "--weights", "0.25,0.75"});
  CHECK(r.code == 2);
  CHECK(r.err.find("nonincreasing") != std::string::npos);
}

TEST_CASE("input errors exit with code 2 and a located message") {
  const auto bad = temp_file("bad.csv", "club,budget\nA,3\nB,abc\n");
  auto r = run({"index", "--input", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(bad.string() + ":3:") != std::string::npos);

  const auto single = temp_file("single.csv", "club,budget\nA,3\n");
  r = run({"index", "--input", single.string()});
  CHECK(r.code == 2);

  r = run({"index", "--input", "/nonexistent/file.csv"});
  CHECK(r.code == 2);

  r = run({"thresholds", "--input", data("three.csv"), "--endowment", "-1"});
  CHECK(r.code == 2);

  r = run({"sweep", "--input", data("three.csv"), "--k", "9", "--grid", "0:1:2"});
  CHECK(r.code == 2);

  r = run({"sweep", "--input", data("three.csv"), "--k", "1", "--grid", "5:1:2"});
  CHECK(r.code == 2);

  r = run({"index"});
  CHECK(r.code == 2);

  r = run({"nosuchcommand"});
  CHECK(r.code == 2);

  r = run({"--help"});
  CHECK(r.code == 0);
}

TEST_CASE("verify command") {
  auto r = run({"verify", "--instances", "200", "--seed", "5", "--peak-steps", "1000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("6 properties, 200 instances, 0 failures") != std::string::npos);

  const auto again = run({"verify", "--instances", "200", "--seed", "5", "--peak-steps", "1000"});
  CHECK(again.out == r.out);

  r = run({"verify", "--instances", "100", "--n-range", "2:2", "--peak-steps", "1000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("6 properties, 100 instances, 0 failures") != std::string::npos);

  r = run({"verify", "--instances", "50", "--format", "json", "--peak-steps", "1000"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["properties"].size() == 6);

  r = run({"verify", "--n-range", "1:3"});
  CHECK(r.code == 2);
}
