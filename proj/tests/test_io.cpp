#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "cbal/analysis.hpp"
#include "cbal/error.hpp"
#include "cbal/io.hpp"
#include "support/generators.hpp"

using namespace cbal;

namespace {

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("budget CSV parsing") {
  const auto clubs = io::parse_budget_csv(
      "club,budget\nReal Madrid,727\n\"Club, with comma\",12.5\n# comment\n\nC,1e2\r\n", "t.csv");
  REQUIRE(clubs.size() == 3);
  CHECK(clubs[0].label == "Real Madrid");
  CHECK(clubs[0].budget == 727);
  CHECK(clubs[1].label == "Club, with comma");
  CHECK(clubs[1].budget == 12.5);
  CHECK(clubs[2].budget == 100);

  const auto swapped = io::parse_budget_csv("Budget , Club\n3,a\n1,b\n", "t.csv");
  CHECK(swapped[0].label == "a");
  CHECK(swapped[1].budget == 1);
}

TEST_CASE("budget CSV errors carry line numbers") {
  CHECK(error_text([] { io::parse_budget_csv("club,budget\nA,3\nB,abc\n", "t.csv"); }) ==
        "t.csv:3: budget 'abc' is not a number");
  CHECK(error_text([] { io::parse_budget_csv("club,budget\nA,3\nB,0\n", "t.csv"); })
            .starts_with("t.csv:3:"));
  CHECK(error_text([] { io::parse_budget_csv("club,budget\nA,-3\nB,1\n", "t.csv"); })
            .starts_with("t.csv:2:"));
  CHECK(error_text([] { io::parse_budget_csv("club,budget\nA,3,4\nB,1\n", "t.csv"); })
            .starts_with("t.csv:2:"));
  CHECK(error_text([] { io::parse_budget_csv("team,money\nA,3\n", "t.csv"); })
            .find("'club'") != std::string::npos);
  CHECK(error_text([] { io::parse_budget_csv("club,budget\nA,3\n", "t.csv"); })
            .find("at least 2") != std::string::npos);
  CHECK(error_text([] { io::parse_budget_csv("", "t.csv"); }).starts_with("t.csv:1:"));
  CHECK(error_text([] { io::parse_budget_csv("club,budget\n\"A,3\nB,1\n", "t.csv"); })
            .starts_with("t.csv:2:"));
}

TEST_CASE("budget JSON parsing") {
  const auto clubs =
      io::parse_budget_json(R"([{"club": "A", "budget": 5}, {"club": "B", "budget": 2.5}])", "t.json");
  REQUIRE(clubs.size() == 2);
  CHECK(clubs[1].label == "B");
  CHECK(clubs[1].budget == 2.5);

  CHECK(error_text([] { io::parse_budget_json("{}", "t.json"); }).find("array") != std::string::npos);
  CHECK(error_text([] {
          io::parse_budget_json(R"([{"club": "A", "budget": 5}, {"club": "B", "budget": "x"}])", "t.json");
        }).find("entry 2") != std::string::npos);
  CHECK(error_text([] {
          io::parse_budget_json(R"([{"club": "A", "budget": 5}, {"club": "B", "budget": -1}])", "t.json");
        }).find("entry 2") != std::string::npos);
  CHECK(error_text([] { io::parse_budget_json("[{", "t.json"); }).starts_with("t.json:"));
}

TEST_CASE("grid parsing") {
  CHECK(io::parse_grid("0:600:6") == std::vector<double>{0, 100, 200, 300, 400, 500, 600});
  CHECK(io::parse_grid("0,10,20,60") == std::vector<double>{0, 10, 20, 60});
  CHECK(io::parse_grid("5") == std::vector<double>{5});
  const auto fine = io::parse_grid("0:1:1000");
  CHECK(fine.size() == 1001);
  CHECK(fine.back() == 1.0);
  CHECK_THROWS_AS(io::parse_grid("0:10"), Error);
  CHECK_THROWS_AS(io::parse_grid("10:0:5"), Error);
  CHECK_THROWS_AS(io::parse_grid("0:10:0"), Error);
  CHECK_THROWS_AS(io::parse_grid("0:10:2.5"), Error);
  CHECK_THROWS_AS(io::parse_grid("1,x"), Error);
  CHECK(io::parse_range("2:30") == std::pair<double, double>{2, 30});
  CHECK_THROWS_AS(io::parse_range("2"), Error);
}

TEST_CASE("number formatting") {
  CHECK(io::format_fixed(2444.4444, 1) == "2444.4");
  CHECK(io::format_fixed(1232.35, 1).size() == 6);
  CHECK(io::format_exact(0.1) == "0.1");
  CHECK(io::format_exact(-0.0044444444444444453) == "-0.004444444444444445");
}

TEST_CASE("sweep CSV layout") {
  const auto x = test::league_of({5, 4, 3, 2, 1});
  const std::vector<double> grid{0, 10, 20, 60};
  std::ostringstream out;
  io::write_sweep_csv(out, sweep_e(x, 4, grid), false);
  const std::string text = out.str();
  CHECK(text.starts_with("E,hhi_points,band,delta\n0,"));
  const auto rows = io::parse_sweep_csv(text, "sweep.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].delta == 0.0);
  CHECK(rows[1].delta == doctest::Approx(-0.0044).epsilon(0.01));
  CHECK(rows[2].delta == doctest::Approx(-0.0036).epsilon(0.01));
  CHECK(rows[3].delta == 0.0);
  CHECK(rows[1].band == "High");
}

TEST_CASE("sweep CSV round trip is bit-stable") {
  test::LeagueGen gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = gen.league();
    const std::size_t k = gen.size(1, x.size());
    std::vector<double> grid{0};
    for (int j = 0; j < 60; ++j) grid.push_back(grid.back() + gen.log_uniform(1e-3, 1e3));
    const bool points = trial % 2 == 0;

    std::ostringstream first;
    io::write_sweep_csv(first, sweep_e(x, k, grid), points);
    const auto rows = io::parse_sweep_csv(first.str(), "first");

    std::vector<double> reparsed;
    for (const auto& r : rows) reparsed.push_back(r.endowment);
    CHECK(reparsed == grid);

    std::ostringstream second;
    io::write_sweep_csv(second, sweep_e(x, k, reparsed), points);
    CHECK(second.str() == first.str());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const auto recomputed = sweep_e(x, k, std::span(reparsed).subspan(j, 1));
      CHECK(rows[j].hhi_points == recomputed.rows[0].hhi_points);
    }
  }
}
