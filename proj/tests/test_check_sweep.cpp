#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "mpqp/check.hpp"
#include "mpqp/errors.hpp"
#include "mpqp/sweep.hpp"
#include "mpqp/value_gradient.hpp"
#include "test_support.hpp"

using namespace mpqp;
using namespace mpqp_test;

TEST_CASE("check suite passes on P1 and P2") {
  for (const Problem& p : {make_p1(), make_p2()}) {
    const CheckReport report = run_checks(p, 42, 60);
    for (const auto& e : report.entries) {
      INFO(e.name, ": ", e.detail);
      CHECK(e.status != CheckStatus::Fail);
    }
    CHECK(report.all_passed());
    CHECK(report.count(CheckStatus::Skip) == 0);
  }
}

TEST_CASE("check suite is deterministic for a fixed seed") {
  const Problem p = make_p2();
  const CheckReport a = run_checks(p, 7, 40);
  const CheckReport b = run_checks(p, 7, 40);
  CHECK(render_text(a) == render_text(b));
  CHECK(render_json(a) == render_json(b));
  // A different seed samples different points.
  const CheckReport c = run_checks(p, 8, 40);
  CHECK(render_text(a) != render_text(c));
}

TEST_CASE("duplicated constraints: LICQ checks skip, the rest pass") {
  const CheckReport report = run_checks(make_duplicated(), 42, 40);
  bool saw_skip = false;
  for (const auto& e : report.entries) {
    INFO(e.name, ": ", e.detail);
    CHECK(e.status != CheckStatus::Fail);
    if (e.status == CheckStatus::Skip) {
      saw_skip = true;
      CHECK(e.detail.find("LICQ") != std::string::npos);
    }
  }
  CHECK(saw_skip);
  CHECK(report.all_passed());
}

TEST_CASE("check suite passes on random problems") {
  for (std::uint64_t seed : {3u, 9u, 27u}) {
    const CheckReport report = run_checks(random_problem(seed), 42, 40);
    for (const auto& e : report.entries) {
      INFO("seed ", seed, " ", e.name, ": ", e.detail);
      CHECK(e.status != CheckStatus::Fail);
    }
  }
}

TEST_CASE("text and JSON renderings agree") {
  const CheckReport report = run_checks(make_p1(), 42, 30);
  const std::string text = render_text(report);
  const auto doc = nlohmann::json::parse(render_json(report));

  REQUIRE(doc.at("checks").size() == report.entries.size());
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& entry = report.entries[i];
    const auto& jc = doc.at("checks").at(i);
    CHECK(jc.at("name") == entry.name);
    const std::string status = jc.at("status").get<std::string>();
    CHECK(text.find("[" + status + "] " + entry.name) != std::string::npos);
    if (entry.status != CheckStatus::Skip) {
      CHECK(jc.at("measured").get<double>() == entry.measured);
    } else {
      CHECK(jc.at("measured").is_null());
    }
  }
  CHECK(doc.at("all_passed").get<bool>() == report.all_passed());
}

TEST_CASE("P1 sweep reproduces the hand-computed CSV byte for byte") {
  const ExplicitSolution sol = enumerate_regions(make_p1());
  const std::string csv = run_sweep(sol, {{-2.0}, {2.0}, 5});
  const std::string expected =
      "t,x_1,V,gradV_1,region_active_set,boundary_flag\n"
      "0,-2,0,0,{},0\n"
      "0.25,-1,0,0,{},0\n"
      "0.5,0,0,0,{},1\n"
      "0.75,1,0.5,1,{1},0\n"
      "1,2,2,2,{1},0\n";
  CHECK(csv == expected);
}

TEST_CASE("sweep with two steps hits exactly the endpoints") {
  const ExplicitSolution sol = enumerate_regions(make_p2());
  const std::string csv = run_sweep(sol, {{-3.0, 0.0}, {1.0, 1.0}, 2});
  CHECK(csv ==
        "t,x_1,x_2,V,gradV_1,gradV_2,region_active_set,boundary_flag\n"
        "0,-3,0,2,-2,0,{1},0\n"
        "1,1,1,0,0,0,{},0\n");
}

TEST_CASE("sweep rows outside the feasible set have empty fields") {
  const ExplicitSolution sol = enumerate_regions(make_p3());
  const std::string csv = run_sweep(sol, {{-2.0}, {1.0}, 4});
  CHECK(csv.find("0,-2,,,,0\n") != std::string::npos);
  // The x = -1 row is on the feasible boundary.
  CHECK(csv.find(",-1,0,0,{},1\n") != std::string::npos);
}

TEST_CASE("sweep validates its specification") {
  const ExplicitSolution sol = enumerate_regions(make_p1());
  CHECK_THROWS_AS(run_sweep(sol, {{-2.0}, {2.0}, 1}), InvalidInput);
  CHECK_THROWS_AS(run_sweep(sol, {{-2.0, 0.0}, {2.0}, 5}), DimensionMismatch);
}

TEST_CASE("sweep rows are strictly increasing in t with one row per step") {
  const ExplicitSolution sol = enumerate_regions(make_p2());
  const std::string csv = run_sweep(sol, {{-2.0, -2.0}, {2.0, 2.0}, 17});
  std::size_t rows = 0;
  double last_t = -1.0;
  std::size_t pos = csv.find('\n') + 1;  // skip header
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    const double t = std::stod(csv.substr(pos, csv.find(',', pos) - pos));
    CHECK(t > last_t);
    last_t = t;
    ++rows;
    pos = end + 1;
  }
  CHECK(rows == 17);
}
