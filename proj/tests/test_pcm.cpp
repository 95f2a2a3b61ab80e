#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include <nlohmann/json.hpp>

#include "pcalloc/error.hpp"
#include "pcalloc/pcm.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/printed_pcm_2014.hpp"

using namespace pcalloc;

namespace {

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("ratio evaluates powered goal ratios") {
  CHECK(ratio(61, 14, 1.0) == doctest::Approx(61.0 / 14.0).epsilon(1e-15));
  CHECK(std::round(ratio(61, 14, 1.0) * 100.0) / 100.0 == 4.36);
  CHECK(ratio(7, 7, 2.5, 0.3) == 1.0);
  CHECK(ratio(61, 14, 0.0) == 1.0);
  // 61^2 / 14^2 = 3721 / 196 exactly.
  CHECK(rel_close(ratio(61, 14, 2.0), 3721.0 / 196.0, 1e-14));
  CHECK(rel_close(ratio(66, 3, 3.0), 10648.0, 1e-14));
}

TEST_CASE("ratio reports division by zero as its own error") {
  CHECK_THROWS_AS(ratio(4, 0, 1.0, 0.0), DivisionByZeroError);
  CHECK(ratio(4, 0, 1.0, 1.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(ratio(4, 2, -1.0), Error);
}

TEST_CASE("ratio decreases in epsilon when g_ij > g_ji") {
  double previous = ratio(61, 14, 1.5, 0.0);
  for (double eps = 0.25; eps <= 10.0; eps += 0.25) {
    const double r = ratio(61, 14, 1.5, eps);
    CHECK(r < previous);
    CHECK(r > 1.0);
    previous = r;
  }
}

TEST_CASE("build_pcm on the 2014 fixture matches the printed alpha = 1 matrix") {
  const auto& goals = testing::goals_2014();
  const auto m = build_pcm(goals, 1.0);
  for (std::size_t i = 0; i < 11; ++i) {
    for (std::size_t j = 0; j < 11; ++j) {
      const char* printed = testing::kPrintedPcm2014[i][j];
      const char* dot = std::strchr(printed, '.');
      const int decimals = dot ? static_cast<int>(std::strlen(dot + 1)) : 0;
      const double scale = std::pow(10.0, decimals);
      CHECK(std::round(m.a(i, j) * scale) / scale == doctest::Approx(std::atof(printed)).epsilon(1e-12));
    }
  }
  CHECK(m.a(goals.team_index("Mercedes"), goals.team_index("Caterham")) == 22.0);
  CHECK(m.a(goals.team_index("Williams"), goals.team_index("Sauber")) == 17.0);
}

TEST_CASE("build_pcm constructs exact reciprocals and a unit diagonal") {
  const auto m = build_pcm(testing::goals_2014(), 1.7);
  for (std::size_t i = 0; i < 11; ++i) {
    CHECK(m.a(i, i) == 1.0);
    for (std::size_t j = i + 1; j < 11; ++j) CHECK(m.a(j, i) == 1.0 / m.a(i, j));
  }
  CHECK_NOTHROW(validate_pcm(m));
}

TEST_CASE("build_pcm at alpha 0 is the all-ones matrix") {
  const auto m = build_pcm(testing::goals_2014(), 0.0);
  for (double v : m.a.values()) CHECK(v == 1.0);
}

TEST_CASE("build_pcm with epsilon smooths zero goals") {
  const auto goals = load_goals("team,A,B\nA,,4\nB,0,\n");
  const auto m = build_pcm(goals, 1.0, 1.0);
  CHECK(m.a(0, 1) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(m.a(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(m.epsilon == 1.0);
  try {
    build_pcm(goals, 1.0, 0.0);
    FAIL("expected division by zero");
  } catch (const DivisionByZeroError& e) {
    CHECK(e.row_team() == "A");
    CHECK(e.col_team() == "B");
  }
}

TEST_CASE("build_pcm orders entries monotonically in the goal difference") {
  const auto& goals = testing::goals_2014();
  const auto m = build_pcm(goals, 0.8);
  for (std::size_t i = 0; i < 11; ++i) {
    for (std::size_t j = 0; j < 11; ++j) {
      if (goals.g(i, j) > goals.g(j, i)) {
        CHECK(m.a(i, j) > 1.0);
        CHECK(m.a(j, i) < 1.0);
      }
    }
  }
}

TEST_CASE("power_transform composes with build_pcm") {
  const auto& goals = testing::goals_2014();
  const auto base = build_pcm(goals, 1.0);
  const auto squared = power_transform(base, 2.0);
  const auto direct = build_pcm(goals, 2.0);
  CHECK(squared.alpha == 2.0);
  for (std::size_t i = 0; i < 11; ++i)
    for (std::size_t j = 0; j < 11; ++j) CHECK(rel_close(squared.a(i, j), direct.a(i, j), 1e-12));

  const auto same = power_transform(base, 1.0);
  for (std::size_t i = 0; i < 11; ++i)
    for (std::size_t j = 0; j < 11; ++j) CHECK(rel_close(same.a(i, j), base.a(i, j), 1e-15));

  const auto ones = power_transform(build_pcm(goals, 0.0), 2.7);
  for (double v : ones.a.values()) CHECK(v == 1.0);
}

TEST_CASE("power_transform keeps reciprocity on random matrices") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> exponent(0.01, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = testing::random_reciprocal(rng, 3 + trial % 10);
    const auto p = power_transform(m, exponent(rng));
    CHECK_NOTHROW(validate_pcm(p));
  }
}

TEST_CASE("pcm CSV and JSON serialization") {
  const auto m = build_pcm(testing::goals_2014(), 1.3, 0.5);
  const auto csv_text = write_pcm_csv(m);
  const auto loaded = load_pcm_csv(csv_text, 1.3, 0.5);
  CHECK(loaded.teams == m.teams);
  CHECK(loaded.a == m.a);  // shortest round-trip text is exact

  const auto doc = nlohmann::json::parse(write_pcm_json(m));
  CHECK(doc["alpha"].get<double>() == 1.3);
  CHECK(doc["epsilon"].get<double>() == 0.5);
  CHECK(doc["teams"].size() == 11);
  CHECK(doc["values"][0][10].get<double>() == m.a(0, 10));

  const auto rounded = write_pcm_csv(build_pcm(testing::goals_2014(), 1.0), 2);
  CHECK(rounded.find("Mercedes,1.00,4.36,5.73") != std::string::npos);
}

TEST_CASE("validate_pcm rejects non-reciprocal external matrices") {
  CHECK_THROWS_AS(load_pcm_csv("team,A,B\nA,1,2\nB,0.6,1\n"), Error);
  CHECK_THROWS_AS(load_pcm_csv("team,A,B\nA,1,-2\nB,-0.5,1\n"), Error);
  CHECK_NOTHROW(load_pcm_csv("team,A,B\nA,1,4\nB,0.25,1\n"));
}
