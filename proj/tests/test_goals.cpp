#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "pcalloc/error.hpp"
#include "pcalloc/goals.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace pcalloc;

namespace {

const std::vector<std::string> kAB = {"A", "B"};

Race race_of(std::vector<CarResult> cars) { return Race{"R1", 1, std::move(cars)}; }

CarResult car(const char* team, int index, std::optional<int> rank, bool classified) {
  return CarResult{team, index, rank, classified, std::nullopt};
}

}  // namespace

TEST_CASE("race_goals: a1, b1, a2, b2 all classified gives 3-1") {
  const auto g = race_goals(race_of({car("A", 1, 1, true), car("B", 1, 2, true), car("A", 2, 3, true),
                                     car("B", 2, 4, true)}),
                            kAB);
  CHECK(g(0, 1) == 3);
  CHECK(g(1, 0) == 1);
  CHECK(g(0, 0) == 0);
}

TEST_CASE("race_goals: finished cars beat unfinished ones") {
  const auto g = race_goals(race_of({car("A", 1, 1, true), car("A", 2, 2, true), car("B", 1, 3, false),
                                     car("B", 2, std::nullopt, false)}),
                            kAB);
  CHECK(g(0, 1) == 4);
  CHECK(g(1, 0) == 0);
}

TEST_CASE("race_goals: two unfinished cars are incomparable") {
  const Race race = race_of({car("A", 1, 1, true), car("A", 2, 2, false), car("B", 1, 3, false),
                             car("B", 2, std::nullopt, false)});
  const auto expected = testing::brute_force_race_goals(race, kAB);
  const auto g = race_goals(race, kAB);
  CHECK(expected(0, 1) == 2);
  CHECK(g(0, 1) == expected(0, 1));
  CHECK(g(1, 0) == 0);
}

TEST_CASE("race_goals: unclassified cars ignore their rank") {
  // B1 has the better rank but did not finish.
  const auto g = race_goals(race_of({car("B", 1, 1, false), car("A", 1, 2, true), car("A", 2, 3, true),
                                     car("B", 2, 4, true)}),
                            kAB);
  CHECK(g(0, 1) == 4);
  CHECK(g(1, 0) == 0);
}

TEST_CASE("race_goals matches brute-force enumeration on random races") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto season = testing::random_season(rng, 3 + trial % 8, 1, 0.3);
    CHECK(race_goals(season.races[0], season.teams) == testing::brute_force_race_goals(season.races[0], season.teams));
  }
}

TEST_CASE("fully classified pairs split four goals in the enumerated ways") {
  std::mt19937_64 rng(17);
  const std::set<std::pair<std::int64_t, std::int64_t>> allowed = {{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}};
  for (int trial = 0; trial < 50; ++trial) {
    const auto season = testing::random_season(rng, 6, 1, 0.0);
    const auto g = race_goals(season.races[0], season.teams);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) CHECK(allowed.contains({g(i, j), g(j, i)}));
  }
}

TEST_CASE("goals_matrix sums races with weight one") {
  std::mt19937_64 rng(23);
  const auto season = testing::random_season(rng, 5, 7);
  const auto goals = goals_matrix(season);
  CHECK(goals.races_counted == 7);
  SquareMatrix<std::int64_t> expected(5, 0);
  for (const auto& race : season.races) {
    const auto g = testing::brute_force_race_goals(race, season.teams);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) expected(i, j) += g(i, j);
  }
  CHECK(goals.g == expected);
  CHECK_NOTHROW(validate_goals(goals));

  SeasonResults single = season;
  single.races.resize(1);
  CHECK(goals_matrix(single).g == race_goals(season.races[0], season.teams));
}

TEST_CASE("relabeling teams permutes goals rows and columns") {
  std::mt19937_64 rng(29);
  const auto season = testing::random_season(rng, 6, 4);
  auto relabeled = season;
  std::vector<std::size_t> perm = {3, 0, 5, 1, 4, 2};
  for (std::size_t k = 0; k < perm.size(); ++k) relabeled.teams[k] = season.teams[perm[k]];
  const auto a = goals_matrix(season);
  const auto b = goals_matrix(relabeled);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(b.g(i, j) == a.g(perm[i], perm[j]));
}

TEST_CASE("load_goals reads the 2014 fixture") {
  const auto& goals = testing::goals_2014();
  CHECK(goals.size() == 11);
  CHECK_FALSE(goals.races_counted.has_value());
  const auto mercedes = goals.team_index("Mercedes");
  const auto red_bull = goals.team_index("Red Bull");
  CHECK(goals.g(mercedes, red_bull) == 61);
  CHECK(goals.g(red_bull, mercedes) == 14);
  CHECK(goals.g(goals.team_index("Sauber"), goals.team_index("Marussia")) == 44);
  CHECK(goals.g(goals.team_index("Marussia"), goals.team_index("Sauber")) == 28);
  // 19 races, four cross-car pairs each.
  for (std::size_t i = 0; i < 11; ++i)
    for (std::size_t j = i + 1; j < 11; ++j) CHECK(goals.g(i, j) + goals.g(j, i) <= 4 * 19);
}

TEST_CASE("load_goals accepts zeros and rejects bad shapes and cells") {
  const auto goals = load_goals("team,A,B\nA,,4\nB,0,\n");
  CHECK(goals.g(0, 1) == 4);
  CHECK(goals.g(1, 0) == 0);
  CHECK_THROWS_WITH_AS(load_goals("team,A,B\nA,,4\nB,0,\nC,1,2\n"), doctest::Contains("non-square"), Error);
  CHECK_THROWS_WITH_AS(load_goals("team,A,B,C\nA,,4,1\nB,0,,1\n"), doctest::Contains("non-square"), Error);
  CHECK_THROWS_AS(load_goals("team,A,B\nA,,-1\nB,0,\n"), Error);
  CHECK_THROWS_AS(load_goals("team,A,B\nA,,1.5\nB,0,\n"), Error);
  CHECK_THROWS_WITH_AS(load_goals("team,A,B\nA,3,1\nB,0,\n"), doctest::Contains("diagonal"), Error);
}

TEST_CASE("races_counted bound is enforced only when known") {
  CHECK_NOTHROW(load_goals("team,A,B\nA,,9\nB,0,\n"));
  CHECK_THROWS_AS(load_goals("#races_counted,2\nteam,A,B\nA,,9\nB,0,\n"), Error);
}

TEST_CASE("write_goals round-trips through load_goals") {
  std::mt19937_64 rng(31);
  const auto goals = goals_matrix(testing::random_season(rng, 7, 5));
  CHECK(load_goals(write_goals(goals)) == goals);
  CHECK(load_goals(write_goals(testing::goals_2014())) == testing::goals_2014());
}
