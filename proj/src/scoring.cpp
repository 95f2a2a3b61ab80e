#include "pcalloc/scoring.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {

int PointsSystem::points_for(int position) const {
  if (position < 1 || static_cast<std::size_t>(position) > points.size()) return 0;
  return points[static_cast<std::size_t>(position - 1)];
}

int PointsSystem::multiplier_for(const Race& race, const SeasonResults& season) const {
  if (const auto it = multipliers.find(race.race_id); it != multipliers.end()) return it->second;
  if (const auto it = multipliers.find(std::string(kLastRaceKey)); it != multipliers.end()) {
    const auto last = std::max_element(season.races.begin(), season.races.end(),
                                       [](const Race& a, const Race& b) { return a.ordinal < b.ordinal; });
    if (last != season.races.end() && last->race_id == race.race_id) return it->second;
  }
  return 1;
}

void PointsSystem::validate() const {
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k] < 0) throw Error(ErrorKind::kValidation, fmt::format("system '{}': negative points", name));
    if (k > 0 && points[k] > points[k - 1]) {
      throw Error(ErrorKind::kValidation, fmt::format("system '{}': points increase at position {}", name, k + 1));
    }
  }
  for (const auto& [race, factor] : multipliers) {
    if (factor <= 0) {
      throw Error(ErrorKind::kValidation, fmt::format("system '{}': non-positive multiplier for '{}'", name, race));
    }
  }
}

std::vector<PointsSystem> builtin_systems() {
  return {
      {"1961-1990", {9, 6, 4, 3, 2, 1, 0, 0, 0, 0}, {}},
      {"1991-2002", {10, 6, 4, 3, 2, 1, 0, 0, 0, 0}, {}},
      {"2003-2009", {10, 8, 6, 5, 4, 3, 2, 1, 0, 0}, {}},
      {"2010-", {25, 18, 15, 12, 10, 8, 6, 4, 2, 1}, {}},
      {"2014-official", {25, 18, 15, 12, 10, 8, 6, 4, 2, 1}, {{std::string(kLastRaceKey), 2}}},
  };
}

PointsSystem builtin_system(std::string_view name) {
  for (auto& system : builtin_systems()) {
    if (system.name == name) return system;
  }
  throw Error(ErrorKind::kInvalidArgument, fmt::format("unknown points system '{}'", name));
}

PointsSystem parse_points_system(std::string_view json_text) {
  PointsSystem system;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    system.name = doc.at("name").get<std::string>();
    system.points = doc.at("points").get<std::vector<int>>();
    if (doc.contains("multipliers")) system.multipliers = doc.at("multipliers").get<std::map<std::string, int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, fmt::format("points system JSON: {}", e.what()));
  }
  system.validate();
  return system;
}

const StandingsEntry& Standings::entry(std::string_view team) const {
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.team == team; });
  if (it == entries.end()) throw Error(ErrorKind::kValidation, fmt::format("unknown team '{}'", team));
  return *it;
}

Standings score_season(const SeasonResults& season, const PointsSystem& system) {
  system.validate();
  const std::size_t n = season.teams.size();
  int deepest = 0;
  for (const Race& race : season.races)
    for (const CarResult& car : race.results)
      if (car.classified.value_or(false) && car.finish_rank) deepest = std::max(deepest, *car.finish_rank);

  std::vector<std::int64_t> points(n, 0);
  std::vector<std::vector<int>> countback(n, std::vector<int>(static_cast<std::size_t>(deepest), 0));
  for (const Race& race : season.races) {
    const int factor = system.multiplier_for(race, season);
    for (const CarResult& car : race.results) {
      if (!car.classified.value_or(false) || !car.finish_rank) continue;
      const std::size_t t = season.team_index(car.team_id);
      points[t] += static_cast<std::int64_t>(system.points_for(*car.finish_rank)) * factor;
      ++countback[t][static_cast<std::size_t>(*car.finish_rank - 1)];
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto same = [&](std::size_t a, std::size_t b) { return points[a] == points[b] && countback[a] == countback[b]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a] != points[b]) return points[a] > points[b];
    return countback[a] > countback[b];  // lexicographic: more wins first
  });

  Standings out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = order[k];
    const bool tie = (k > 0 && same(order[k - 1], t)) || (k + 1 < n && same(order[k + 1], t));
    out.entries.push_back({season.teams[t], points[t], static_cast<int>(k + 1), tie});
  }
  return out;
}

std::string write_standings_csv(const Standings& standings) {
  std::string out = "team,points,rank,tie_flag\n";
  for (const auto& e : standings.entries) {
    out += fmt::format("{},{},{},{}\n", csv::quote(e.team), e.points, e.rank, e.tie ? "true" : "false");
  }
  return out;
}

std::string write_standings_json(const Standings& standings, std::string_view system_name) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : standings.entries) {
    rows.push_back({{"team", e.team}, {"points", e.points}, {"rank", e.rank}, {"tie", e.tie}});
  }
  return nlohmann::json{{"system", system_name}, {"standings", rows}}.dump(2) + "\n";
}

}  // namespace pcalloc
