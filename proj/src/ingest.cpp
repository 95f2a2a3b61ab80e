#include "pcalloc/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include <fmt/format.h>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {
namespace {

constexpr std::array<std::string_view, 7> kColumns = {
    "race_id", "ordinal", "team_id", "car_index", "finish_rank", "classified", "laps_fraction"};

enum Column : std::size_t { kRaceId, kOrdinal, kTeamId, kCarIndex, kFinishRank, kClassified, kLapsFraction };

[[noreturn]] void fail_line(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::kMalformedInput, fmt::format("line {}: {}", line, message));
}

std::optional<bool> parse_flag(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  return std::nullopt;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(' ');
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(' ');
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::size_t SeasonResults::team_index(std::string_view team_id) const {
  const auto it = std::find(teams.begin(), teams.end(), team_id);
  if (it == teams.end()) {
    throw Error(ErrorKind::kValidation, fmt::format("unknown team '{}'", team_id));
  }
  return static_cast<std::size_t>(it - teams.begin());
}

CarResult derive_classified(CarResult result, double threshold) {
  if (result.classified.has_value()) return result;
  if (!result.laps_fraction.has_value()) {
    throw Error(ErrorKind::kValidation,
                fmt::format("team '{}' car {}: neither classified nor laps_fraction given", result.team_id,
                            result.car_index));
  }
  result.classified = *result.laps_fraction > threshold;
  return result;
}

void validate_season(const SeasonResults& season) {
  if (season.teams.size() < 2) {
    throw Error(ErrorKind::kValidation, fmt::format("season needs at least 2 teams, got {}", season.teams.size()));
  }
  std::set<std::string_view> team_set(season.teams.begin(), season.teams.end());
  if (team_set.size() != season.teams.size()) {
    throw Error(ErrorKind::kValidation, "duplicate team in team list");
  }
  std::set<int> ordinals;
  std::set<std::string_view> race_ids;
  for (const Race& race : season.races) {
    if (!race_ids.insert(race.race_id).second) {
      throw Error(ErrorKind::kValidation, fmt::format("race '{}': duplicate race_id", race.race_id));
    }
    if (!ordinals.insert(race.ordinal).second) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("race '{}': ordinal {} used by another race", race.race_id, race.ordinal));
    }
    std::map<std::string_view, std::vector<int>> cars_by_team;
    std::set<int> ranks;
    for (const CarResult& car : race.results) {
      if (!team_set.contains(car.team_id)) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("race '{}': unknown team '{}'", race.race_id, car.team_id));
      }
      cars_by_team[car.team_id].push_back(car.car_index);
      if (!car.classified.has_value()) {
        throw Error(ErrorKind::kValidation, fmt::format("race '{}': team '{}' car {} has no classification",
                                                        race.race_id, car.team_id, car.car_index));
      }
      if (car.laps_fraction && (*car.laps_fraction < 0.0 || *car.laps_fraction > 1.0)) {
        throw Error(ErrorKind::kValidation, fmt::format("race '{}': team '{}' car {} laps_fraction outside [0,1]",
                                                        race.race_id, car.team_id, car.car_index));
      }
      if (*car.classified && !car.finish_rank) {
        throw Error(ErrorKind::kValidation, fmt::format("race '{}': team '{}' car {} is classified without a rank",
                                                        race.race_id, car.team_id, car.car_index));
      }
      if (car.finish_rank) {
        if (*car.finish_rank <= 0) {
          throw Error(ErrorKind::kValidation,
                      fmt::format("race '{}': non-positive finish_rank {}", race.race_id, *car.finish_rank));
        }
        if (!ranks.insert(*car.finish_rank).second) {
          throw Error(ErrorKind::kValidation,
                      fmt::format("race '{}': duplicate finish_rank {}", race.race_id, *car.finish_rank));
        }
      }
    }
    for (auto& [team, cars] : cars_by_team) {
      std::sort(cars.begin(), cars.end());
      if (cars != std::vector<int>{1, 2}) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("race '{}': team cardinality violated for '{}' ({} car entries, expected cars 1 and 2)",
                                race.race_id, team, cars.size()));
      }
    }
  }
}

SeasonResults parse_season(std::string_view input, double threshold) {
  const auto lines = csv::split_lines(input);
  SeasonResults season;
  bool explicit_teams = false;
  std::optional<std::array<std::size_t, kColumns.size()>> column_of;
  std::map<std::string, std::size_t> race_slot;
  std::map<std::string, std::size_t> race_line;

  for (const csv::Line& line : lines) {
    if (line.text.front() == '#') {
      auto fields = csv::split_fields(csv::Line{line.number, line.text.substr(1)});
      const std::string key = trim(fields.front());
      if (key == "season" && fields.size() == 2) {
        season.season_id = trim(fields[1]);
      } else if (key == "teams") {
        for (std::size_t i = 1; i < fields.size(); ++i) season.teams.push_back(trim(fields[i]));
        explicit_teams = true;
      }
      continue;
    }
    auto fields = csv::split_fields(line);
    if (!column_of) {
      std::array<std::size_t, kColumns.size()> positions;
      positions.fill(kColumns.size());
      if (fields.size() != kColumns.size()) {
        // Find the first unknown one to name it.
        for (const auto& f : fields) {
          if (std::find(kColumns.begin(), kColumns.end(), trim(f)) == kColumns.end()) {
            fail_line(line.number, fmt::format("unknown column '{}'", trim(f)));
          }
        }
        fail_line(line.number, fmt::format("header must have {} columns, got {}", kColumns.size(), fields.size()));
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = trim(fields[i]);
        const auto it = std::find(kColumns.begin(), kColumns.end(), name);
        if (it == kColumns.end()) fail_line(line.number, fmt::format("unknown column '{}'", name));
        const auto col = static_cast<std::size_t>(it - kColumns.begin());
        if (positions[col] != kColumns.size()) fail_line(line.number, fmt::format("duplicate column '{}'", name));
        positions[col] = i;
      }
      column_of = positions;
      continue;
    }
    if (fields.size() != kColumns.size()) {
      fail_line(line.number, fmt::format("expected {} fields, got {}", kColumns.size(), fields.size()));
    }
    auto field = [&](Column c) { return trim(fields[(*column_of)[c]]); };

    CarResult car;
    const std::string race_id = field(kRaceId);
    if (race_id.empty()) fail_line(line.number, "empty race_id");
    const auto ordinal = csv::parse_integer(field(kOrdinal));
    if (!ordinal) fail_line(line.number, fmt::format("bad ordinal '{}'", field(kOrdinal)));
    car.team_id = field(kTeamId);
    if (car.team_id.empty()) fail_line(line.number, "empty team_id");
    const auto car_index = csv::parse_integer(field(kCarIndex));
    if (!car_index || (*car_index != 1 && *car_index != 2)) {
      fail_line(line.number, fmt::format("car_index must be 1 or 2, got '{}'", field(kCarIndex)));
    }
    car.car_index = static_cast<int>(*car_index);
    if (const auto text = field(kFinishRank); !text.empty()) {
      const auto rank = csv::parse_integer(text);
      if (!rank || *rank <= 0) fail_line(line.number, fmt::format("bad finish_rank '{}'", text));
      car.finish_rank = static_cast<int>(*rank);
    }
    if (const auto text = field(kClassified); !text.empty()) {
      const auto flag = parse_flag(text);
      if (!flag) fail_line(line.number, fmt::format("bad classified flag '{}'", text));
      car.classified = *flag;
    }
    if (const auto text = field(kLapsFraction); !text.empty()) {
      const auto fraction = csv::parse_real(text);
      if (!fraction || *fraction < 0.0 || *fraction > 1.0) {
        fail_line(line.number, fmt::format("laps_fraction must be in [0,1], got '{}'", text));
      }
      car.laps_fraction = *fraction;
    }
    if (!car.classified && !car.laps_fraction) {
      fail_line(line.number, "car has neither classified nor laps_fraction");
    }
    car = derive_classified(std::move(car), threshold);

    if (std::find(season.teams.begin(), season.teams.end(), car.team_id) == season.teams.end()) {
      if (explicit_teams) fail_line(line.number, fmt::format("team '{}' not in #teams directive", car.team_id));
      season.teams.push_back(car.team_id);
    }
    auto [it, inserted] = race_slot.try_emplace(race_id, season.races.size());
    if (inserted) {
      season.races.push_back(Race{race_id, static_cast<int>(*ordinal), {}});
      race_line[race_id] = line.number;
    } else if (season.races[it->second].ordinal != *ordinal) {
      fail_line(line.number, fmt::format("race '{}' has conflicting ordinals", race_id));
    }
    season.races[it->second].results.push_back(std::move(car));
  }
  if (!column_of) throw Error(ErrorKind::kMalformedInput, "missing header row");

  std::stable_sort(season.races.begin(), season.races.end(),
                   [](const Race& a, const Race& b) { return a.ordinal < b.ordinal; });
  validate_season(season);
  return season;
}

std::string serialize_season(const SeasonResults& season) {
  std::string out;
  if (!season.season_id.empty()) out += "#season," + csv::quote(season.season_id) + "\n";
  out += "#teams";
  for (const auto& team : season.teams) out += "," + csv::quote(team);
  out += "\n";
  out += csv::join({kColumns.begin(), kColumns.end()}) + "\n";
  for (const Race& race : season.races) {
    for (const CarResult& car : race.results) {
      out += csv::join({csv::quote(race.race_id), std::to_string(race.ordinal), csv::quote(car.team_id),
                        std::to_string(car.car_index),
                        car.finish_rank ? std::to_string(*car.finish_rank) : std::string{},
                        car.classified ? (*car.classified ? "true" : "false") : std::string{},
                        car.laps_fraction ? csv::format_real(*car.laps_fraction) : std::string{}});
      out += "\n";
    }
  }
  return out;
}

}  // namespace pcalloc
