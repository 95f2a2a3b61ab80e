#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pcalloc/ingest.hpp"

namespace pcalloc {

/// Multiplier key that resolves to the season's final race (highest ordinal).
inline constexpr std::string_view kLastRaceKey = "$last";

/// Points table indexed by finishing position (1-based) plus per-race multipliers.
struct PointsSystem {
  std::string name;
  std::vector<int> points;                ///< points[k] is awarded for position k + 1
  std::map<std::string, int> multipliers; ///< race_id (or kLastRaceKey) -> factor, default 1

  /// 0 for positions beyond the table.
  [[nodiscard]] int points_for(int position) const;
  [[nodiscard]] int multiplier_for(const Race& race, const SeasonResults& season) const;
  /// Non-negative, non-increasing points; positive multipliers.
  void validate() const;
};

/// The four historical tables (1961-1990, 1991-2002, 2003-2009, 2010-) and
/// "2014-official": 2010- with double points in the final race.
std::vector<PointsSystem> builtin_systems();

/// Looks up a builtin system by name; throws Error(kInvalidArgument).
PointsSystem builtin_system(std::string_view name);

/// {"name": ..., "points": [p1, ...], "multipliers": {"race_id": m}}.
PointsSystem parse_points_system(std::string_view json_text);

struct StandingsEntry {
  std::string team;
  std::int64_t points = 0;
  int rank = 0;
  bool tie = false;  ///< equal points and identical countback to a neighbour
};

struct Standings {
  std::vector<StandingsEntry> entries;  ///< best first; ranks 1..n

  [[nodiscard]] const StandingsEntry& entry(std::string_view team) const;
};

/// Sums points over classified cars, then orders by points and countback
/// (more wins, then more second places, ...). Residual ties keep team order.
Standings score_season(const SeasonResults& season, const PointsSystem& system);

/// team,points,rank,tie_flag
std::string write_standings_csv(const Standings& standings);
std::string write_standings_json(const Standings& standings, std::string_view system_name);

}  // namespace pcalloc
