#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcalloc {

/// Fraction of race distance a car must strictly exceed to count as classified.
inline constexpr double kClassificationThreshold = 0.9;

/// One car's outcome in one race.
struct CarResult {
  std::string team_id;
  int car_index = 1;                   ///< 1 or 2
  std::optional<int> finish_rank;      ///< overall position, absent when the car has none
  std::optional<bool> classified;      ///< always set once a season has been validated
  std::optional<double> laps_fraction; ///< share of race distance completed, in [0, 1]

  friend bool operator==(const CarResult&, const CarResult&) = default;
};

struct Race {
  std::string race_id;
  int ordinal = 0;
  std::vector<CarResult> results;

  friend bool operator==(const Race&, const Race&) = default;
};

/// Canonical race-by-race season model. Teams are ordered; indices into `teams`
/// are used as row/column indices by every downstream matrix.
struct SeasonResults {
  std::string season_id;
  std::vector<std::string> teams;
  std::vector<Race> races;

  /// Index of `team_id` in `teams`; throws Error(kValidation) when absent.
  [[nodiscard]] std::size_t team_index(std::string_view team_id) const;

  friend bool operator==(const SeasonResults&, const SeasonResults&) = default;
};

/// Fills in `classified` from `laps_fraction` (strictly greater than `threshold`).
/// An explicit flag is never overridden. Throws when both are missing.
CarResult derive_classified(CarResult result, double threshold = kClassificationThreshold);

/// Parses the season CSV format:
///
///   #season,2014                      (optional)
///   #teams,Mercedes,Red Bull,...      (optional explicit team order)
///   race_id,ordinal,team_id,car_index,finish_rank,classified,laps_fraction
///   AUS,1,Mercedes,1,1,true,
///
/// Without a `#teams` directive, team order is first-appearance order.
/// Races are returned sorted by ordinal. Errors name the offending line or race.
SeasonResults parse_season(std::string_view input, double threshold = kClassificationThreshold);

/// Writes `season` in the format accepted by parse_season (always with the
/// `#teams` directive so the round trip preserves team order).
std::string serialize_season(const SeasonResults& season);

/// Checks every SeasonResults invariant; throws Error(kValidation) on the first violation.
void validate_season(const SeasonResults& season);

}  // namespace pcalloc
