#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcalloc/ingest.hpp"
#include "pcalloc/matrix.hpp"

namespace pcalloc {

/// Season-aggregated pairwise goals: g(i, j) counts car-level instances of a car
/// of team i finishing ahead of a car of team j.
struct GoalsMatrix {
  std::vector<std::string> teams;
  SquareMatrix<std::int64_t> g;
  /// Unknown when the matrix was loaded directly from a goals CSV.
  std::optional<std::int64_t> races_counted;

  [[nodiscard]] std::size_t size() const noexcept { return teams.size(); }
  [[nodiscard]] std::size_t team_index(std::string_view team_id) const;

  friend bool operator==(const GoalsMatrix&, const GoalsMatrix&) = default;
};

/// Goals scored in a single race, indexed by `teams`. A classified car beats an
/// unclassified one; two classified cars compare by rank; two unclassified cars
/// are incomparable.
SquareMatrix<std::int64_t> race_goals(const Race& race, std::span<const std::string> teams);

/// Entrywise sum of race_goals over all races, each race weighted 1.
GoalsMatrix goals_matrix(const SeasonResults& season);

/// Parses a square goals CSV: header row of team ids (first cell is a label),
/// one row per team, empty diagonal. An optional `#races_counted,N` line is honoured.
GoalsMatrix load_goals(std::string_view input);

/// Writes the CSV accepted by load_goals.
std::string write_goals(const GoalsMatrix& goals);

/// Checks the diagonal, non-negativity, and (when races_counted is known) the
/// four-pairs-per-race bound. Throws Error(kValidation).
void validate_goals(const GoalsMatrix& goals);

}  // namespace pcalloc
