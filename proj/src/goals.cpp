#include "pcalloc/goals.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {
namespace {

// Whether car `a` finished ahead of car `b` under the comparability rules.
bool ahead_of(const CarResult& a, const CarResult& b) {
  const bool a_fin = a.classified.value_or(false);
  const bool b_fin = b.classified.value_or(false);
  if (a_fin && b_fin) return *a.finish_rank < *b.finish_rank;
  return a_fin && !b_fin;
}

}  // namespace

std::size_t GoalsMatrix::team_index(std::string_view team_id) const {
  const auto it = std::find(teams.begin(), teams.end(), team_id);
  if (it == teams.end()) throw Error(ErrorKind::kValidation, fmt::format("unknown team '{}'", team_id));
  return static_cast<std::size_t>(it - teams.begin());
}

SquareMatrix<std::int64_t> race_goals(const Race& race, std::span<const std::string> teams) {
  SquareMatrix<std::int64_t> g(teams.size(), 0);
  std::vector<std::size_t> index(race.results.size());
  for (std::size_t k = 0; k < race.results.size(); ++k) {
    const auto it = std::find(teams.begin(), teams.end(), race.results[k].team_id);
    if (it == teams.end()) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("race '{}': unknown team '{}'", race.race_id, race.results[k].team_id));
    }
    index[k] = static_cast<std::size_t>(it - teams.begin());
  }
  for (std::size_t a = 0; a < race.results.size(); ++a) {
    for (std::size_t b = 0; b < race.results.size(); ++b) {
      if (index[a] == index[b]) continue;
      if (ahead_of(race.results[a], race.results[b])) ++g(index[a], index[b]);
    }
  }
  return g;
}

GoalsMatrix goals_matrix(const SeasonResults& season) {
  GoalsMatrix out{season.teams, SquareMatrix<std::int64_t>(season.teams.size(), 0),
                  static_cast<std::int64_t>(season.races.size())};
  const std::size_t n = season.teams.size();
  for (const Race& race : season.races) {
    const auto rg = race_goals(race, season.teams);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.g(i, j) += rg(i, j);
  }
  return out;
}

void validate_goals(const GoalsMatrix& goals) {
  const std::size_t n = goals.size();
  if (goals.g.size() != n) throw Error(ErrorKind::kValidation, "goals matrix size does not match team list");
  if (n < 2) throw Error(ErrorKind::kValidation, "goals matrix needs at least 2 teams");
  for (std::size_t i = 0; i < n; ++i) {
    if (goals.g(i, i) != 0) {
      throw Error(ErrorKind::kValidation, fmt::format("nonzero diagonal for '{}'", goals.teams[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (goals.g(i, j) < 0) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("negative goals for ('{}', '{}')", goals.teams[i], goals.teams[j]));
      }
      if (goals.races_counted && i != j && goals.g(i, j) + goals.g(j, i) > 4 * *goals.races_counted) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("goals between '{}' and '{}' exceed 4 x {} races", goals.teams[i], goals.teams[j],
                                *goals.races_counted));
      }
    }
  }
}

GoalsMatrix load_goals(std::string_view input) {
  const auto lines = csv::split_lines(input);
  GoalsMatrix goals;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_line;
  std::size_t header_line = 0;
  bool have_header = false;
  for (const csv::Line& line : lines) {
    if (line.text.front() == '#') {
      const auto fields = csv::split_fields(csv::Line{line.number, line.text.substr(1)});
      if (fields.size() == 2 && fields[0] == "races_counted") {
        const auto races = csv::parse_integer(fields[1]);
        if (!races || *races < 0) {
          throw Error(ErrorKind::kMalformedInput, fmt::format("line {}: bad races_counted", line.number));
        }
        goals.races_counted = *races;
      }
      continue;
    }
    auto fields = csv::split_fields(line);
    if (!have_header) {
      goals.teams.assign(fields.begin() + 1, fields.end());
      header_line = line.number;
      have_header = true;
    } else {
      rows.push_back(std::move(fields));
      row_line.push_back(line.number);
    }
  }
  if (!have_header) throw Error(ErrorKind::kMalformedInput, "empty goals file");
  const std::size_t n = goals.teams.size();
  if (rows.size() != n) {
    throw Error(ErrorKind::kMalformedInput,
                fmt::format("non-square goals matrix: {} columns but {} rows (header at line {})", n, rows.size(),
                            header_line));
  }
  goals.g = SquareMatrix<std::int64_t>(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (row.size() != n + 1) {
      throw Error(ErrorKind::kMalformedInput,
                  fmt::format("line {}: non-square goals matrix, expected {} cells, got {}", row_line[i], n,
                              row.size() - 1));
    }
    if (row[0] != goals.teams[i]) {
      throw Error(ErrorKind::kMalformedInput, fmt::format("line {}: row label '{}' does not match column '{}'",
                                                          row_line[i], row[0], goals.teams[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& cell = row[j + 1];
      if (i == j) {
        if (!cell.empty()) {
          throw Error(ErrorKind::kMalformedInput,
                      fmt::format("line {}: nonempty diagonal cell for '{}'", row_line[i], goals.teams[i]));
        }
        continue;
      }
      const auto value = csv::parse_integer(cell);
      if (!value || *value < 0) {
        throw Error(ErrorKind::kMalformedInput,
                    fmt::format("line {}: goals ('{}', '{}') must be a non-negative integer, got '{}'", row_line[i],
                                goals.teams[i], goals.teams[j], cell));
      }
      goals.g(i, j) = *value;
    }
  }
  validate_goals(goals);
  return goals;
}

std::string write_goals(const GoalsMatrix& goals) {
  std::string out;
  if (goals.races_counted) out += fmt::format("#races_counted,{}\n", *goals.races_counted);
  out += "team";
  for (const auto& team : goals.teams) out += "," + csv::quote(team);
  out += "\n";
  for (std::size_t i = 0; i < goals.size(); ++i) {
    out += csv::quote(goals.teams[i]);
    for (std::size_t j = 0; j < goals.size(); ++j) {
      out += ",";
      if (i != j) out += std::to_string(goals.g(i, j));
    }
    out += "\n";
  }
  return out;
}

}  // namespace pcalloc
