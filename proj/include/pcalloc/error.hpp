#pragma once

#include <stdexcept>
#include <string>

namespace pcalloc {

/// Classifies failures so callers (notably the CLI) can map them to exit codes.
enum class ErrorKind {
  kMalformedInput,   ///< syntactically broken file or row
  kValidation,       ///< well-formed input that violates a model invariant
  kDivisionByZero,   ///< zero goals with epsilon = 0
  kNonConvergence,   ///< iterative solver gave up
  kInvalidArgument,  ///< bad parameter passed by the caller
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a ratio g_ij / g_ji would divide by zero. Carries the offending pair.
class DivisionByZeroError : public Error {
 public:
  DivisionByZeroError(std::string row_team, std::string col_team)
      : Error(ErrorKind::kDivisionByZero,
              "division by zero: goals of '" + col_team + "' against '" + row_team +
                  "' are zero; set epsilon > 0 to smooth the goals matrix"),
        row_team_(std::move(row_team)),
        col_team_(std::move(col_team)) {}

  /// For a bare ratio evaluation where no team names are known.
  explicit DivisionByZeroError(const std::string& detail)
      : Error(ErrorKind::kDivisionByZero, "division by zero: " + detail + "; set epsilon > 0") {}

  [[nodiscard]] const std::string& row_team() const noexcept { return row_team_; }
  [[nodiscard]] const std::string& col_team() const noexcept { return col_team_; }

 private:
  std::string row_team_;
  std::string col_team_;
};

}  // namespace pcalloc
