#include "pcalloc/pcm.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {
namespace {

void check_exponent(double alpha, const char* name) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("{} must be a finite non-negative real, got {}", name, alpha));
  }
}

}  // namespace

double ratio(std::int64_t g_ij, std::int64_t g_ji, double alpha, double epsilon) {
  check_exponent(alpha, "alpha");
  check_exponent(epsilon, "epsilon");
  const double num = static_cast<double>(g_ij) + epsilon;
  const double den = static_cast<double>(g_ji) + epsilon;
  if (num <= 0.0 || den <= 0.0) {
    throw DivisionByZeroError(fmt::format("ratio ({} + {}) / ({} + {})", g_ij, epsilon, g_ji, epsilon));
  }
  if (g_ij == g_ji || alpha == 0.0) return 1.0;
  const double direct = std::pow(num / den, alpha);
  if (std::isfinite(direct) && direct > 0.0) return direct;
  return std::exp(alpha * (std::log(num) - std::log(den)));
}

PairwiseComparisonMatrix build_pcm(const GoalsMatrix& goals, double alpha, double epsilon) {
  check_exponent(alpha, "alpha");
  check_exponent(epsilon, "epsilon");
  const std::size_t n = goals.size();
  PairwiseComparisonMatrix m{goals.teams, SquareMatrix<double>(n, 1.0), alpha, epsilon};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (static_cast<double>(goals.g(i, j)) + epsilon <= 0.0 ||
          static_cast<double>(goals.g(j, i)) + epsilon <= 0.0) {
        // Name the pair in the direction of the zero count.
        if (static_cast<double>(goals.g(j, i)) + epsilon <= 0.0)
          throw DivisionByZeroError(goals.teams[i], goals.teams[j]);
        throw DivisionByZeroError(goals.teams[j], goals.teams[i]);
      }
      const double v = ratio(goals.g(i, j), goals.g(j, i), alpha, epsilon);
      m.a(i, j) = v;
      m.a(j, i) = 1.0 / v;
    }
  }
  return m;
}

PairwiseComparisonMatrix power_transform(const PairwiseComparisonMatrix& m, double exponent) {
  check_exponent(exponent, "exponent");
  const std::size_t n = m.size();
  PairwiseComparisonMatrix out{m.teams, SquareMatrix<double>(n, 1.0), m.alpha * exponent, m.epsilon};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::exp(exponent * std::log(m.a(i, j)));
      out.a(i, j) = v;
      out.a(j, i) = 1.0 / v;
    }
  }
  return out;
}

void validate_pcm(const PairwiseComparisonMatrix& m, double rel_tol) {
  const std::size_t n = m.size();
  if (m.a.size() != n) throw Error(ErrorKind::kValidation, "matrix size does not match team list");
  for (std::size_t i = 0; i < n; ++i) {
    if (m.a(i, i) != 1.0) throw Error(ErrorKind::kValidation, fmt::format("diagonal of '{}' is not 1", m.teams[i]));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m.a(i, j);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("entry ('{}', '{}') is not a positive finite real", m.teams[i], m.teams[j]));
      }
      if (std::abs(v * m.a(j, i) - 1.0) > rel_tol) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("reciprocity violated for ('{}', '{}')", m.teams[i], m.teams[j]));
      }
    }
  }
}

std::string write_pcm_csv(const PairwiseComparisonMatrix& m, int decimals) {
  std::string out = "team";
  for (const auto& team : m.teams) out += "," + csv::quote(team);
  out += "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += csv::quote(m.teams[i]);
    for (std::size_t j = 0; j < m.size(); ++j) {
      out += ",";
      out += decimals >= 0 ? csv::format_fixed(m.a(i, j), decimals) : csv::format_real(m.a(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string write_pcm_json(const PairwiseComparisonMatrix& m, int decimals) {
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : m.a.row(i)) row.push_back(csv::round_display(v, decimals));
    values.push_back(std::move(row));
  }
  nlohmann::json doc = {{"teams", m.teams}, {"values", values}, {"alpha", m.alpha}, {"epsilon", m.epsilon}};
  return doc.dump(2) + "\n";
}

PairwiseComparisonMatrix load_pcm_csv(std::string_view input, double alpha, double epsilon) {
  const auto lines = csv::split_lines(input);
  if (lines.empty()) throw Error(ErrorKind::kMalformedInput, "empty matrix file");
  const auto header = csv::split_fields(lines.front());
  PairwiseComparisonMatrix m;
  m.teams.assign(header.begin() + 1, header.end());
  m.alpha = alpha;
  m.epsilon = epsilon;
  const std::size_t n = m.teams.size();
  if (lines.size() != n + 1) {
    throw Error(ErrorKind::kMalformedInput,
                fmt::format("non-square matrix: {} columns but {} rows", n, lines.size() - 1));
  }
  m.a = SquareMatrix<double>(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& line = lines[i + 1];
    const auto row = csv::split_fields(line);
    if (row.size() != n + 1 || row[0] != m.teams[i]) {
      throw Error(ErrorKind::kMalformedInput, fmt::format("line {}: malformed matrix row", line.number));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = csv::parse_real(row[j + 1]);
      if (!v) throw Error(ErrorKind::kMalformedInput, fmt::format("line {}: bad cell '{}'", line.number, row[j + 1]));
      m.a(i, j) = *v;
    }
  }
  validate_pcm(m);
  return m;
}

}  // namespace pcalloc
