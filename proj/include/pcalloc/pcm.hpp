#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pcalloc/goals.hpp"
#include "pcalloc/matrix.hpp"

namespace pcalloc {

/// Positive reciprocal matrix a(i, j) = ((g_ij + eps) / (g_ji + eps))^alpha.
struct PairwiseComparisonMatrix {
  std::vector<std::string> teams;
  SquareMatrix<double> a;
  double alpha = 1.0;
  double epsilon = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return teams.size(); }
};

/// ((g_ij + epsilon) / (g_ji + epsilon))^alpha, falling back to the log domain on overflow.
/// Throws DivisionByZeroError when either shifted count is zero.
double ratio(std::int64_t g_ij, std::int64_t g_ji, double alpha, double epsilon = 0.0);

/// Builds the comparison matrix. The lower triangle holds exact reciprocals of
/// the upper triangle, so a(j, i) * a(i, j) == 1 up to one rounding.
PairwiseComparisonMatrix build_pcm(const GoalsMatrix& goals, double alpha, double epsilon = 0.0);

/// Entrywise power a(i, j)^exponent; the result's alpha is m.alpha * exponent.
PairwiseComparisonMatrix power_transform(const PairwiseComparisonMatrix& m, double exponent);

/// Positivity, unit diagonal, and reciprocity within `rel_tol`. Throws Error(kValidation).
void validate_pcm(const PairwiseComparisonMatrix& m, double rel_tol = 1e-12);

/// Square CSV with full-precision cells (diagonal written as 1). `decimals`
/// >= 0 switches to fixed-point display rounding.
std::string write_pcm_csv(const PairwiseComparisonMatrix& m, int decimals = -1);

/// JSON: {"teams": [...], "values": [[row], ...], "alpha": a, "epsilon": e}.
std::string write_pcm_json(const PairwiseComparisonMatrix& m, int decimals = -1);

/// Reads the CSV written by write_pcm_csv and validates it with a 1e-12 reciprocity tolerance.
PairwiseComparisonMatrix load_pcm_csv(std::string_view input, double alpha = 1.0, double epsilon = 0.0);

}  // namespace pcalloc
