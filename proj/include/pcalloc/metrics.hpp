#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcalloc/goals.hpp"
#include "pcalloc/weights.hpp"

namespace pcalloc {

/// Weights closer than this are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Sum of squared shares.
double hhi(const WeightVector& w);

/// (HHI - 1/n) / (1 - 1/n): 0 for equal shares, 1 for a single recipient.
double hhi_star(const WeightVector& w);
double hhi_star(std::span<const double> w);

/// Teams ordered best to worst. Teams whose weights differ by at most
/// kTieTolerance share a tie group and are listed in input order.
struct Ranking {
  std::vector<std::size_t> order;               ///< team indices, best first
  std::vector<std::string> teams;               ///< names in the same order
  std::vector<std::vector<std::size_t>> tie_groups;  ///< contiguous runs of `order`, as team indices

  /// 0-based position of team index `team` in `order`.
  [[nodiscard]] std::size_t position_of(std::size_t team) const;
  [[nodiscard]] bool has_ties() const;
};

Ranking ranking_of(const WeightVector& w);

/// One rank reversal between two adjacent grid points, refined by bisection.
struct Crossing {
  std::string overtaker;  ///< ranked below at alpha_lo, above at alpha_hi
  std::string overtaken;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;

  [[nodiscard]] bool contains(double alpha) const { return alpha_lo <= alpha && alpha <= alpha_hi; }
  /// Whether [alpha_lo, alpha_hi] intersects [lo, hi].
  [[nodiscard]] bool overlaps(double lo, double hi) const { return alpha_lo <= hi && lo <= alpha_hi; }
};

struct CrossingReport {
  Method method = Method::kRowGeometricMean;
  std::vector<Crossing> crossings;

  /// First crossing between the two teams, in either direction, or nullptr.
  [[nodiscard]] const Crossing* find(const std::string& a, const std::string& b) const;
};

/// `start, start + step, ..., stop` with points rounded to 12 decimals so the
/// grid does not accumulate floating-point drift. Throws on a non-positive step.
std::vector<double> make_grid(double start, double stop, double step);

/// Ranks teams at every grid point and bisects every pairwise rank flip between
/// adjacent points on the pair's weight difference, down to width <= refine_tol.
/// An empty report means the method ranked consistently across the grid.
CrossingReport scale_invariance_scan(const GoalsMatrix& goals, const WeightingMethod& method,
                                     std::span<const double> alpha_grid, double refine_tol = 1e-6,
                                     double epsilon = 0.0);

std::string write_crossings_json(const CrossingReport& report, int decimals = -1);

}  // namespace pcalloc
