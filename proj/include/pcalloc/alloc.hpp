#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcalloc/goals.hpp"
#include "pcalloc/metrics.hpp"
#include "pcalloc/weights.hpp"

namespace pcalloc {

/// Money split of a pot according to a weight vector.
struct AllocationReport {
  struct Line {
    std::string team;
    double share = 0.0;
    std::int64_t units = 0;  ///< amount expressed in rounding units
    double amount = 0.0;     ///< units * rounding_unit
  };

  double pot = 0.0;
  double rounding_unit = 1.0;
  std::int64_t total_units = 0;  ///< pot / rounding_unit; sum of Line::units
  Method method = Method::kRowGeometricMean;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::vector<Line> lines;
};

/// Hare/largest-remainder apportionment of `pot` in multiples of `rounding_unit`.
/// Leftover units go to the largest fractional remainders, ties to the earlier team.
AllocationReport allocate(const WeightVector& w, double pot, double rounding_unit = 1.0);

struct CurvePoint {
  double alpha = 0.0;
  double share = 0.0;
};

/// Share of `team` at alpha = lo, lo + step, ..., hi.
std::vector<CurvePoint> share_curve(const GoalsMatrix& goals, std::string_view team, const WeightingMethod& method,
                                    double alpha_lo, double alpha_hi, double step, double epsilon = 0.0);

struct IndifferenceResult {
  struct Root {
    double alpha = 0.0;
    double residual = 0.0;  ///< share(alpha) - target
  };

  std::string team;
  double target_share = 0.0;
  Method method = Method::kRowGeometricMean;
  std::vector<Root> roots;  ///< ascending
  bool no_solution = true;

  [[nodiscard]] std::optional<double> smallest_root() const;
};

/// Every alpha in [alpha_lo, alpha_hi] where the team's share equals `target_share`:
/// grid points within `tol` count directly, sign changes are bisected until
/// |share - target| < tol.
IndifferenceResult indifferent_alpha(const GoalsMatrix& goals, std::string_view team, double target_share,
                                     const WeightingMethod& method, double alpha_lo = 0.0, double alpha_hi = 3.0,
                                     double step = 0.02, double tol = 1e-9, double epsilon = 0.0);

struct SweepRecord {
  double alpha = 0.0;
  WeightVector weights;
  double hhi_star = 0.0;
  Ranking ranking;
};

struct MethodSweep {
  Method method = Method::kRowGeometricMean;
  std::vector<SweepRecord> records;
  CrossingReport crossings;
  /// Teams whose largest share on the grid sits strictly inside it.
  std::vector<std::string> interior_maxima;
};

struct SweepResult {
  std::vector<double> alpha_grid;
  double epsilon = 0.0;
  std::vector<MethodSweep> methods;

  [[nodiscard]] const MethodSweep& for_method(Method method) const;
};

/// Weights, HHI*, and rankings at every grid point for each method, plus the
/// crossing report over the positive part of the grid.
SweepResult sweep(const GoalsMatrix& goals, std::span<const WeightingMethod> methods,
                  std::span<const double> alpha_grid, double epsilon = 0.0, double refine_tol = 1e-6);

/// Header `alpha<TAB>team...<TAB>hhi_star`, one row per grid point.
std::string write_sweep_tsv(const MethodSweep& sweep, const std::vector<std::string>& teams, int decimals = -1);
std::string write_sweep_json(const SweepResult& result, int decimals = -1);
std::string write_allocation_json(const AllocationReport& report, int decimals = -1);
std::string write_allocation_csv(const AllocationReport& report, int decimals = -1);
std::string write_indifference_json(const IndifferenceResult& result, int decimals = -1);

}  // namespace pcalloc
