#include "pcalloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {

double hhi(const WeightVector& w) {
  return std::inner_product(w.w.begin(), w.w.end(), w.w.begin(), 0.0);
}

double hhi_star(std::span<const double> w) {
  const auto n = static_cast<double>(w.size());
  if (w.size() < 2) throw Error(ErrorKind::kInvalidArgument, "normalised HHI needs at least 2 shares");
  const double h = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  // Clamp rounding noise around the uniform vector.
  return std::max(0.0, (h - 1.0 / n) / (1.0 - 1.0 / n));
}

double hhi_star(const WeightVector& w) { return hhi_star(std::span<const double>(w.w)); }

std::size_t Ranking::position_of(std::size_t team) const {
  const auto it = std::find(order.begin(), order.end(), team);
  if (it == order.end()) throw Error(ErrorKind::kInvalidArgument, "team index not in ranking");
  return static_cast<std::size_t>(it - order.begin());
}

bool Ranking::has_ties() const {
  return std::any_of(tie_groups.begin(), tie_groups.end(), [](const auto& g) { return g.size() > 1; });
}

Ranking ranking_of(const WeightVector& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w.w[a] > w.w[b]; });

  Ranking r;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || w.w[order[k - 1]] - w.w[order[k]] > kTieTolerance) r.tie_groups.emplace_back();
    r.tie_groups.back().push_back(order[k]);
  }
  for (auto& group : r.tie_groups) {
    std::sort(group.begin(), group.end());
    r.order.insert(r.order.end(), group.begin(), group.end());
  }
  for (std::size_t idx : r.order) r.teams.push_back(w.teams[idx]);
  return r;
}

const Crossing* CrossingReport::find(const std::string& a, const std::string& b) const {
  for (const auto& c : crossings) {
    if ((c.overtaker == a && c.overtaken == b) || (c.overtaker == b && c.overtaken == a)) return &c;
  }
  return nullptr;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw Error(ErrorKind::kInvalidArgument, "grid step must be positive and bounds finite");
  }
  if (stop < start) throw Error(ErrorKind::kInvalidArgument, "grid stop precedes start");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) {
    grid.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return grid;
}

namespace {

int sign_of(double d) {
  if (d > kTieTolerance) return 1;
  if (d < -kTieTolerance) return -1;
  return 0;
}

}  // namespace

CrossingReport scale_invariance_scan(const GoalsMatrix& goals, const WeightingMethod& method,
                                     std::span<const double> alpha_grid, double refine_tol, double epsilon) {
  if (!(refine_tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "refine tolerance must be positive");
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    if (!(alpha_grid[k] > 0.0) || (k > 0 && !(alpha_grid[k] > alpha_grid[k - 1]))) {
      throw Error(ErrorKind::kInvalidArgument, "scan grid must be strictly increasing and positive");
    }
  }

  std::vector<WeightVector> weights;
  std::vector<Ranking> rankings;
  weights.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    weights.push_back(weights_for_goals(goals, alpha, method, epsilon));
    rankings.push_back(ranking_of(weights.back()));
  }

  CrossingReport report{method.tag, {}};
  const std::size_t n = goals.size();
  for (std::size_t k = 0; k + 1 < alpha_grid.size(); ++k) {
    std::vector<std::size_t> pos_lo(n), pos_hi(n);
    for (std::size_t p = 0; p < n; ++p) {
      pos_lo[rankings[k].order[p]] = p;
      pos_hi[rankings[k + 1].order[p]] = p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if ((pos_lo[i] < pos_lo[j]) == (pos_hi[i] < pos_hi[j])) continue;
        auto diff = [&](double alpha) {
          const auto w = weights_for_goals(goals, alpha, method, epsilon);
          return w.w[i] - w.w[j];
        };
        double lo = alpha_grid[k];
        double hi = alpha_grid[k + 1];
        const int s_lo = sign_of(weights[k].w[i] - weights[k].w[j]);
        const int s_hi = sign_of(weights[k + 1].w[i] - weights[k + 1].w[j]);
        if (s_lo == 0) {
          hi = lo;
        } else if (s_hi == 0) {
          lo = hi;
        } else {
          while (hi - lo > refine_tol) {
            const double mid = 0.5 * (lo + hi);
            const int s_mid = sign_of(diff(mid));
            if (s_mid == 0) {
              lo = hi = mid;
            } else if (s_mid == s_lo) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
        }
        const bool i_rises = pos_hi[i] < pos_hi[j];
        Crossing c{goals.teams[i_rises ? i : j], goals.teams[i_rises ? j : i], lo, hi};
        const bool duplicate = std::any_of(report.crossings.begin(), report.crossings.end(), [&](const Crossing& o) {
          return o.overtaker == c.overtaker && o.overtaken == c.overtaken && o.alpha_lo == c.alpha_lo &&
                 o.alpha_hi == c.alpha_hi;
        });
        if (!duplicate) report.crossings.push_back(std::move(c));
      }
    }
  }
  return report;
}

std::string write_crossings_json(const CrossingReport& report, int decimals) {
  nlohmann::json crossings = nlohmann::json::array();
  for (const auto& c : report.crossings) {
    crossings.push_back({{"overtaker", c.overtaker},
                         {"overtaken", c.overtaken},
                         {"alpha_interval",
                          {csv::round_display(c.alpha_lo, decimals), csv::round_display(c.alpha_hi, decimals)}}});
  }
  nlohmann::json doc = {{"method", method_name(report.method)},
                        {"scale_invariant", report.crossings.empty()},
                        {"crossings", crossings}};
  return doc.dump(2) + "\n";
}

}  // namespace pcalloc
