#include "pcalloc/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {

AllocationReport allocate(const WeightVector& w, double pot, double rounding_unit) {
  if (!(pot > 0.0) || !std::isfinite(pot)) throw Error(ErrorKind::kInvalidArgument, "pot must be positive");
  if (!(rounding_unit > 0.0) || !std::isfinite(rounding_unit)) {
    throw Error(ErrorKind::kInvalidArgument, "rounding unit must be positive");
  }
  const double units_exact = pot / rounding_unit;
  const double units_rounded = std::round(units_exact);
  if (std::abs(units_exact - units_rounded) > 1e-9 * std::max(1.0, units_exact) || units_rounded < 1.0 ||
      units_rounded > 9e15) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("pot {} is not a positive multiple of the rounding unit {}", pot, rounding_unit));
  }
  const auto total = static_cast<std::int64_t>(units_rounded);
  const std::size_t n = w.size();
  const long double weight_sum = std::accumulate(w.w.begin(), w.w.end(), 0.0L);

  std::vector<std::int64_t> units(n);
  std::vector<long double> remainder(n);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double quota = static_cast<long double>(w.w[i]) / weight_sum * static_cast<long double>(total);
    long double whole = std::floor(quota);
    // A quota that is an integer up to rounding noise (e.g. 0.1 * 350) is exact.
    if (quota - whole > 1.0L - 1e-9L) whole += 1.0L;
    units[i] = static_cast<std::int64_t>(whole);
    remainder[i] = std::max(0.0L, quota - whole);
    assigned += units[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  std::int64_t left = total - assigned;
  for (std::size_t k = 0; left > 0; k = (k + 1) % n, --left) ++units[order[k]];
  // Snapping can overshoot by a unit; take it back from the smallest remainders.
  for (std::size_t k = n; left < 0;) {
    k = (k == 0 ? n : k) - 1;
    if (units[order[k]] > 0) {
      --units[order[k]];
      ++left;
    }
  }

  AllocationReport report{pot, rounding_unit, total, w.method, w.alpha, w.epsilon, {}};
  for (std::size_t i = 0; i < n; ++i) {
    report.lines.push_back({w.teams[i], w.w[i], units[i], static_cast<double>(units[i]) * rounding_unit});
  }
  return report;
}

std::vector<CurvePoint> share_curve(const GoalsMatrix& goals, std::string_view team, const WeightingMethod& method,
                                    double alpha_lo, double alpha_hi, double step, double epsilon) {
  if (alpha_lo < 0.0) throw Error(ErrorKind::kInvalidArgument, "alpha range must be non-negative");
  const std::size_t t = goals.team_index(team);
  std::vector<CurvePoint> curve;
  for (double alpha : make_grid(alpha_lo, alpha_hi, step)) {
    curve.push_back({alpha, weights_for_goals(goals, alpha, method, epsilon).w[t]});
  }
  return curve;
}

std::optional<double> IndifferenceResult::smallest_root() const {
  if (roots.empty()) return std::nullopt;
  return roots.front().alpha;
}

IndifferenceResult indifferent_alpha(const GoalsMatrix& goals, std::string_view team, double target_share,
                                     const WeightingMethod& method, double alpha_lo, double alpha_hi, double step,
                                     double tol, double epsilon) {
  if (!(target_share > 0.0 && target_share < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("target share must lie in (0, 1), got {}", target_share));
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  const std::size_t t = goals.team_index(team);
  auto excess = [&](double alpha) { return weights_for_goals(goals, alpha, method, epsilon).w[t] - target_share; };

  const auto curve = share_curve(goals, team, method, alpha_lo, alpha_hi, step, epsilon);
  IndifferenceResult result{std::string(team), target_share, method.tag, {}, true};
  std::vector<double> f(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) f[k] = curve[k].share - target_share;

  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (std::abs(f[k]) < tol) {
      result.roots.push_back({curve[k].alpha, f[k]});
      continue;
    }
    if (k + 1 == curve.size() || std::abs(f[k + 1]) < tol || (f[k] > 0) == (f[k + 1] > 0)) continue;
    double lo = curve[k].alpha, hi = curve[k + 1].alpha;
    double f_lo = f[k];
    double best = lo, f_best = f[k];
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f_mid = excess(mid);
      if (std::abs(f_mid) < std::abs(f_best)) {
        best = mid;
        f_best = f_mid;
      }
      if (std::abs(f_mid) < tol) break;
      if ((f_mid > 0) == (f_lo > 0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    result.roots.push_back({best, f_best});
  }
  result.no_solution = result.roots.empty();
  return result;
}

const MethodSweep& SweepResult::for_method(Method method) const {
  for (const auto& m : methods) {
    if (m.method == method) return m;
  }
  throw Error(ErrorKind::kInvalidArgument, fmt::format("sweep has no {} results", method_name(method)));
}

SweepResult sweep(const GoalsMatrix& goals, std::span<const WeightingMethod> methods,
                  std::span<const double> alpha_grid, double epsilon, double refine_tol) {
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    if (alpha_grid[k] < 0.0 || (k > 0 && !(alpha_grid[k] > alpha_grid[k - 1]))) {
      throw Error(ErrorKind::kInvalidArgument, "sweep grid must be strictly increasing and non-negative");
    }
  }
  SweepResult result{{alpha_grid.begin(), alpha_grid.end()}, epsilon, {}};
  std::vector<double> positive;
  std::copy_if(alpha_grid.begin(), alpha_grid.end(), std::back_inserter(positive), [](double a) { return a > 0.0; });

  for (const WeightingMethod& method : methods) {
    MethodSweep ms;
    ms.method = method.tag;
    ms.records.resize(alpha_grid.size());
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(alpha_grid.size(), 1));
    std::vector<std::future<void>> jobs;
    for (std::size_t id = 0; id < workers; ++id) {
      // strided slices; each record lands in its own slot so the merge order is fixed
      jobs.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, [&, id] {
        for (std::size_t k = id; k < alpha_grid.size(); k += workers) {
          auto w = weights_for_goals(goals, alpha_grid[k], method, epsilon);
          const double h = hhi_star(w);
          auto r = ranking_of(w);
          ms.records[k] = {alpha_grid[k], std::move(w), h, std::move(r)};
        }
      }));
    }
    for (auto& job : jobs) job.get();
    ms.crossings = scale_invariance_scan(goals, method, positive, refine_tol, epsilon);
    ms.crossings.method = method.tag;
    if (ms.records.size() >= 3) {
      for (std::size_t t = 0; t < goals.size(); ++t) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < ms.records.size(); ++k) {
          if (ms.records[k].weights.w[t] > ms.records[best].weights.w[t]) best = k;
        }
        if (best != 0 && best + 1 != ms.records.size()) ms.interior_maxima.push_back(goals.teams[t]);
      }
    }
    result.methods.push_back(std::move(ms));
  }
  return result;
}

namespace {

std::string cell(double value, int decimals) {
  return decimals >= 0 ? csv::format_fixed(value, decimals) : csv::format_real(value);
}

}  // namespace

std::string write_sweep_tsv(const MethodSweep& sweep, const std::vector<std::string>& teams, int decimals) {
  std::string out = "alpha";
  for (const auto& team : teams) out += "\t" + team;
  out += "\thhi_star\n";
  for (const auto& rec : sweep.records) {
    out += csv::format_real(rec.alpha);
    for (double x : rec.weights.w) out += "\t" + cell(x, decimals);
    out += "\t" + cell(rec.hhi_star, decimals) + "\n";
  }
  return out;
}

std::string write_sweep_json(const SweepResult& result, int decimals) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& ms : result.methods) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : ms.records) {
      nlohmann::json weights = nlohmann::json::array();
      for (double x : rec.weights.w) weights.push_back(csv::round_display(x, decimals));
      records.push_back({{"alpha", rec.alpha},
                         {"weights", weights},
                         {"hhi_star", csv::round_display(rec.hhi_star, decimals)},
                         {"ranking", rec.ranking.teams}});
    }
    methods.push_back({{"method", method_name(ms.method)},
                       {"records", records},
                       {"crossings", nlohmann::json::parse(write_crossings_json(ms.crossings, decimals))},
                       {"interior_maxima", ms.interior_maxima}});
  }
  nlohmann::json teams = result.methods.empty() || result.methods.front().records.empty()
                             ? nlohmann::json::array()
                             : nlohmann::json(result.methods.front().records.front().weights.teams);
  return nlohmann::json{{"epsilon", result.epsilon}, {"teams", teams}, {"methods", methods}}.dump(2) + "\n";
}

std::string write_allocation_json(const AllocationReport& report, int decimals) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& line : report.lines) {
    lines.push_back({{"team", line.team},
                     {"share", csv::round_display(line.share, decimals)},
                     {"amount", line.amount},
                     {"units", line.units}});
  }
  return nlohmann::json{{"method", method_name(report.method)},
                        {"alpha", report.alpha},
                        {"epsilon", report.epsilon},
                        {"pot", report.pot},
                        {"unit", report.rounding_unit},
                        {"allocation", lines}}
             .dump(2) +
         "\n";
}

std::string write_allocation_csv(const AllocationReport& report, int decimals) {
  std::string out = "team,share,amount\n";
  for (const auto& line : report.lines) {
    out += csv::quote(line.team) + "," + cell(line.share, decimals) + "," + csv::format_real(line.amount) + "\n";
  }
  return out;
}

std::string write_indifference_json(const IndifferenceResult& result, int decimals) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& root : result.roots) {
    roots.push_back({{"alpha", csv::round_display(root.alpha, decimals)}, {"residual", root.residual}});
  }
  nlohmann::json doc = {{"team", result.team},
                        {"method", method_name(result.method)},
                        {"target_share", result.target_share},
                        {"roots", roots},
                        {"no_solution", result.no_solution}};
  if (const auto smallest = result.smallest_root()) {
    doc["smallest_root"] = csv::round_display(*smallest, decimals);
  } else {
    doc["smallest_root"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace pcalloc
