#include "pcalloc/weights.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"

namespace pcalloc {

std::string_view method_name(Method method) {
  return method == Method::kEigenvector ? "EM" : "RGM";
}

Method parse_method(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "em") return Method::kEigenvector;
  if (lower == "rgm") return Method::kRowGeometricMean;
  throw Error(ErrorKind::kInvalidArgument, fmt::format("unknown weighting method '{}' (expected em or rgm)", text));
}

void WeightingMethod::validate() const {
  if (!(tolerance > 0.0) || max_iterations <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "solver tolerance and iteration limit must be positive");
  }
}

double WeightVector::weight_of(std::string_view team) const {
  const auto it = std::find(teams.begin(), teams.end(), team);
  if (it == teams.end()) throw Error(ErrorKind::kValidation, fmt::format("unknown team '{}'", team));
  return w[static_cast<std::size_t>(it - teams.begin())];
}

namespace {

void multiply(const SquareMatrix<double>& a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row(i);
    y[i] = std::inner_product(row.begin(), row.end(), x.begin(), 0.0);
  }
}

double mean_rayleigh_ratio(const SquareMatrix<double>& a, std::span<const double> w) {
  std::vector<double> aw(w.size());
  multiply(a, w, aw);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += aw[i] / w[i];
  return total / static_cast<double>(w.size());
}

}  // namespace

WeightVector eigenvector_weights(const PairwiseComparisonMatrix& m, double tol, int max_iter) {
  WeightingMethod{Method::kEigenvector, tol, max_iter}.validate();
  const std::size_t n = m.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double change = 0.0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    multiply(m.a, w, next);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      change = std::max(change, std::abs(next[i] - w[i]) / next[i]);
    }
    w.swap(next);
    if (change < tol) break;
  }
  if (iter == max_iter) {
    throw Error(ErrorKind::kNonConvergence,
                fmt::format("power iteration did not converge after {} iterations (relative change {:.3e})", max_iter,
                            change));
  }
  // Final renormalization so the sum is 1 to the last bit available.
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  WeightVector out{m.teams, std::move(w), Method::kEigenvector, std::nullopt, m.alpha, m.epsilon};
  out.lambda_max = mean_rayleigh_ratio(m.a, out.w);
  return out;
}

WeightVector row_geometric_mean_weights(const PairwiseComparisonMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> log_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : m.a.row(i)) log_mean[i] += std::log(v);
    log_mean[i] /= static_cast<double>(n);
  }
  const double shift = *std::max_element(log_mean.begin(), log_mean.end());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(log_mean[i] - shift);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return WeightVector{m.teams, std::move(w), Method::kRowGeometricMean, std::nullopt, m.alpha, m.epsilon};
}

WeightVector compute_weights(const PairwiseComparisonMatrix& m, const WeightingMethod& method) {
  method.validate();
  if (method.tag == Method::kEigenvector) return eigenvector_weights(m, method.tolerance, method.max_iterations);
  return row_geometric_mean_weights(m);
}

WeightVector weights_for_goals(const GoalsMatrix& goals, double alpha, const WeightingMethod& method,
                               double epsilon) {
  if (alpha == 0.0) {
    auto w = uniform_weights(goals.teams, method.tag);
    w.epsilon = epsilon;
    return w;
  }
  return compute_weights(build_pcm(goals, alpha, epsilon), method);
}

WeightVector uniform_weights(std::span<const std::string> teams, Method method) {
  const std::size_t n = teams.size();
  WeightVector out{{teams.begin(), teams.end()}, std::vector<double>(n, 1.0 / static_cast<double>(n)), method,
                   std::nullopt, 0.0, 0.0};
  if (method == Method::kEigenvector) out.lambda_max = static_cast<double>(n);
  return out;
}

double llsm_objective(const PairwiseComparisonMatrix& m, std::span<const double> w) {
  const std::size_t n = m.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = std::log(m.a(i, j)) - (std::log(w[i]) - std::log(w[j]));
      total += r * r;
    }
  }
  return total;
}

double eigen_residual(const PairwiseComparisonMatrix& m, std::span<const double> w, double lambda) {
  std::vector<double> aw(w.size());
  multiply(m.a, w, aw);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(aw[i] - lambda * w[i]));
  return worst / *std::max_element(w.begin(), w.end());
}


std::string write_weights_json(const WeightVector& w, int decimals) {
  nlohmann::json weights = nlohmann::json::array();
  for (double x : w.w) weights.push_back(csv::round_display(x, decimals));
  nlohmann::json doc = {{"method", method_name(w.method)},
                        {"alpha", w.alpha},
                        {"epsilon", w.epsilon},
                        {"teams", w.teams},
                        {"weights", weights}};
  if (w.lambda_max) doc["lambda_max"] = csv::round_display(*w.lambda_max, decimals);
  return doc.dump(2) + "\n";
}

std::string write_weights_csv(const WeightVector& w, int decimals) {
  std::string out = "team,weight\n";
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += csv::quote(w.teams[i]) + "," +
           (decimals >= 0 ? csv::format_fixed(w.w[i], decimals) : csv::format_real(w.w[i])) + "\n";
  }
  return out;
}

}  // namespace pcalloc
