#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcalloc/pcm.hpp"

namespace pcalloc {

enum class Method { kEigenvector, kRowGeometricMean };

/// "EM" or "RGM".
std::string_view method_name(Method method);
/// Accepts em / rgm (any case); throws Error(kInvalidArgument) otherwise.
Method parse_method(std::string_view text);

/// A weighting method plus the solver settings used by the eigenvector route.
struct WeightingMethod {
  Method tag = Method::kRowGeometricMean;
  double tolerance = 1e-12;
  int max_iterations = 10'000;

  void validate() const;
};

/// Positive priority vector summing to one.
struct WeightVector {
  std::vector<std::string> teams;
  std::vector<double> w;
  Method method = Method::kRowGeometricMean;
  std::optional<double> lambda_max;  ///< eigenvector method only
  double alpha = 1.0;                ///< provenance of the source matrix
  double epsilon = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return w.size(); }
  [[nodiscard]] double weight_of(std::string_view team) const;
};

/// Perron vector by power iteration from the uniform vector, normalized to sum 1.
/// Converged when the largest relative component change drops below `tol`.
/// lambda_max is the component average of (A w)_i / w_i.
WeightVector eigenvector_weights(const PairwiseComparisonMatrix& m, double tol = 1e-12, int max_iter = 10'000);

/// Row geometric means, normalized with a max-shifted softmax over log-means.
WeightVector row_geometric_mean_weights(const PairwiseComparisonMatrix& m);

/// Dispatches on `method.tag`.
WeightVector compute_weights(const PairwiseComparisonMatrix& m, const WeightingMethod& method);

/// build_pcm followed by compute_weights. alpha == 0 short-circuits to uniform
/// shares, so zero goals are tolerated there.
WeightVector weights_for_goals(const GoalsMatrix& goals, double alpha, const WeightingMethod& method,
                               double epsilon = 0.0);

/// Uniform 1/n vector (what every method yields on the all-ones matrix).
WeightVector uniform_weights(std::span<const std::string> teams, Method method);

/// Sum over i, j of (ln a_ij - ln(w_i / w_j))^2.
double llsm_objective(const PairwiseComparisonMatrix& m, std::span<const double> w);

/// ||A w - lambda w||_inf / ||w||_inf.
double eigen_residual(const PairwiseComparisonMatrix& m, std::span<const double> w, double lambda);

/// {"method", "alpha", "epsilon", "teams", "weights", "lambda_max"?}.
std::string write_weights_json(const WeightVector& w, int decimals = -1);
/// team,weight rows.
std::string write_weights_csv(const WeightVector& w, int decimals = -1);

}  // namespace pcalloc
