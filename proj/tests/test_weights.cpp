#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "pcalloc/error.hpp"
#include "pcalloc/metrics.hpp"
#include "pcalloc/weights.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/reference_curves_2014.hpp"

using namespace pcalloc;

namespace {

const WeightingMethod kEm{Method::kEigenvector};
const WeightingMethod kRgm{Method::kRowGeometricMean};

double sum(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

template <std::size_t N>
void check_curve(const testing::CurveSample (&curve)[N], const char* team, const WeightingMethod& method) {
  const auto& goals = testing::goals_2014();
  for (const auto& sample : curve) {
    const auto w = weights_for_goals(goals, sample.alpha, method);
    INFO(team, " alpha=", sample.alpha);
    CHECK(std::abs(w.weight_of(team) - sample.value) < 1e-9);
  }
}

}  // namespace

TEST_CASE("all-ones matrix yields uniform weights for both methods") {
  const auto m = testing::as_pcm(SquareMatrix<double>(11, 1.0));
  for (const auto& w : {eigenvector_weights(m), row_geometric_mean_weights(m)}) {
    for (double x : w.w) CHECK(x == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
  }
  CHECK(*eigenvector_weights(m).lambda_max == doctest::Approx(11.0).epsilon(1e-14));
}

TEST_CASE("2x2 reciprocal matrix") {
  SquareMatrix<double> a(2, 1.0);
  a(0, 1) = 4.0;
  a(1, 0) = 0.25;
  const auto m = testing::as_pcm(a);
  const auto em = eigenvector_weights(m);
  const auto rgm = row_geometric_mean_weights(m);
  CHECK(em.w[0] == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(em.w[1] == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(*em.lambda_max == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(rgm.w[0] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK_FALSE(rgm.lambda_max.has_value());
}

TEST_CASE("consistent matrices recover the generating vector") {
  const auto m = testing::consistent_matrix({3.0, 2.0, 1.0});
  const auto em = eigenvector_weights(m);
  const auto rgm = row_geometric_mean_weights(m);
  const double expected[] = {0.5, 1.0 / 3.0, 1.0 / 6.0};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(em.w[i] - expected[i]) < 1e-12);
    CHECK(std::abs(rgm.w[i] - expected[i]) < 1e-12);
  }
  CHECK(*em.lambda_max == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(llsm_objective(m, rgm.w) < 1e-24);
}

TEST_CASE("RGM recovers random consistent vectors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> value(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + trial % 11);
    for (auto& x : v) x = value(rng);
    const double total = sum(v);
    const auto w = row_geometric_mean_weights(testing::consistent_matrix(v));
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(w.w[i] - v[i] / total) < 1e-12);
  }
}

TEST_CASE("EM matches the repeated-squaring Perron oracle for n <= 4") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto m = testing::random_reciprocal(rng, n);
    const auto em = eigenvector_weights(m);
    const auto oracle = testing::perron_by_squaring(m.a);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(em.w[i] - oracle[i]) < 1e-9);
  }
}

TEST_CASE("EM satisfies the eigen residual criterion on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(1e-3, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto base = testing::random_reciprocal(rng, 3 + trial % 10);
    const auto m = power_transform(base, alpha(rng));
    const auto em = eigenvector_weights(m);
    CHECK(eigen_residual(m, em.w, *em.lambda_max) < 1e-9);
    CHECK(*em.lambda_max >= static_cast<double>(m.size()) - 1e-9);
    CHECK(sum(em.w) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("RGM is a local minimum of the LLSM objective") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testing::random_reciprocal(rng, 3 + trial % 8);
    const auto w = row_geometric_mean_weights(m).w;
    const double best = llsm_objective(m, w);
    for (std::size_t k = 0; k < w.size(); ++k) {
      for (double delta : {-1e-2, 1e-2}) {
        auto p = w;
        p[k] = std::max(p[k] + delta, 1e-12);
        const double total = sum(p);
        for (auto& x : p) x /= total;
        CHECK(best < llsm_objective(m, p));
      }
    }
  }
}

TEST_CASE("RGM ranking is invariant under power_transform") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> alpha(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testing::random_reciprocal(rng, 3 + trial % 10);
    const auto base = testing::argsort_desc(row_geometric_mean_weights(m).w);
    const auto powered = testing::argsort_desc(row_geometric_mean_weights(power_transform(m, alpha(rng))).w);
    CHECK(base == powered);
  }
}

TEST_CASE("both methods respect row dominance") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> boost(1.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = testing::random_reciprocal(rng, 4 + trial % 8);
    const std::size_t n = m.size();
    // row 0 dominates row 1 entrywise
    for (std::size_t j = 0; j < n; ++j) {
      if (j == 0 || j == 1) continue;
      const double v = std::max(m.a(0, j), m.a(1, j)) * boost(rng);
      m.a(0, j) = v;
      m.a(j, 0) = 1.0 / v;
    }
    m.a(0, 1) = boost(rng);
    m.a(1, 0) = 1.0 / m.a(0, 1);
    CHECK(eigenvector_weights(m).w[0] >= eigenvector_weights(m).w[1]);
    CHECK(row_geometric_mean_weights(m).w[0] >= row_geometric_mean_weights(m).w[1]);
  }
}

TEST_CASE("2014 fixture anchors") {
  const auto& goals = testing::goals_2014();
  CHECK(std::abs(weights_for_goals(goals, 1.0, kEm).weight_of("Mercedes") - 0.3401) < 1e-3);
  CHECK(std::abs(weights_for_goals(goals, 3.0, kEm).weight_of("Mercedes") - 0.8189) < 1e-3);
  CHECK(std::abs(weights_for_goals(goals, 1.0, kRgm).weight_of("Mercedes") - 0.3173) < 1e-3);
  CHECK(std::abs(weights_for_goals(goals, 3.0, kRgm).weight_of("Mercedes") - 0.7657) < 1e-3);
}

TEST_CASE("2014 share curves match the reference samples") {
  check_curve(testing::kMercedesShareEm, "Mercedes", kEm);
  check_curve(testing::kMercedesShareRgm, "Mercedes", kRgm);
  check_curve(testing::kRedBullShareEm, "Red Bull", kEm);
  check_curve(testing::kWilliamsShareEm, "Williams", kEm);
  check_curve(testing::kFerrariShareEm, "Ferrari", kEm);
  check_curve(testing::kMcLarenShareEm, "McLaren", kEm);
  check_curve(testing::kForceIndiaShareEm, "Force India", kEm);
  check_curve(testing::kRedBullShareRgm, "Red Bull", kRgm);
  check_curve(testing::kWilliamsShareRgm, "Williams", kRgm);
  check_curve(testing::kFerrariShareRgm, "Ferrari", kRgm);
  check_curve(testing::kMcLarenShareRgm, "McLaren", kRgm);
  check_curve(testing::kForceIndiaShareRgm, "Force India", kRgm);
  check_curve(testing::kToroRossoShareRgm, "Toro Rosso", kRgm);
  check_curve(testing::kLotusShareRgm, "Lotus", kRgm);
  check_curve(testing::kMarussiaShareRgm, "Marussia", kRgm);
  check_curve(testing::kSauberShareRgm, "Sauber", kRgm);
  check_curve(testing::kCaterhamShareRgm, "Caterham", kRgm);
}

TEST_CASE("weights_for_goals at alpha 0 tolerates zero goals") {
  const auto goals = load_goals("team,A,B,C\nA,,4,0\nB,0,,1\nC,2,3,\n");
  const auto w = weights_for_goals(goals, 0.0, kEm);
  for (double x : w.w) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(weights_for_goals(goals, 1.0, kEm), DivisionByZeroError);
  CHECK_NOTHROW(weights_for_goals(goals, 1.0, kEm, 0.5));
}

TEST_CASE("eigenvector iteration reports non-convergence") {
  std::mt19937_64 rng(23);
  const auto m = testing::random_reciprocal(rng, 8, std::log(50.0));
  try {
    eigenvector_weights(m, 1e-12, 1);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonConvergence);
  }
  const WeightingMethod zero_tol{Method::kEigenvector, 0.0};
  const WeightingMethod zero_iter{Method::kEigenvector, 1e-12, 0};
  CHECK_THROWS_AS(zero_tol.validate(), Error);
  CHECK_THROWS_AS(zero_iter.validate(), Error);
}

TEST_CASE("method names parse case-insensitively") {
  CHECK(parse_method("EM") == Method::kEigenvector);
  CHECK(parse_method("rgm") == Method::kRowGeometricMean);
  CHECK(method_name(Method::kEigenvector) == "EM");
  CHECK_THROWS_AS(parse_method("llsm"), Error);
}

TEST_CASE("weights serialization") {
  const auto w = weights_for_goals(testing::goals_2014(), 2.0, kEm);
  const auto doc = nlohmann::json::parse(write_weights_json(w));
  CHECK(doc["method"] == "EM");
  CHECK(doc["alpha"].get<double>() == 2.0);
  CHECK(doc["teams"][0] == "Mercedes");
  CHECK(doc["weights"][0].get<double>() == w.w[0]);
  CHECK(doc.contains("lambda_max"));
  CHECK_FALSE(nlohmann::json::parse(write_weights_json(weights_for_goals(testing::goals_2014(), 2.0, kRgm)))
                  .contains("lambda_max"));
  const auto csv_text = write_weights_csv(w, 4);
  CHECK(csv_text.rfind("team,weight\n", 0) == 0);
  CHECK(write_weights_json(w) == write_weights_json(weights_for_goals(testing::goals_2014(), 2.0, kEm)));
}
