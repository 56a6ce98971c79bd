#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "doctest.h"
#include "refprior/errors.hpp"
#include "refprior/estimators.hpp"
#include "refprior/metrics.hpp"
#include "support/golden.hpp"

using namespace refprior;

namespace {

// Worked-example grid for the fixed-k estimates, scored against a/theta.
GridEvaluation fk_grid(double a_hat) {
  GridEvaluation g;
  for (std::size_t l = 0; l < golden::kMetricThetas.size(); ++l) {
    GridEntry e;
    e.theta = golden::kMetricThetas[l];
    e.estimate = golden::kMetricFkEstimates[l];
    e.scaled_ref = a_hat / e.theta;
    g.entries.push_back(e);
  }
  return g;
}

}  // namespace

TEST_CASE("worked example: estimation error of both fitted families") {
  CHECK(std::abs(earp(fk_grid(golden::kAHat)) - golden::kAHatEarp) < 1e-3);

  GridEvaluation gf;
  for (std::size_t l = 0; l < golden::kMetricThetas.size(); ++l) {
    GridEntry e;
    e.theta = golden::kMetricThetas[l];
    e.estimate = golden::kMetricFEstimates[l];
    e.scaled_ref = golden::kBHat / e.theta;
    gf.entries.push_back(e);
  }
  CHECK(std::abs(earp(gf) - golden::kBHatEarp) < 1e-3);
}

TEST_CASE("worked example: coverage counts four of six intervals") {
  GridEvaluation g;
  for (std::size_t l = 0; l < golden::kMetricThetas.size(); ++l) {
    GridEntry e;
    e.theta = golden::kMetricThetas[l];
    e.estimate = golden::kCoverageEstimates[l];
    e.half_width = golden::kCoverageHalfWidths[l];
    e.scaled_ref = golden::kBHat / e.theta;
    g.entries.push_back(e);
  }
  CHECK(coverage(g) == golden::kCoverage);  // exactly 4/6
}

TEST_CASE("worked example: mean relative interval widths") {
  // The published relative widths with a unit reference reproduce the two
  // summary numbers directly.
  GridEvaluation gk, gf;
  for (std::size_t l = 0; l < golden::kRelWidthsFk.size(); ++l) {
    GridEntry e;
    e.scaled_ref = 1.0;
    e.half_width = golden::kRelWidthsFk[l];
    gk.entries.push_back(e);
    e.half_width = golden::kRelWidthsF[l];
    gf.entries.push_back(e);
  }
  CHECK(std::abs(amrp(gk) - golden::kAmrpFk) < 1e-3);
  CHECK(std::abs(amrp(gf) - golden::kAmrpF) < 1e-3);
}

TEST_CASE("metrics are invariant under a joint positive rescaling") {
  GridEvaluation g;
  for (double theta : {1.0, 2.0, 4.0}) {
    GridEntry e;
    e.theta = theta;
    e.estimate = 1.3 / theta;
    e.half_width = 0.2 / theta;
    e.scaled_ref = 1.1 / theta;
    g.entries.push_back(e);
  }
  GridEvaluation scaled = g;
  for (auto& e : scaled.entries) {
    e.estimate *= 37.25;
    e.half_width *= 37.25;
    e.scaled_ref *= 37.25;
  }
  CHECK(earp(scaled) == doctest::Approx(earp(g)).epsilon(1e-15));
  CHECK(amrp(scaled) == doctest::Approx(amrp(g)).epsilon(1e-15));
  CHECK(coverage(scaled) == coverage(g));
}

TEST_CASE("coverage uses strictly open intervals") {
  GridEntry hit;
  hit.estimate = 1.0;
  hit.half_width = 0.5;
  hit.scaled_ref = 1.2;
  GridEntry edge = hit;
  edge.scaled_ref = 1.5;  // exactly on the boundary: not covered
  GridEntry zero = hit;
  zero.half_width = 0.0;
  zero.scaled_ref = 1.0;  // zero width cannot cover anything

  GridEvaluation g;
  g.entries = {hit, edge, zero};
  CHECK(coverage(g) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("degenerate grids are rejected") {
  const GridEvaluation empty;
  CHECK_THROWS_AS(earp(empty), DomainError);
  CHECK_THROWS_AS(amrp(empty), DomainError);
  CHECK_THROWS_AS(coverage(empty), DomainError);

  GridEvaluation bad;
  GridEntry e;
  e.estimate = 1.0;
  e.scaled_ref = 0.0;
  bad.entries.push_back(e);
  CHECK_THROWS_AS(earp(bad), DomainError);
  e.scaled_ref = -1.0;
  bad.entries = {e};
  CHECK_THROWS_AS(coverage(bad), DomainError);
}

TEST_CASE("earp of a fitted grid equals the fit's own minimum") {
  // Consistency between the fitter's reported objective and the metric
  // recomputed from the scaled references it implies.
  const std::vector<double> estimates = {9.941, 4.047, 1.907,
                                         1.397, 1.455, 1.095};
  std::vector<std::pair<double, double>> pts;
  GridEvaluation g;
  for (std::size_t l = 0; l < estimates.size(); ++l) {
    pts.emplace_back(golden::kMetricThetas[l], estimates[l]);
  }
  const EarpFit fit =
      fit_constant_earp(pts, [](double th) { return 1.0 / th; });
  for (std::size_t l = 0; l < estimates.size(); ++l) {
    GridEntry e;
    e.theta = golden::kMetricThetas[l];
    e.estimate = estimates[l];
    e.scaled_ref = fit.a_hat / e.theta;
    g.entries.push_back(e);
  }
  CHECK(earp(g) == doctest::Approx(fit.earp_min).epsilon(1e-12));
}
