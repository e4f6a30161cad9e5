#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "skewdim/error.hpp"
#include "skewdim/harmonics.hpp"
#include "skewdim/theory.hpp"

using namespace skewdim;

namespace {

HyperbolicToralMatrix example_matrix() {
  IntMat a(3, 3);
  a << 6, -5, 1, 1, 0, 0, 0, 1, 0;
  return validate(a);
}

HyperbolicToralMatrix cat_matrix() {
  IntMat a(2, 2);
  a << 2, 1, 1, 1;
  return validate(a);
}

SkewProduct example_product(double lambda, bool mode1 = true, bool mode2 = true) {
  const auto m = example_matrix();
  const auto sp = spectrum(m);
  std::vector<EigenMode> modes;
  if (mode1) modes.push_back({0, 1.0, 1.0 / sp.modulus(0), std::numbers::pi / 4});
  if (mode2) modes.push_back({1, 1.0, 1.0 / sp.modulus(1), std::numbers::pi / 4});
  return SkewProduct(m, lambda, ForcingFunction::eigen(modes));
}

EstimationParams light() {
  EstimationParams p;
  p.anchors = 8;
  p.samples_per_interval = 32;
  p.graph_samples_per_edge = 3;
  p.delta_min_log2 = -10;
  p.graph_delta_min_log2 = -10;
  p.samples_per_column = 16;
  return p;
}

}  // namespace

TEST_CASE("regime classification") {
  auto r = classify_regime(example_product(0.5));
  CHECK(r.l == 1);
  CHECK(r.regimes[0] == DirectionRegime::FractalCandidate);
  CHECK(r.regimes[1] == DirectionRegime::Smooth);
  CHECK(r.i0 == 0);

  r = classify_regime(example_product(0.8));
  CHECK(r.l == 2);
  CHECK(r.i0 == 0);
  CHECK(r.witnesses[1].has_value());
  CHECK_FALSE(r.witnesses[2].has_value());

  IntVec j(2);
  j << 1, 0;
  r = classify_regime(SkewProduct(cat_matrix(), 0.2, ForcingFunction::lattice({{j, 0.5}})));
  CHECK(r.l == 0);
  CHECK_FALSE(r.i0.has_value());
}

TEST_CASE("predicted slice dimensions") {
  const auto mu = oracle::example_roots();
  const auto s = example_product(0.8);
  const auto r = classify_regime(s);
  CHECK(predicted_slice_dim(s, 0, r) == doctest::Approx(oracle::slice_dim(0.8, mu[0])).epsilon(1e-12));
  CHECK(predicted_slice_dim(s, 0, r) == doctest::Approx(1.8105300377958464).epsilon(1e-12));
  CHECK(predicted_slice_dim(s, 1, r) == doctest::Approx(1.4945197676049493).epsilon(1e-12));
  CHECK(predicted_slice_dim(s, 2, r) == 1.0);
}

TEST_CASE("predicted graph dimension and the consistency identity") {
  const auto mu = oracle::example_roots();
  for (double lambda : {0.5, 0.8}) {
    const auto s = example_product(lambda);
    const auto r = classify_regime(s);
    const double g = predicted_graph_dim(s, r);
    CHECK(g == doctest::Approx(4.0 - std::log(lambda) / std::log(mu[0])).epsilon(1e-12));
    CHECK(std::abs(g - (2.0 + predicted_slice_dim(s, *r.i0, r))) <= 1e-12);
  }
  const SkewProduct zero(example_matrix(), 0.8, ForcingFunction());
  CHECK(predicted_graph_dim(zero, classify_regime(zero)) == 3.0);
}

TEST_CASE("sum of slice dimensions") {
  const auto mu = oracle::example_roots();
  auto s = example_product(0.8);
  auto r = classify_regime(s);
  CHECK(sum_of_slice_dims(s, r) ==
        doctest::Approx(oracle::slice_dim(0.8, mu[0]) + oracle::slice_dim(0.8, mu[1]) + 1.0).epsilon(1e-12));
  // (k - l) + 2l - sum_{i=1}^{l} log lambda / log |B_i|
  CHECK(sum_of_slice_dims(s, r) ==
        doctest::Approx(1 + 4 - std::log(0.8) / std::log(mu[0]) - std::log(0.8) / std::log(mu[1])).epsilon(1e-12));

  s = example_product(0.5);
  r = classify_regime(s);
  CHECK(sum_of_slice_dims(s, r) == doctest::Approx(predicted_graph_dim(s, r)).epsilon(1e-12));

  IntVec j(2);
  j << 1, 0;
  const SkewProduct smooth(cat_matrix(), 0.2, ForcingFunction::lattice({{j, 0.5}}));
  CHECK(sum_of_slice_dims(smooth, classify_regime(smooth)) == 2.0);
}

TEST_CASE("strict inequality verdict") {
  const auto mu = oracle::example_roots();
  auto s = example_product(0.8);
  auto v = strict_inequality_verdict(s, classify_regime(s));
  CHECK(v.holds);
  CHECK(v.gap == doctest::Approx(oracle::slice_dim(0.8, mu[1]) - 1.0).epsilon(1e-12));
  CHECK(v.extra_fractal == std::vector<int>{1});

  s = example_product(0.5);
  CHECK_FALSE(strict_inequality_verdict(s, classify_regime(s)).holds);

  s = example_product(0.8, true, false);
  const auto r = classify_regime(s);
  CHECK_FALSE(r.witnesses[1].has_value());
  CHECK(predicted_slice_dim(s, 1, r) == 1.0);
  CHECK_FALSE(strict_inequality_verdict(s, r).holds);

  s = example_product(0.8, false, true);
  CHECK(classify_regime(s).i0 == 1);
  CHECK_FALSE(strict_inequality_verdict(s, classify_regime(s)).holds);
}

TEST_CASE("monotone in lambda and continuous at the regime boundary") {
  const auto mu = oracle::example_roots();
  double prev = 1.0;
  for (double lambda = mu[1] + 0.01; lambda < 0.99; lambda += 0.05) {
    const auto s = example_product(lambda);
    const double d = predicted_slice_dim(s, 1, classify_regime(s));
    CHECK(d > prev);
    prev = d;
  }
  const auto s = example_product(mu[1] * (1.0 + 1e-8));
  CHECK(predicted_slice_dim(s, 1, classify_regime(s)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zero forcing report has integral dimensions") {
  const SkewProduct zero(example_matrix(), 0.8, ForcingFunction());
  const auto rep = build_report(zero, light());
  for (const auto& sl : rep.slices) {
    CHECK(sl.predicted == 1.0);
    CHECK(sl.measured.slope == 1.0);
    CHECK_FALSE(sl.discrepancy);
  }
  CHECK(rep.graph.predicted == 3.0);
  CHECK(rep.graph.measured.slope == 3.0);
  CHECK_FALSE(rep.discrepancy);
}

TEST_CASE("zero forcing on the cat map includes box counts") {
  const SkewProduct zero(cat_matrix(), 0.5, ForcingFunction());
  const auto rep = build_report(zero, light());
  REQUIRE(rep.slices[0].box_count.has_value());
  CHECK(rep.slices[0].box_count->slope == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.graph.box_count.has_value());
  CHECK(rep.graph.measured.slope == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("vanishing g is labelled and still measured") {
  const auto m = example_matrix();
  const auto sp = spectrum(m);
  const double lambda = 0.8, mu = sp.modulus(0), w = 1.0 / mu;
  // Orbit {w, w/mu} with (q)_{w/mu} = -lambda (q)_w: the class sum vanishes.
  const SkewProduct s(m, lambda,
                      ForcingFunction::eigen({{0, 1.0, w, 0.3}, {0, lambda, w / mu, 0.3 + std::numbers::pi}}));
  const auto r = classify_regime(s);
  CHECK_FALSE(r.witnesses[0].has_value());
  CHECK(predicted_slice_dim(s, 0, r) == 1.0);
  auto p = light();
  p.anchors = 16;
  p.samples_per_interval = 256;
  const auto rep = measure_slice(s, 0, r, p);
  CHECK(rep.label == "predicted smooth (g = 0)");
  CHECK(rep.measured.slope < kSmoothFlagThreshold);
  CHECK_FALSE(rep.discrepancy);
}

TEST_CASE("report refuses a truncation tail above the finest scale") {
  auto p = light();
  p.truncation_tol = 1e-4;
  CHECK_THROWS_AS(build_report(example_product(0.8), p), Error);
}
