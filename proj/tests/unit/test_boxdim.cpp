#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <numbers>

#include "skewdim/boxdim.hpp"
#include "skewdim/error.hpp"

using namespace skewdim;

namespace {

const double kPi = std::numbers::pi;

double weierstrass(double t, int terms = 30) {
  double s = 0.0, w = 1.0, f = 1.0;
  for (int n = 0; n <= terms; ++n, w *= 0.5, f *= 4.0) s += w * std::cos(f * t);
  return s;
}

// Even exponents keep delta^-1.5 an exact integer.
BoxCountSeries synthetic(double exponent, double prefactor) {
  BoxCountSeries s;
  for (int e = 2; e <= 12; e += 2) {
    const double d = std::ldexp(1.0, -e);
    s.entries.push_back({d, static_cast<std::int64_t>(std::llround(prefactor * std::pow(d, -exponent)))});
  }
  return s;
}

}  // namespace

TEST_CASE("variation examples") {
  CHECK(variation([](double t) { return std::cos(2 * kPi * t); }, {0.0, 1.0}, 1000) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(variation([](double) { return 3.0; }, {0.0, 1.0}, 10) == 0.0);
  CHECK(variation([](double t) { return t; }, {0.0, 0.37}, 10) == 0.37);
  CHECK_THROWS_AS(variation([](double t) { return t; }, {0.0, 1.0}, 1), Error);
}

TEST_CASE("1-D box counts, floor rule") {
  CHECK(box_count_graph_1d([](double) { return 0.0; }, {0.0, 1.0}, 0.1, 16) == 10);
  CHECK(box_count_graph_1d([](double t) { return t; }, {0.0, 1.0}, 0.1, 16) == 10);
  CHECK(box_count_graph_1d([](double t) { return 3.0 * t; }, {0.0, 1.0}, 0.125, 16) == 24);
  CHECK_THROWS_AS(box_count_graph_1d([](double t) { return t; }, {0.0, 1.0}, 0.1, 8), Error);
}

TEST_CASE("k-D box counts") {
  Cube unit{Vec::Zero(2), 1.0};
  CHECK(box_count_graph_kd([](const Vec&) { return 0.0; }, unit, 0.25, 5) == 16);
  CHECK(box_count_graph_kd([](const Vec& x) { return x(0); }, unit, 0.25, 5) == 16);
  CHECK(box_count_graph_kd([](const Vec& x) { return 2.0 * x(1); }, unit, 0.25, 4) == 32);
  CHECK_THROWS_AS(box_count_graph_kd([](const Vec&) { return 0.0; }, unit, std::ldexp(1.0, -16), 3), Error);
}

TEST_CASE("k-D series matches single-level counts on a dyadic grid") {
  const FnK f = [](const Vec& x) { return std::sin(5 * x(0)) * std::cos(3 * x(1)) + 0.3 * x(0); };
  const Cube unit{Vec::Zero(2), 1.0};
  const auto deltas = dyadic_ladder(-2, -6);
  const auto series = box_count_series_kd(f, unit, deltas, 5);
  CHECK(series.monotone());
  // The finest level uses the same samples as a single-level count.
  CHECK(series.entries.back().count == box_count_graph_kd(f, unit, deltas.back(), 5));
  // Coarser levels see at least the samples of the single-level grid.
  for (std::size_t i = 0; i < deltas.size(); ++i)
    CHECK(series.entries[i].count >= box_count_graph_kd(f, unit, deltas[i], 5));
  CHECK_THROWS_AS(box_count_series_kd(f, unit, std::vector<double>{0.5, 0.2}, 5), Error);
}

TEST_CASE("fit_dimension on synthetic laws") {
  auto e = fit_dimension(synthetic(1.5, 1.0), 0);
  CHECK(e.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(e.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  e = fit_dimension(synthetic(1.0, 10.0));
  CHECK(e.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.intercept == doctest::Approx(std::log(10.0)).epsilon(1e-12));
  CHECK(e.scale_max == std::ldexp(1.0, -6));
  CHECK(e.scale_min == std::ldexp(1.0, -12));
  BoxCountSeries tiny;
  tiny.entries = {{0.5, 2}, {0.25, 4}};
  CHECK_THROWS_AS(fit_dimension(tiny), Error);
}

TEST_CASE("variation exponent of a line is 1") {
  const auto anchors = lcg_anchors(1, 16, {0.0, 1.0});
  const auto lengths = dyadic_ladder(-4, -9);
  const auto r = variation_exponent([](double t) { return 2.0 * t; }, anchors, lengths, 64);
  CHECK(r.estimate.exponent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.estimate.slope == doctest::Approx(1.0));
  CHECK(r.profile.entries.size() == 6);
  CHECK_THROWS_AS(variation_exponent([](double t) { return t; }, anchors, dyadic_ladder(-4, -8), 64), Error);
  CHECK_THROWS_AS(variation_exponent([](double t) { return t; }, std::span(anchors).first(7), lengths, 64), Error);
}

TEST_CASE("variation exponent reports a flat function as degenerate") {
  const auto anchors = lcg_anchors(1, 8, {0.0, 1.0});
  const auto r = variation_exponent([](double) { return 1.0; }, anchors, dyadic_ladder(-4, -9), 16);
  CHECK(r.estimate.degenerate);
  CHECK(r.estimate.slope == 1.0);
}

TEST_CASE("Weierstrass function: both estimators near 1.5") {
  const Fn1 f = [](double t) { return weierstrass(t); };
  const auto anchors = lcg_anchors(3, 32, {0.0, 2 * kPi});
  const auto var = variation_exponent(f, anchors, dyadic_ladder(-6, -11), 512);
  CHECK(std::abs(var.estimate.slope - 1.5) < 0.05);
  const auto series = box_count_series_1d(f, {0.0, 1.0}, dyadic_ladder(-4, -12), 32);
  CHECK(series.monotone());
  CHECK(std::abs(fit_dimension(series).slope - 1.5) < 0.05);
}

TEST_CASE("smooth function measures dimension 1") {
  const Fn1 f = [](double t) { return std::sin(3 * t) + 0.2 * std::cos(11 * t); };
  const auto series = box_count_series_1d(f, {0.0, 1.0}, dyadic_ladder(-4, -12), 16);
  CHECK(std::abs(fit_dimension(series).slope - 1.0) < 0.05);
}

TEST_CASE("variation exponent in two dimensions") {
  const FnK lin = [](const Vec& x) { return x(0) + x(1); };
  const Cube range{Vec::Zero(2), 1.0};
  const auto anchors = lcg_anchors_kd(2, 8, range);
  const auto r = variation_exponent_kd(lin, anchors, dyadic_ladder(-3, -8), 16, 5);
  CHECK(r.estimate.slope == doctest::Approx(2.0).epsilon(1e-9));
  const auto flat = variation_exponent_kd([](const Vec&) { return 0.0; }, anchors, dyadic_ladder(-3, -8), 16, 3);
  CHECK(flat.estimate.degenerate);
  CHECK(flat.estimate.slope == 2.0);
}

TEST_CASE("variation integral check") {
  const double rho = 3.0, phase = 0.4;
  auto r = variation_integral_check([&](double t) { return std::cos(rho * t + phase); }, rho, phase, 1);
  CHECK(r.integral == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.var == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.holds);
  r = variation_integral_check([](double) { return 0.0; }, rho, phase, 2);
  CHECK(r.integral == 0.0);
  CHECK(r.holds);
  CHECK_THROWS_AS(variation_integral_check([](double) { return 0.0; }, 0.0, 0.0, 1), Error);
}

TEST_CASE("least squares") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = least_squares(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("LCG matches the named recurrence") {
  Lcg64 rng(42);
  std::uint64_t state = 42;
  for (int i = 0; i < 5; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    CHECK(rng.next() == state);
  }
  CHECK(lcg_anchors(9, 4, {0.0, 1.0}) == lcg_anchors(9, 4, {0.0, 1.0}));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw Error(ErrorCode::InvalidArgument, "boom");
                  }),
                  Error);
}

TEST_CASE("dyadic ladder") {
  const auto d = dyadic_ladder(-4, -6);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == 0.0625);
  CHECK(d[2] == 0.015625);
  CHECK_THROWS_AS(dyadic_ladder(-6, -4), Error);
}
