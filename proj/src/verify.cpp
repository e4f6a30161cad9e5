#include "skewdim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewdim/boxdim.hpp"
#include "skewdim/error.hpp"
#include "skewdim/harmonics.hpp"
#include "skewdim/io.hpp"
#include "skewdim/theory.hpp"

namespace skewdim {
namespace {

struct Suite {
  std::vector<InvariantResult> results;

  void check(std::string name, double residual, double bound, std::string detail = {}) {
    const bool ok = std::isfinite(residual) && residual <= bound;
    if (detail.empty()) detail = "bound " + fmt_g9(bound);
    results.push_back({std::move(name), ok, residual, std::move(detail)});
  }
  void flag(std::string name, bool ok, std::string detail) {
    results.push_back({std::move(name), ok, ok ? 0.0 : 1.0, std::move(detail)});
  }
};

std::vector<Vec> torus_points(std::uint64_t seed, int count, int k) {
  return lcg_anchors_kd(seed, count, Cube{Vec::Zero(k), 1.0});
}

void spectral_checks(Suite& suite, const SkewProduct& s, const VerifyOptions& opt) {
  const Spectrum& sp = s.spectrum();
  const Mat a = s.matrix().entries().cast<double>();
  const int k = s.dim();

  double eig = 0.0;
  for (int i = 0; i < k; ++i)
    eig = std::max(eig, (a * sp.eigenvectors.col(i) - sp.eigenvalues(i) * sp.eigenvectors.col(i)).norm());
  suite.check("spectral.eigen_equation", eig, 1e-9);

  const Mat wv = sp.dual * sp.eigenvectors;
  suite.check("spectral.dual_basis", (wv - Mat::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-9);

  suite.check("spectral.eigenvalue_product", std::abs(sp.eigenvalues.prod() - double(s.matrix().determinant())), 1e-9);

  bool sorted = true;
  for (int i = 1; i < k; ++i) sorted = sorted && sp.modulus(i - 1) < sp.modulus(i);
  suite.flag("spectral.sorted_by_modulus", sorted, sorted ? "ascending" : "not ascending");

  Spectrum again = spectrum(s.matrix());
  if (opt.tamper_eigenvector_sign) {
    again.eigenvectors.col(0) = -again.eigenvectors.col(0);
    again.dual.row(0) = -again.dual.row(0);
  }
  const bool same = same_frame(sp, again);
  suite.flag("spectral.determinism", same, same ? "identical frames" : "eigenvector frame differs between runs");
}

void fiber_checks(Suite& suite, const SkewProduct& s, const VerifyOptions& opt) {
  const PhiEvaluator phi(s, opt.truncation_tol);
  const int k = s.dim();
  double fe = 0.0, sup = 0.0, inv = 0.0;
  for (const Vec& x : torus_points(opt.seed, opt.sample_points, k)) {
    const BasePoint bp = s.from_standard(x);
    const BasePoint ax = s.apply_matrix(bp);
    const double fx = phi(bp);
    fe = std::max(fe, std::abs(phi(ax) - s.lambda() * fx - s.p(ax)));
    sup = std::max(sup, std::abs(fx));
    // Attractor points are (x, phi(A^-1 x)).
    auto [x3, y3] = iterate_F(s, bp, phi(s.apply_inverse(bp)), 3);
    inv = std::max(inv, std::abs(y3 - phi(s.apply_inverse(x3))));
  }
  suite.check("fiber.functional_equation", fe, 2.0 * opt.truncation_tol);
  const double bound = s.forcing().sup_norm_bound() / (1.0 - s.lambda()) + opt.truncation_tol;
  suite.check("fiber.sup_bound", sup - bound, 0.0, "sup |phi| - S/(1-lambda)");
  suite.check("fiber.graph_invariance", inv, 6.0 * opt.truncation_tol);

  const double h = 1e-6;
  for (int i = 0; i < k; ++i) {
    const auto bound_i = smoothness_bound(s, i);
    if (!bound_i) continue;
    double worst = 0.0;
    for (double t : lcg_anchors(opt.seed + 7 + i, 20, {0.0, 2.0 * std::numbers::pi}))
      worst = std::max(worst, std::abs(phi.slice(i, t + h) - phi.slice(i, t - h)) / (2 * h));
    suite.check("fiber.smooth_slope_dir" + std::to_string(i + 1), worst, *bound_i + 1.0);
  }
}

void harmonics_checks(Suite& suite, const SkewProduct& s) {
  const int k = s.dim();
  for (int i = 0; i < k; ++i) {
    const SliceSpectrum spec = slice_spectrum(s, i);
    const Fn1 q = [&](double t) { return slice_q(s, i, t); };
    std::vector<SpectralEntry> top = spec.entries;
    std::sort(top.begin(), top.end(), [](auto& x, auto& y) { return std::abs(x.coeff) > std::abs(y.coeff); });
    if (top.size() > 3) top.resize(3);
    double worst = 0.0;
    for (const auto& e : top)
      worst = std::max(worst, std::abs(time_average_coefficient(q, e.frequency, 4000.0, 800000) - e.coeff));
    suite.check("harmonics.time_average_dir" + std::to_string(i + 1), worst, 0.01);

    const double b = s.spectrum().eigenvalues(i);
    if (!(std::abs(b) < s.lambda())) continue;
    const auto witness = find_nonzero_g(spec, s.lambda(), b);
    if (!witness) continue;
    double cov = 0.0;
    for (int j = -3; j <= 3; ++j) {
      const auto g = g_sigma(spec, s.lambda(), b, witness->sigma * std::pow(b, j));
      cov = std::max(cov, std::abs(g.value - std::pow(s.lambda(), -j) * witness->g.value) /
                              std::max(1.0, std::abs(witness->g.value)));
    }
    suite.check("harmonics.g_covariance_dir" + std::to_string(i + 1), cov, 1e-12);
  }
}

void boxdim_checks(Suite& suite, const SkewProduct& s, const VerifyOptions& opt) {
  const PhiEvaluator phi(s, opt.truncation_tol);
  const Fn1 f = [&](double t) { return phi.slice(0, t); };
  const auto deltas = dyadic_ladder(-4, -9);
  const BoxCountSeries series = box_count_series_1d(f, {0.0, 1.0}, deltas, 64);
  suite.flag("boxdim.monotone_counts", series.monotone(), "N(delta/2) >= N(delta)");

  const double d = 0x1.0p-7;
  const auto whole = box_count_graph_1d(f, {0.0, 1.0}, d, 64);
  const auto split = box_count_graph_1d(f, {0.0, 0.5}, d, 64) + box_count_graph_1d(f, {0.5, 1.0}, d, 64);
  suite.check("boxdim.schedule_independence", std::abs(double(whole - split)), 0.0);

  for (int i = 0; i < s.dim(); ++i) {
    const auto bound = smoothness_bound(s, i);
    if (!bound) continue;
    const Fn1 fi = [&](double t) { return phi.slice(i, t); };
    const auto n = box_count_graph_1d(fi, {0.0, 1.0}, d, 64);
    const double cols = 1.0 / d;
    suite.check("boxdim.floor_rule_dir" + std::to_string(i + 1), n - (2.0 + *bound) * cols, 0.0,
                "N - (2 + K) * columns");
  }

  Lcg64 rng(opt.seed + 99);
  double worst = -1e300;
  for (int c = 0; c < 5; ++c) {
    const double rho = 0.5 + 40.0 * rng.uniform();
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const int n = 1 + static_cast<int>(rng.next() >> 62);
    const auto r = variation_integral_check(f, rho, phase, n);
    worst = std::max(worst, std::numbers::pi * std::abs(r.integral) - kQuadratureTolerance - r.var);
  }
  suite.check("boxdim.variation_integral", worst, 0.0, "pi|I| - 1e-3 - var");
}

void theory_checks(Suite& suite, const SkewProduct& s) {
  const RegimeClassification r = classify_regime(s);
  const double graph = predicted_graph_dim(s, r);
  const double expected = r.i0 ? s.dim() - 1 + predicted_slice_dim(s, *r.i0, r) : s.dim();
  suite.check("theory.graph_consistency", std::abs(graph - expected), 1e-12);

  const auto strict = strict_inequality_verdict(s, r);
  suite.flag("theory.no_strict_when_l_le_1", r.l > 1 || !strict.holds,
             "l = " + std::to_string(r.l) + ", strict = " + (strict.holds ? "true" : "false"));

  double boundary = 0.0, monotone = 0.0;
  for (int i = 0; i < r.l; ++i) {
    const double m = s.spectrum().modulus(i);
    boundary = std::max(boundary, 1.0 - std::log(m * (1.0 + 1e-9)) / std::log(m));
    const double hi = i + 1 < s.dim() ? std::min(1.0, s.spectrum().modulus(i + 1)) : 1.0;
    const double l1 = m + 0.25 * (hi - m), l2 = m + 0.75 * (hi - m);
    const double d1 = 2.0 - std::log(l1) / std::log(m), d2 = 2.0 - std::log(l2) / std::log(m);
    monotone = std::max(monotone, d1 - d2);
  }
  suite.check("theory.boundary_continuity", std::abs(boundary), 1e-6);
  suite.check("theory.lambda_monotonicity", monotone, 0.0, "d(lambda_1) - d(lambda_2) for lambda_1 < lambda_2");
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(const SkewProduct& s, const VerifyOptions& options) {
  Suite suite;
  spectral_checks(suite, s, options);
  fiber_checks(suite, s, options);
  harmonics_checks(suite, s);
  boxdim_checks(suite, s, options);
  theory_checks(suite, s);
  return suite.results;
}

}  // namespace skewdim
