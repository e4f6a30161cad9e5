// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion N   only criterion N (exit status 1 on FAIL)

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "CLI11.hpp"
#include "skewdim/boxdim.hpp"
#include "skewdim/commands.hpp"
#include "skewdim/config.hpp"
#include "skewdim/fiber.hpp"
#include "skewdim/harmonics.hpp"
#include "skewdim/io.hpp"
#include "skewdim/theory.hpp"

using namespace skewdim;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

HyperbolicToralMatrix matrix_of(int k, std::initializer_list<std::int64_t> entries) {
  IntMat a(k, k);
  auto it = entries.begin();
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) a(r, c) = *it++;
  return validate(a);
}

HyperbolicToralMatrix example_matrix() { return matrix_of(3, {6, -5, 1, 1, 0, 0, 0, 1, 0}); }
HyperbolicToralMatrix cat_matrix() { return matrix_of(2, {2, 1, 1, 1}); }

SkewProduct example_product(double lambda) {
  const auto m = example_matrix();
  const auto sp = spectrum(m);
  return SkewProduct(m, lambda,
                     ForcingFunction::eigen({{0, 1.0, 1.0 / sp.modulus(0), kPi / 4},
                                             {1, 1.0, 1.0 / sp.modulus(1), kPi / 4}}));
}

SkewProduct cat_product(double lambda) {
  IntVec j(2);
  j << 1, 0;
  return SkewProduct(cat_matrix(), lambda, ForcingFunction::lattice({{j, 0.5}}));
}

double radical_inverse(std::uint64_t n, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, x = 0.0;
  for (; n > 0; n /= base, f *= inv) x += f * static_cast<double>(n % base);
  return x;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  Outcome o;
  const Stopwatch clock;
  const Fn1 w = [](double t) {
    double s = 0.0, a = 1.0, b = 1.0;
    for (int n = 0; n <= 30; ++n, a *= 0.5, b *= 4.0) s += a * std::cos(b * t);
    return s;
  };
  const EstimationParams p;
  const auto deltas = dyadic_ladder(p.delta_max_log2, p.delta_min_log2);
  const auto box = fit_dimension(box_count_series_1d(w, {0.0, 1.0}, deltas, p.samples_per_column));
  const auto anchors = lcg_anchors(p.seed, p.anchors, {0.0, 2.0 * kPi});
  const auto lengths = dyadic_ladder(p.interval_max_log2, p.interval_max_log2 - p.interval_levels + 1);
  const auto var = variation_exponent(w, anchors, lengths, p.samples_per_interval).estimate;
  const double secs = clock.seconds();
  o.require(std::abs(box.slope - 1.5) <= 0.05, "box counting " + g6(box.slope));
  o.require(std::abs(var.slope - 1.5) <= 0.05, "variation " + g6(var.slope));
  o.require(secs <= 30.0, "runtime " + g6(secs) + " s");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const Stopwatch clock;
  const auto mu = oracle::example_roots();
  const SkewProduct s = example_product(0.8);
  const auto r = classify_regime(s);
  const EstimationParams p;
  const double targets[3] = {oracle::slice_dim(0.8, mu[0]), oracle::slice_dim(0.8, mu[1]), 1.0};
  for (int i = 0; i < 3; ++i) {
    const double d = measure_slice(s, i, r, p).measured.slope;
    o.require(std::abs(d - targets[i]) <= kSliceTolerance,
              "slice " + std::to_string(i + 1) + " " + g6(d) + " vs " + g6(targets[i]));
  }
  const double secs = clock.seconds();
  o.require(secs <= 120.0, "runtime " + g6(secs) + " s");
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const Stopwatch clock;
  const auto mu = oracle::example_roots();
  const double target = 4.0 - std::log(0.8) / std::log(mu[0]);
  const auto rep = build_report(example_product(0.8), EstimationParams{});
  const double secs = clock.seconds();
  o.require(rep.graph.measured.method == EstimateMethod::VariationExponent, "variation-exponent path");
  o.require(std::abs(rep.graph.measured.slope - target) <= kGraphTolerance,
            "graph " + g6(rep.graph.measured.slope) + " vs " + g6(target));
  o.require(rep.graph.measured.slope + kStrictMargin < rep.sum_measured,
            "graph + 0.1 < sum of slices " + g6(rep.sum_measured));
  o.require(secs <= 300.0, "runtime " + g6(secs) + " s");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const auto mu = oracle::example_roots();
  const double target = 4.0 - std::log(0.5) / std::log(mu[0]);
  const auto rep = build_report(example_product(0.5), EstimationParams{});
  o.require(std::abs(rep.graph.measured.slope - target) <= kGraphTolerance,
            "graph " + g6(rep.graph.measured.slope) + " vs " + g6(target));
  o.require(std::abs(rep.graph.measured.slope - rep.sum_measured) <= 0.15,
            "sum of slices " + g6(rep.sum_measured));
  return o;
}

Outcome criterion_5() {
  Outcome o;
  Lcg64 rng(2024);
  double worst_avg = 0.0;
  for (int c = 0; c < 20; ++c) {
    const bool three = c % 2 == 1;
    const auto m = three ? example_matrix() : cat_matrix();
    const int k = m.dim();
    std::vector<LatticeMode> modes;
    const int count = 1 + static_cast<int>(rng.next() % 3);
    for (int n = 0; n < count; ++n) {
      IntVec j(k);
      auto taken = [&] {
        for (const auto& m : modes)
          if (m.j == j || m.j == -j) return true;
        return j.isZero();
      };
      do {
        for (int a = 0; a < k; ++a) j(a) = static_cast<int>(rng.next() % 5) - 2;
      } while (taken());
      modes.push_back({j, {0.5 * rng.uniform() - 0.25, 0.5 * rng.uniform() - 0.25}});
    }
    const double lambda = three ? 0.55 : 0.5;
    const SkewProduct s(m, lambda, ForcingFunction::lattice(modes));
    for (int i = 0; i < k; ++i) {
      const auto spec = slice_spectrum(s, i);
      const Fn1 q = [&](double t) { return slice_q(s, i, t); };
      for (const auto& e : spec.entries)
        worst_avg = std::max(worst_avg, std::abs(time_average_coefficient(q, e.frequency, 4000.0, 800000) - e.coeff));
    }
  }
  o.require(worst_avg <= 0.01, "time averages within " + g6(worst_avg));

  double worst_cov = 0.0;
  for (double lambda : {0.5, 0.8}) {
    const SkewProduct s = example_product(lambda);
    for (int i = 0; i < 2; ++i) {
      const double b = s.spectrum().eigenvalues(i);
      if (!(std::abs(b) < lambda)) continue;
      const auto spec = slice_spectrum(s, i);
      const auto w = find_nonzero_g(spec, lambda, b);
      if (!w) continue;
      for (int j = -3; j <= 3; ++j) {
        const auto g = g_sigma(spec, lambda, b, w->sigma * std::pow(b, j));
        worst_cov = std::max(worst_cov, std::abs(g.value - std::pow(lambda, -j) * w->g.value));
      }
    }
  }
  o.require(worst_cov <= 1e-12, "covariance residual " + g6(worst_cov));

  // Coefficient of g_i at sigma = 1 for the worked example. The mode frequency is
  // 1/|B_i|, so sigma = 1 is one step above it and collects lambda^-1 (a/2) e^{i theta}.
  const double lambda = 0.8;
  const SkewProduct s = example_product(lambda);
  const std::complex<double> half = 0.5 * std::polar(1.0, kPi / 4);
  double stated = 0.0, inverse = 0.0, two_below = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double b = s.spectrum().eigenvalues(i);
    const auto spec = slice_spectrum(s, i);
    const auto g1 = g_sigma(spec, lambda, b, 1.0).value;
    const auto g2 = g_sigma(spec, lambda, b, std::pow(std::abs(b), -2)).value;
    stated = std::max(stated, std::abs(g1 - lambda * half));
    inverse = std::max(inverse, std::abs(g1 - half / lambda));
    two_below = std::max(two_below, std::abs(g2 - lambda * half));
  }
  o.require(stated <= 1e-12, "(g_i)_1 = lambda (a/2) e^{i theta} residual " + g6(stated));
  o.detail += "; observed (g_i)_1 = lambda^-1 (a/2) e^{i theta} residual " + g6(inverse) +
              ", (g_i)_{mu^-2} = lambda (a/2) e^{i theta} residual " + g6(two_below);
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const double tol = 1e-9;
  Lcg64 rng(606);
  const HyperbolicToralMatrix mats[4] = {cat_matrix(), matrix_of(2, {3, 1, 2, 1}), example_matrix(),
                                         matrix_of(3, {2, 1, 1, 1, 1, 0, 1, 0, 0})};
  double worst = 0.0;
  for (int c = 0; c < 10; ++c) {
    const auto& m = mats[c % 4];
    const int k = m.dim();
    const auto sp = spectrum(m);
    std::vector<LatticeMode> modes;
    for (int n = 0; n < 2; ++n) {
      IntVec j(k);
      do {
        for (int a = 0; a < k; ++a) j(a) = static_cast<int>(rng.next() % 5) - 2;
      } while (j.isZero() || (!modes.empty() && (modes[0].j == j || modes[0].j == -j)));
      modes.push_back({j, {0.4 * rng.uniform() - 0.2, 0.4 * rng.uniform() - 0.2}});
    }
    ForcingFunction f = ForcingFunction::lattice(modes);
    if (c >= 4) {
      const int d = static_cast<int>(rng.next() % k);
      f = f.plus(ForcingFunction::eigen({{d, 0.3, 1.0 / sp.modulus(d), 2 * kPi * rng.uniform()}}));
    }
    double lambda;
    do lambda = 0.1 + 0.85 * rng.uniform();
    while ([&] {
      for (int i = 0; i < k; ++i)
        if (std::abs(lambda - sp.modulus(i)) < 0.02) return true;
      return false;
    }());
    const SkewProduct s(m, lambda, f);
    const PhiEvaluator phi(s, tol);
    const std::uint64_t primes[3] = {2, 3, 5};
    for (std::uint64_t n = 1; n <= 1000; ++n) {
      Vec x(k);
      for (int a = 0; a < k; ++a) x(a) = radical_inverse(n, primes[a]);
      const BasePoint b = s.from_standard(x);
      const BasePoint ab = s.apply_matrix(b);
      worst = std::max(worst, std::abs(phi(ab) - lambda * phi(b) - s.p(ab)));
    }
  }
  o.require(worst <= 2 * tol, "max residual " + g6(worst) + " over 10 configs x 1000 points");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  struct Case {
    std::string name;
    SkewProduct s;
    std::vector<int> dirs;
  };
  IntVec j1(2), j2(2);
  j1 << 1, 0;
  j2 << 1, 1;
  std::vector<Case> cases;
  cases.push_back({"example lambda=0.5", example_product(0.5), {1, 2}});
  cases.push_back({"example lambda=0.8", example_product(0.8), {2}});
  cases.push_back({"cat lambda=0.2", SkewProduct(cat_matrix(), 0.2, ForcingFunction::lattice({{j1, 0.5}, {j2, {0.0, 0.25}}})), {0, 1}});
  cases.push_back({"cat lambda=0.5", cat_product(0.5), {1}});
  const EstimationParams p;
  const double h = 1e-6;
  for (const auto& c : cases) {
    const auto r = classify_regime(c.s);
    const PhiEvaluator phi(c.s, p.truncation_tol);
    for (int i : c.dirs) {
      const auto bound = smoothness_bound(c.s, i);
      if (!bound) {
        o.require(false, c.name + " dir " + std::to_string(i + 1) + " not smooth");
        continue;
      }
      double worst = 0.0;
      for (double t : lcg_anchors(p.seed + 50 + i, 100, {0.0, 2.0 * kPi}))
        worst = std::max(worst, std::abs(phi.slice(i, t + h) - phi.slice(i, t - h)) / (2 * h));
      const double d = measure_slice(c.s, i, r, p).measured.slope;
      const std::string tag = c.name + " dir " + std::to_string(i + 1);
      o.require(worst <= *bound + 1.0, tag + " slope " + g6(worst) + " <= " + g6(*bound + 1.0));
      o.require(std::abs(d - 1.0) <= kSliceTolerance, tag + " dim " + g6(d));
    }
  }
  return o;
}

Outcome criterion_8() {
  Outcome o;
  struct Source {
    std::string name;
    SkewProduct s;
    int dir;
  };
  std::vector<Source> sources;
  sources.push_back({"example 0.8 dir 1", example_product(0.8), 0});
  sources.push_back({"example 0.8 dir 2", example_product(0.8), 1});
  sources.push_back({"example 0.5 dir 1", example_product(0.5), 0});
  sources.push_back({"example 0.5 dir 3", example_product(0.5), 2});
  sources.push_back({"cat 0.5 dir 1", cat_product(0.5), 0});
  Lcg64 rng(808);
  int held = 0, fractal = 0;
  double worst = -1e300;
  for (int c = 0; c < 50; ++c) {
    const auto& src = sources[c % sources.size()];
    const PhiEvaluator phi(src.s, 1e-9);
    const double shift = 3.0 * rng.uniform();
    const Fn1 gamma = [&](double t) { return phi.slice(src.dir, t + shift); };
    const double b = std::abs(src.s.spectrum().eigenvalues(src.dir));
    double sigma = 0.0;
    for (const auto& e : slice_spectrum(src.s, src.dir).entries) sigma = std::max(sigma, std::abs(e.frequency));
    double rho = 0.5 + 60.0 * rng.uniform();
    if (c % 2 == 0 && sigma > 0.0) {
      // The slice's own top frequency, pushed toward fine scales.
      const int m = static_cast<int>(rng.next() % 4);
      rho = sigma * std::pow(b < 1.0 ? 1.0 / b : b, m);
    }
    const double phase = 2.0 * kPi * rng.uniform();
    const int n = 1 + static_cast<int>(rng.next() % 4);
    const auto r = variation_integral_check(gamma, rho, phase, n);
    if (r.holds) ++held;
    if (b < src.s.lambda()) ++fractal;
    worst = std::max(worst, kPi * std::abs(r.integral) - kQuadratureTolerance - r.var);
  }
  o.require(held == 50, std::to_string(held) + "/50 hold, " + std::to_string(fractal) +
                            " on fractal slices, worst margin " + g6(-worst));
  o.require(fractal > 0, "fractal-regime slices included");
  return o;
}

Outcome criterion_9() {
  Outcome o;
  EstimationParams light;
  light.anchors = 16;
  light.samples_per_interval = 256;
  light.graph_samples_per_edge = 5;

  bool exact = true;
  std::string dims;
  for (int k : {2, 3}) {
    const SkewProduct zero(k == 2 ? cat_matrix() : example_matrix(), 0.8, ForcingFunction());
    const auto rep = build_report(zero, light);
    for (const auto& sl : rep.slices) {
      exact = exact && std::abs(sl.measured.slope - 1.0) <= 1e-12 && sl.predicted == 1.0;
      if (sl.box_count) exact = exact && std::abs(sl.box_count->slope - 1.0) <= 1e-12;
    }
    exact = exact && std::abs(rep.graph.measured.slope - k) <= 1e-12 && rep.graph.predicted == k;
    dims += " k=" + std::to_string(k) + " graph " + g6(rep.graph.measured.slope);
  }
  o.require(exact, "p = 0 integral dimensions" + dims);

  const auto m = example_matrix();
  const auto sp = spectrum(m);
  const double lambda = 0.8, mu = sp.modulus(0), w = 1.0 / mu, theta = 0.3;
  // The class of w/mu collects q_{w/mu} + lambda q_w, so weight lambda at w/mu with
  // phase theta + pi cancels it exactly.
  const SkewProduct cancelled(m, lambda, ForcingFunction::eigen({{0, 1.0, w, theta}, {0, lambda, w / mu, theta + kPi}}));
  const auto r = classify_regime(cancelled);
  const auto witness = find_nonzero_g(slice_spectrum(cancelled, 0), lambda, sp.eigenvalues(0));
  const double pred = predicted_slice_dim(cancelled, 0, r);
  const double meas = measure_slice(cancelled, 0, r, EstimationParams{}).measured.slope;
  o.require(!witness, "cancellation: find_nonzero_g none");
  o.require(pred == 1.0, "predicted slice dim " + g6(pred));
  o.require(meas <= kSmoothFlagThreshold, "measured " + g6(meas));
  const SkewProduct variant(m, lambda, ForcingFunction::eigen({{0, 1.0, w, theta}, {0, 1.0 / lambda, w / mu, theta + kPi}}));
  const auto vw = find_nonzero_g(slice_spectrum(variant, 0), lambda, sp.eigenvalues(0));
  o.detail += std::string("; weight 1/lambda partner leaves g ") + (vw ? "nonzero" : "zero");

  bool rejected = false;
  try {
    build_product(load_config(fs::path(SKEWDIM_SOURCE_DIR) / "configs" / "lambda_on_modulus.cfg"));
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::LambdaOnEigenvalueModulus;
  }
  o.require(rejected, "lambda = |B_2| rejected");
  return o;
}

Outcome criterion_10() {
  Outcome o;
  AnalysisConfig c = load_config(fs::path(SKEWDIM_SOURCE_DIR) / "configs" / "cat_map.cfg");
  c.estimation.anchors = 16;
  c.estimation.samples_per_interval = 256;
  c.estimation.delta_min_log2 = -11;
  c.estimation.graph_delta_min_log2 = -8;
  const fs::path base = fs::temp_directory_path() / "skewdim_acceptance_determinism";
  fs::remove_all(base);
  std::ostringstream sink;
  cmd_dims(c, base / "a", sink);
  cmd_dims(c, base / "b", sink);
  int files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    const fs::path other = base / "b" / fs::relative(e.path(), base / "a");
    auto read = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    };
    ++files;
    if (fs::exists(other) && read(e.path()) == read(other)) ++same;
  }
  o.require(files > 0 && same == files, std::to_string(same) + "/" + std::to_string(files) + " CSVs identical");
  return o;
}

using Criterion = Outcome (*)();
constexpr Criterion kCriteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                   criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int n = 1; n <= 10; ++n) {
    if (only != 0 && n != only) continue;
    Outcome o;
    try {
      o = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
