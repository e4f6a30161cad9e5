#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skewdim/types.hpp"

namespace skewdim {

using Fn1 = std::function<double(double)>;
using FnK = std::function<double(const Vec&)>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// Axis-aligned cube [lo, lo + side]^k.
struct Cube {
  Vec lo;
  double side = 1.0;
};

struct BoxCountEntry {
  double delta = 0.0;
  std::int64_t count = 0;
};

/// Entries ordered by strictly decreasing delta.
struct BoxCountSeries {
  std::vector<BoxCountEntry> entries;
  bool monotone() const;
};

enum class EstimateMethod { BoxCount, VariationExponent };
std::string to_string(EstimateMethod m);

struct DimensionEstimate {
  double slope = 0.0;     // the dimension
  double exponent = 0.0;  // variation exponent a (variation method only)
  double intercept = 0.0;
  double r_squared = 0.0;
  double scale_min = 0.0;
  double scale_max = 0.0;
  EstimateMethod method = EstimateMethod::BoxCount;
  bool degenerate = false;
};

struct VariationEntry {
  double length = 0.0;
  double var = 0.0;
};

struct VariationProfile {
  std::vector<VariationEntry> entries;
  int samples_per_interval = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Named 64-bit LCG so anchor placement is reproducible everywhere.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }
  /// Top 53 bits as a double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Runs body(i) for i in [0, n) on a static partition; results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// 2^max_log2, 2^(max_log2-1), ..., 2^min_log2.
std::vector<double> dyadic_ladder(int max_log2, int min_log2);

/// sup - inf over M equispaced samples and their midpoints (2M - 1 points).
/// A sampled lower bound of the true variation.
double variation(const Fn1& f, Interval interval, int samples);

/// Column cover: ceil(length/delta) columns, each needing max(1, ceil(var/delta)) boxes.
std::int64_t box_count_graph_1d(const Fn1& f, Interval interval, double delta, int samples);
BoxCountSeries box_count_series_1d(const Fn1& f, Interval interval, std::span<const double> deltas,
                                   int samples);

/// Columns are k-cubes of side delta sampled on an M^k lattice (corners included);
/// an even M is raised by one so the center is a sample. Adjacent columns share
/// their boundary samples. Throws ResourceLimit when k log2(1/delta) > 30.
std::int64_t box_count_graph_kd(const FnK& f, const Cube& cube, double delta, int samples);
/// Dyadic ladder evaluated once on the finest grid; coarser columns take the
/// min/max of their children.
BoxCountSeries box_count_series_kd(const FnK& f, const Cube& cube, std::span<const double> deltas,
                                   int samples);

/// Slope of log N against -log delta after dropping the `drop_coarse` largest deltas.
DimensionEstimate fit_dimension(const BoxCountSeries& series, int drop_coarse = 2);

struct VariationExponentResult {
  DimensionEstimate estimate;
  VariationProfile profile;
};

/// Median over anchors of var on [anchor, anchor + L]; log-log slope gives a and
/// the dimension 2 - a, clamped to [1, 2]. Requires >= 6 levels and >= 8 anchors.
VariationExponentResult variation_exponent(const Fn1& f, std::span<const double> anchors,
                                           std::span<const double> lengths, int samples);

/// k-dimensional version on cubes [anchor, anchor + L]^k. Each cube is sampled on
/// a grid_per_edge^k lattice together with `samples`-point segments along every
/// axis through the anchor. Dimension (k + 1) - a, clamped to [k, k + 1].
VariationExponentResult variation_exponent_kd(const FnK& f, std::span<const Vec> anchors,
                                              std::span<const double> lengths, int samples,
                                              int grid_per_edge);

std::vector<double> lcg_anchors(std::uint64_t seed, int count, Interval range);
std::vector<Vec> lcg_anchors_kd(std::uint64_t seed, int count, const Cube& range);

struct VariationIntegral {
  double integral = 0.0;
  double var = 0.0;
  bool holds = false;
};

inline constexpr double kQuadratureTolerance = 1e-3;

/// I = (rho / 2 pi n) int_0^{2 pi n / rho} gamma(t) cos(rho t + phase) dt by the
/// trapezoid rule; holds when var >= pi |I| - 1e-3 on the same interval.
VariationIntegral variation_integral_check(const Fn1& gamma, double rho, double phase, int n,
                                           int samples = 20000);

}  // namespace skewdim
