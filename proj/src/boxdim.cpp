#include "skewdim/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "skewdim/error.hpp"

namespace skewdim {
namespace {

constexpr double kCeilSlack = 1e-9;
constexpr double kFlatVariation = 1e-13;

std::int64_t column_boxes(double var, double delta) {
  const double boxes = std::ceil(var / delta - kCeilSlack);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(boxes));
}

std::int64_t column_count(double side, double delta) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(side / delta - kCeilSlack)));
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_ladder(std::span<const double> deltas) {
  if (deltas.empty()) throw Error(ErrorCode::InvalidArgument, "empty delta ladder");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    if (i && !(deltas[i] < deltas[i - 1])) throw Error(ErrorCode::InvalidArgument, "deltas must decrease");
  }
}

DimensionEstimate fit_profile(VariationProfile& profile, int domain_dim) {
  DimensionEstimate est;
  est.method = EstimateMethod::VariationExponent;
  est.scale_min = profile.entries.back().length;
  est.scale_max = profile.entries.front().length;
  std::vector<double> x, y;
  for (const auto& e : profile.entries) {
    if (e.var < kFlatVariation) continue;
    x.push_back(std::log(e.length));
    y.push_back(std::log(e.var));
  }
  if (x.size() < 2) {
    est.degenerate = true;
    est.slope = domain_dim;
    est.exponent = 1.0;
    est.r_squared = 1.0;
    return est;
  }
  const LinearFit fit = least_squares(x, y);
  est.exponent = fit.slope;
  est.intercept = fit.intercept;
  est.r_squared = fit.r_squared;
  est.slope = std::clamp(domain_dim + 1.0 - fit.slope, double(domain_dim), domain_dim + 1.0);
  return est;
}

void check_variation_inputs(std::size_t anchors, std::size_t levels, int samples) {
  if (levels < 6) throw Error(ErrorCode::InvalidArgument, "variation exponent needs at least 6 levels");
  if (anchors < 8) throw Error(ErrorCode::InvalidArgument, "variation exponent needs at least 8 anchors");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples per interval");
}

}  // namespace

bool BoxCountSeries::monotone() const {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].count < entries[i - 1].count) return false;
  return true;
}

std::string to_string(EstimateMethod m) {
  return m == EstimateMethod::BoxCount ? "box_count" : "variation_exponent";
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidArgument, "least squares needs >= 2 matched points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "least squares with constant abscissa");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * n / workers; i < (w + 1) * n / workers; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> dyadic_ladder(int max_log2, int min_log2) {
  if (min_log2 > max_log2) throw Error(ErrorCode::InvalidArgument, "min_log2 must not exceed max_log2");
  std::vector<double> out;
  for (int e = max_log2; e >= min_log2; --e) out.push_back(std::ldexp(1.0, e));
  return out;
}

double variation(const Fn1& f, Interval interval, int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "variation needs at least 2 samples");
  const int points = 2 * samples - 1;
  const double h = interval.length() / (points - 1);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int m = 0; m < points; ++m) {
    const double v = f(m == points - 1 ? interval.hi : interval.lo + m * h);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

std::int64_t box_count_graph_1d(const Fn1& f, Interval interval, double delta, int samples) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (samples < 16) throw Error(ErrorCode::InvalidArgument, "box counting needs at least 16 samples per column");
  const std::int64_t cols = column_count(interval.length(), delta);
  if (cols > (std::int64_t{1} << 30)) throw Error(ErrorCode::ResourceLimit, "too many columns");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cols));
  parallel_for(counts.size(), [&](std::size_t c) {
    const double a = interval.lo + static_cast<double>(c) * delta;
    counts[c] = column_boxes(variation(f, {a, a + delta}, samples), delta);
  });
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

BoxCountSeries box_count_series_1d(const Fn1& f, Interval interval, std::span<const double> deltas,
                                   int samples) {
  check_ladder(deltas);
  BoxCountSeries out;
  for (double d : deltas) out.entries.push_back({d, box_count_graph_1d(f, interval, d, samples)});
  return out;
}

BoxCountSeries box_count_series_kd(const FnK& f, const Cube& cube, std::span<const double> deltas,
                                   int samples) {
  check_ladder(deltas);
  const int k = static_cast<int>(cube.lo.size());
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cube has no dimensions");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (std::abs(deltas[i - 1] / deltas[i] - 2.0) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "k-dimensional ladder must be dyadic");
  const double fine = deltas.back();
  if (k * std::log2(1.0 / fine) > 30.0 + 1e-9)
    throw Error(ErrorCode::ResourceLimit, "k log2(1/delta) exceeds 30");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples per column edge");

  const int cells = (samples % 2 ? samples : samples + 1) - 1;  // grid cells per column edge
  const std::int64_t cols = column_count(cube.side, fine);
  const std::int64_t points = cols * cells + 1;
  const double h = fine / cells;

  std::int64_t slab_cols = 1;  // columns per slab (all axes but the first)
  std::int64_t slab_points = 1;
  for (int a = 1; a < k; ++a) {
    slab_cols *= cols;
    slab_points *= points;
  }
  const std::size_t total_cols = static_cast<std::size_t>(cols * slab_cols);
  std::vector<double> lo(total_cols), hi(total_cols);

  parallel_for(static_cast<std::size_t>(cols), [&](std::size_t c0) {
    std::vector<double> cmin(static_cast<std::size_t>(slab_cols), std::numeric_limits<double>::infinity());
    std::vector<double> cmax(static_cast<std::size_t>(slab_cols), -std::numeric_limits<double>::infinity());
    Vec x(k);
    std::vector<std::int64_t> idx(k);
    for (int i0 = 0; i0 <= cells; ++i0) {
      x(0) = cube.lo(0) + (static_cast<double>(c0) * cells + i0) * h;
      for (std::int64_t r = 0; r < slab_points; ++r) {
        std::int64_t rem = r;
        for (int a = k - 1; a >= 1; --a) {
          idx[a] = rem % points;
          rem /= points;
          x(a) = cube.lo(a) + static_cast<double>(idx[a]) * h;
        }
        const double v = f(x);
        // A grid point on a column boundary belongs to both neighbours.
        std::int64_t lows[kMaxDim], highs[kMaxDim];
        for (int a = 1; a < k; ++a) {
          highs[a] = std::min(idx[a] / cells, cols - 1);
          lows[a] = (idx[a] % cells == 0 && idx[a] > 0) ? idx[a] / cells - 1 : highs[a];
        }
        std::int64_t cur[kMaxDim];
        for (int a = 1; a < k; ++a) cur[a] = lows[a];
        while (true) {
          std::int64_t flat = 0;
          for (int a = 1; a < k; ++a) flat = flat * cols + cur[a];
          cmin[flat] = std::min(cmin[flat], v);
          cmax[flat] = std::max(cmax[flat], v);
          int a = k - 1;
          for (; a >= 1; --a) {
            if (cur[a] < highs[a]) {
              ++cur[a];
              break;
            }
            cur[a] = lows[a];
          }
          if (a < 1) break;
        }
      }
    }
    std::copy(cmin.begin(), cmin.end(), lo.begin() + c0 * slab_cols);
    std::copy(cmax.begin(), cmax.end(), hi.begin() + c0 * slab_cols);
  });

  BoxCountSeries out;
  out.entries.resize(deltas.size());
  std::int64_t n = cols;
  for (std::size_t level = deltas.size(); level-- > 0;) {
    const double d = deltas[level];
    std::int64_t count = 0;
    for (std::size_t c = 0; c < lo.size(); ++c) count += column_boxes(hi[c] - lo[c], d);
    out.entries[level] = {d, count};
    if (level == 0) break;
    const std::int64_t m = (n + 1) / 2;
    std::int64_t m_total = 1;
    for (int a = 0; a < k; ++a) m_total *= m;
    std::vector<double> nlo(static_cast<std::size_t>(m_total), std::numeric_limits<double>::infinity());
    std::vector<double> nhi(static_cast<std::size_t>(m_total), -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < lo.size(); ++c) {
      std::int64_t rem = static_cast<std::int64_t>(c), parent = 0, stride = 1;
      for (int a = 0; a < k; ++a) {
        parent += ((rem % n) / 2) * stride;
        rem /= n;
        stride *= m;
      }
      nlo[parent] = std::min(nlo[parent], lo[c]);
      nhi[parent] = std::max(nhi[parent], hi[c]);
    }
    lo.swap(nlo);
    hi.swap(nhi);
    n = m;
  }
  return out;
}

std::int64_t box_count_graph_kd(const FnK& f, const Cube& cube, double delta, int samples) {
  const double d[] = {delta};
  return box_count_series_kd(f, cube, d, samples).entries.front().count;
}

DimensionEstimate fit_dimension(const BoxCountSeries& series, int drop_coarse) {
  if (series.entries.size() < 5) throw Error(ErrorCode::InvalidArgument, "fit needs at least 5 levels");
  if (drop_coarse < 0 || series.entries.size() - drop_coarse < 2)
    throw Error(ErrorCode::InvalidArgument, "too many levels dropped");
  std::vector<double> x, y;
  for (std::size_t i = drop_coarse; i < series.entries.size(); ++i) {
    x.push_back(-std::log(series.entries[i].delta));
    y.push_back(std::log(static_cast<double>(series.entries[i].count)));
  }
  const LinearFit fit = least_squares(x, y);
  DimensionEstimate est;
  est.method = EstimateMethod::BoxCount;
  est.slope = fit.slope;
  est.intercept = fit.intercept;
  est.r_squared = fit.r_squared;
  est.scale_max = series.entries[drop_coarse].delta;
  est.scale_min = series.entries.back().delta;
  return est;
}

VariationExponentResult variation_exponent(const Fn1& f, std::span<const double> anchors,
                                           std::span<const double> lengths, int samples) {
  check_variation_inputs(anchors.size(), lengths.size(), samples);
  const std::size_t na = anchors.size();
  std::vector<double> vars(lengths.size() * na);
  parallel_for(vars.size(), [&](std::size_t idx) {
    const double L = lengths[idx / na];
    const double a = anchors[idx % na];
    vars[idx] = variation(f, {a, a + L}, samples);
  });
  VariationExponentResult out;
  out.profile.samples_per_interval = samples;
  for (std::size_t l = 0; l < lengths.size(); ++l)
    out.profile.entries.push_back(
        {lengths[l], median(std::vector<double>(vars.begin() + l * na, vars.begin() + (l + 1) * na))});
  out.estimate = fit_profile(out.profile, 1);
  return out;
}

VariationExponentResult variation_exponent_kd(const FnK& f, std::span<const Vec> anchors,
                                              std::span<const double> lengths, int samples,
                                              int grid_per_edge) {
  check_variation_inputs(anchors.size(), lengths.size(), samples);
  if (grid_per_edge < 2) throw Error(ErrorCode::InvalidArgument, "grid_per_edge must be at least 2");
  const int k = static_cast<int>(anchors.front().size());
  std::int64_t grid_total = 1;
  for (int a = 0; a < k; ++a) grid_total *= grid_per_edge;
  if (grid_total > (std::int64_t{1} << 24)) throw Error(ErrorCode::ResourceLimit, "cube grid too large");

  const std::size_t na = anchors.size();
  std::vector<double> vars(lengths.size() * na);
  parallel_for(vars.size(), [&](std::size_t idx) {
    const double L = lengths[idx / na];
    const Vec& base = anchors[idx % na];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto take = [&](const Vec& x) {
      const double v = f(x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    Vec x(k);
    for (std::int64_t g = 0; g < grid_total; ++g) {
      std::int64_t rem = g;
      for (int a = 0; a < k; ++a) {
        x(a) = base(a) + L * static_cast<double>(rem % grid_per_edge) / (grid_per_edge - 1);
        rem /= grid_per_edge;
      }
      take(x);
    }
    const int points = 2 * samples - 1;
    for (int a = 0; a < k; ++a) {
      x = base;
      for (int m = 1; m < points - 1; ++m) {
        x(a) = base(a) + L * m / (points - 1);
        take(x);
      }
    }
    vars[idx] = hi - lo;
  });
  VariationExponentResult out;
  out.profile.samples_per_interval = samples;
  for (std::size_t l = 0; l < lengths.size(); ++l)
    out.profile.entries.push_back(
        {lengths[l], median(std::vector<double>(vars.begin() + l * na, vars.begin() + (l + 1) * na))});
  out.estimate = fit_profile(out.profile, k);
  return out;
}

std::vector<double> lcg_anchors(std::uint64_t seed, int count, Interval range) {
  Lcg64 rng(seed);
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (auto& a : out) a = range.lo + rng.uniform() * range.length();
  return out;
}

std::vector<Vec> lcg_anchors_kd(std::uint64_t seed, int count, const Cube& range) {
  Lcg64 rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    Vec a(range.lo.size());
    for (Eigen::Index d = 0; d < a.size(); ++d) a(d) = range.lo(d) + rng.uniform() * range.side;
    out.push_back(a);
  }
  return out;
}

VariationIntegral variation_integral_check(const Fn1& gamma, double rho, double phase, int n, int samples) {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  samples = std::max(samples, 10000);
  const double length = 2.0 * std::numbers::pi * n / rho;
  const int intervals = samples - 1;
  const double h = length / intervals;
  double acc = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int m = 0; m <= intervals; ++m) {
    const double t = m == intervals ? length : m * h;
    const double g = gamma(t);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
    acc += ((m == 0 || m == intervals) ? 0.5 : 1.0) * g * std::cos(rho * t + phase);
  }
  VariationIntegral out;
  out.integral = acc * h / length;
  out.var = hi - lo;
  out.holds = out.var >= std::numbers::pi * std::abs(out.integral) - kQuadratureTolerance;
  return out;
}

}  // namespace skewdim
