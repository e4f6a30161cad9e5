#include "skewdim/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "skewdim/error.hpp"
#include "skewdim/io.hpp"

namespace skewdim {
namespace {

constexpr std::uint8_t kCurve = 0;
constexpr std::uint8_t kBox = 160;
constexpr std::uint8_t kBackground = 255;

struct Frame {
  double t0, t1, y0, y1;
  int width, height;
  double px(double t) const { return (t - t0) / (t1 - t0) * (width - 1); }
  double py(double y) const { return (y1 - y) / (y1 - y0) * (height - 1); }
};

Frame frame_for(const Polyline& line, const std::vector<CoverColumn>& cover, double delta, int w, int h) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double y : line.y) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  double t1 = line.t.back();
  for (const auto& c : cover) {
    lo = std::min(lo, c.base);
    hi = std::max(hi, c.base + c.boxes * delta);
    t1 = std::max(t1, c.x0 + delta);
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {line.t.front(), t1, lo - pad, hi + pad, w, h};
}

void check_size(int width, int height) {
  if (width < 2 || height < 2 || static_cast<std::int64_t>(width) * height > (std::int64_t{1} << 26))
    throw Error(ErrorCode::ResourceLimit, "image size out of range");
}

void put(GrayImage& img, int x, int y, std::uint8_t v) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  auto& p = img.pixels[static_cast<std::size_t>(y) * img.width + x];
  p = std::min(p, v);
}

void segment(GrayImage& img, double xa, double ya, double xb, double yb, std::uint8_t v) {
  const int steps = static_cast<int>(std::ceil(std::max(std::abs(xb - xa), std::abs(yb - ya)))) + 1;
  for (int s = 0; s <= steps; ++s) {
    const double u = static_cast<double>(s) / steps;
    put(img, static_cast<int>(std::lround(xa + u * (xb - xa))), static_cast<int>(std::lround(ya + u * (yb - ya))), v);
  }
}

}  // namespace

std::vector<CoverColumn> graph_cover(const Fn1& f, Interval interval, double delta, int samples) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  const auto cols = static_cast<std::int64_t>(std::ceil(interval.length() / delta - 1e-9));
  if (cols > (1 << 20)) throw Error(ErrorCode::ResourceLimit, "too many cover columns");
  std::vector<CoverColumn> out;
  const int points = 2 * samples - 1;
  for (std::int64_t c = 0; c < std::max<std::int64_t>(cols, 1); ++c) {
    const double a = interval.lo + c * delta;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int m = 0; m < points; ++m) {
      const double v = f(a + delta * m / (points - 1));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const auto boxes = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi - lo) / delta - 1e-9)));
    out.push_back({a, lo, boxes});
  }
  return out;
}

std::string GrayImage::pgm() const {
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return out;
}

Polyline sample_polyline(const Fn1& f, Interval interval, int resolution) {
  if (resolution < 2 || resolution > (1 << 22)) throw Error(ErrorCode::ResourceLimit, "resolution out of range");
  Polyline line;
  line.t.resize(resolution);
  line.y.resize(resolution);
  parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t i) {
    const double t = i + 1 == static_cast<std::size_t>(resolution)
                         ? interval.hi
                         : interval.lo + interval.length() * static_cast<double>(i) / (resolution - 1);
    line.t[i] = t;
    line.y[i] = f(t);
  });
  return line;
}

GrayImage rasterize_slice(const Polyline& line, const std::vector<CoverColumn>& cover, double delta,
                          int width, int height) {
  check_size(width, height);
  GrayImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, kBackground)};
  const Frame fr = frame_for(line, cover, delta, width, height);
  for (const auto& c : cover) {
    for (std::int64_t b = 0; b < c.boxes; ++b) {
      const double x0 = fr.px(c.x0), x1 = fr.px(c.x0 + delta);
      const double y0 = fr.py(c.base + b * delta), y1 = fr.py(c.base + (b + 1) * delta);
      segment(img, x0, y0, x1, y0, kBox);
      segment(img, x0, y1, x1, y1, kBox);
      segment(img, x0, y0, x0, y1, kBox);
      segment(img, x1, y0, x1, y1, kBox);
    }
  }
  for (std::size_t i = 1; i < line.t.size(); ++i)
    segment(img, fr.px(line.t[i - 1]), fr.py(line.y[i - 1]), fr.px(line.t[i]), fr.py(line.y[i]), kCurve);
  return img;
}

std::string slice_svg(const Polyline& line, const std::vector<CoverColumn>& cover, double delta,
                      int width, int height) {
  check_size(width, height);
  const Frame fr = frame_for(line, cover, delta, width, height);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                    "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
                    " " + std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& c : cover) {
    for (std::int64_t b = 0; b < c.boxes; ++b) {
      const double x0 = fr.px(c.x0), x1 = fr.px(c.x0 + delta);
      const double ytop = fr.py(c.base + (b + 1) * delta), ybot = fr.py(c.base + b * delta);
      out += "<rect x=\"" + fmt_f6(x0) + "\" y=\"" + fmt_f6(ytop) + "\" width=\"" + fmt_f6(x1 - x0) +
             "\" height=\"" + fmt_f6(ybot - ytop) + "\" fill=\"none\" stroke=\"#a0a0a0\"/>\n";
    }
  }
  out += "<path fill=\"none\" stroke=\"black\" d=\"";
  for (std::size_t i = 0; i < line.t.size(); ++i) {
    out += i ? " L " : "M ";
    out += fmt_f6(fr.px(line.t[i])) + " " + fmt_f6(fr.py(line.y[i]));
  }
  out += "\"/>\n</svg>\n";
  return out;
}

GrayImage height_map(const std::vector<double>& values, int n) {
  check_size(n, n);
  if (values.size() != static_cast<std::size_t>(n) * n) throw Error(ErrorCode::InvalidArgument, "grid size mismatch");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, span = *mx - *mn;
  GrayImage img{n, n, std::vector<std::uint8_t>(values.size())};
  for (std::size_t i = 0; i < values.size(); ++i)
    img.pixels[i] = span > 0.0 ? static_cast<std::uint8_t>(std::lround(255.0 * (values[i] - lo) / span)) : 128;
  return img;
}

double figure_one_function(double x) {
  return 0.2 * std::cos(7.0 * std::numbers::pi * x) + 0.1 * std::cos(4.0 * std::numbers::pi * x);
}

}  // namespace skewdim
