#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewdim/boxdim.hpp"

namespace skewdim {

/// One column of a graph cover: boxes of side delta stacked upward from `base`.
struct CoverColumn {
  double x0 = 0.0;
  double base = 0.0;
  std::int64_t boxes = 1;
};

/// The cover of a 1-D graph used by box counting, column by column.
std::vector<CoverColumn> graph_cover(const Fn1& f, Interval interval, double delta, int samples = 64);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0 = black

  std::string pgm() const;  // binary P5
};

struct Polyline {
  std::vector<double> t;
  std::vector<double> y;
};

Polyline sample_polyline(const Fn1& f, Interval interval, int resolution);

/// Polyline (black) with the cover (gray outlines) on a white raster.
GrayImage rasterize_slice(const Polyline& line, const std::vector<CoverColumn>& cover, double delta,
                          int width, int height);
/// SVG with a path for the polyline and one rect per cover box; coordinates to 6 decimals.
std::string slice_svg(const Polyline& line, const std::vector<CoverColumn>& cover, double delta,
                      int width, int height);

/// Grayscale height map of values on an n x n grid (row-major, row 0 at the top).
GrayImage height_map(const std::vector<double>& values, int n);

/// 0.2 cos(7 pi x) + 0.1 cos(4 pi x), the textbook example of a column cover.
double figure_one_function(double x);

}  // namespace skewdim
