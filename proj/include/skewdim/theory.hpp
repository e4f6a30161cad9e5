#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewdim/boxdim.hpp"
#include "skewdim/fiber.hpp"

namespace skewdim {

inline constexpr double kSliceTolerance = 0.05;
inline constexpr double kGraphTolerance = 0.08;
inline constexpr double kStrictMargin = 0.1;
inline constexpr double kSmoothFlagThreshold = 1.1;

enum class DirectionRegime { Smooth, FractalCandidate };

struct FractalWitness {
  double sigma = 0.0;
  std::complex<double> value;
};

/// Directions are 0-based and sorted by |B_i|.
struct RegimeClassification {
  int l = 0;
  std::vector<DirectionRegime> regimes;
  std::optional<int> i0;
  std::vector<std::optional<FractalWitness>> witnesses;  // filled for i < l
};

RegimeClassification classify_regime(const SkewProduct& s);

/// 2 - ln lambda / ln |B_i| for a fractal candidate with a witness, else 1.
double predicted_slice_dim(const SkewProduct& s, int direction, const RegimeClassification& r);
/// k + 1 - ln lambda / ln |B_i0|, or k without a critical index.
double predicted_graph_dim(const SkewProduct& s, const RegimeClassification& r);
double sum_of_slice_dims(const SkewProduct& s, const RegimeClassification& r);

struct StrictInequality {
  bool holds = false;
  double gap = 0.0;              // sum of slices minus graph dimension
  std::vector<int> extra_fractal;  // the i1 directions beyond i0
};
StrictInequality strict_inequality_verdict(const SkewProduct& s, const RegimeClassification& r);

struct EstimationParams {
  int delta_min_log2 = -14;
  int delta_max_log2 = -4;
  int graph_delta_min_log2 = -10;
  int samples_per_column = 64;
  int graph_box_samples = 5;
  int anchors = 64;
  int interval_levels = 6;
  int interval_max_log2 = -6;
  int samples_per_interval = 1024;
  int graph_samples_per_edge = 9;
  double slice_domain = 6.283185307179586;
  double truncation_tol = 1e-9;
  std::uint64_t seed = 1;
  bool box_counting = true;
};

struct SliceReport {
  int direction = 0;
  double eigenvalue = 0.0;
  double predicted = 1.0;
  DirectionRegime regime = DirectionRegime::Smooth;
  std::string label;
  DimensionEstimate measured;  // variation exponent
  VariationProfile profile;
  std::optional<DimensionEstimate> box_count;
  BoxCountSeries series;
  bool discrepancy = false;
};

struct GraphReport {
  double predicted = 0.0;
  DimensionEstimate measured;  // box count for k <= 2, variation exponent otherwise
  std::optional<DimensionEstimate> variation;
  std::optional<DimensionEstimate> box_count;
  VariationProfile profile;
  BoxCountSeries series;
  bool discrepancy = false;
};

struct DimensionReport {
  RegimeClassification regime;
  std::vector<SliceReport> slices;
  GraphReport graph;
  double sum_predicted = 0.0;
  double sum_measured = 0.0;
  StrictInequality strict_predicted;
  bool strict_measured = false;
  bool discrepancy = false;
};

SliceReport measure_slice(const SkewProduct& s, int direction, const RegimeClassification& r,
                          const EstimationParams& params);
GraphReport measure_graph(const SkewProduct& s, const RegimeClassification& r,
                          const EstimationParams& params);
DimensionReport build_report(const SkewProduct& s, const EstimationParams& params);

}  // namespace skewdim
