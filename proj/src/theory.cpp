#include "skewdim/theory.hpp"

#include <cmath>

#include "skewdim/error.hpp"
#include "skewdim/harmonics.hpp"

namespace skewdim {
namespace {

double fractal_dim(double lambda, double modulus) { return 2.0 - std::log(lambda) / std::log(modulus); }

bool has_witness(const RegimeClassification& r, int i) {
  return i < static_cast<int>(r.witnesses.size()) && r.witnesses[i].has_value();
}

std::vector<double> interval_lengths(const EstimationParams& p) {
  return dyadic_ladder(p.interval_max_log2, p.interval_max_log2 - p.interval_levels + 1);
}

}  // namespace

RegimeClassification classify_regime(const SkewProduct& s) {
  RegimeClassification r;
  const int k = s.dim();
  r.l = fractal_candidate_count(s);
  r.regimes.assign(k, DirectionRegime::Smooth);
  r.witnesses.assign(k, std::nullopt);
  for (int i = 0; i < r.l; ++i) {
    r.regimes[i] = DirectionRegime::FractalCandidate;
    const auto found = find_nonzero_g(slice_spectrum(s, i), s.lambda(), s.spectrum().eigenvalues(i));
    if (found) {
      r.witnesses[i] = FractalWitness{found->sigma, found->g.value};
      if (!r.i0) r.i0 = i;
    }
  }
  return r;
}

double predicted_slice_dim(const SkewProduct& s, int direction, const RegimeClassification& r) {
  if (direction < 0 || direction >= s.dim()) throw Error(ErrorCode::InvalidArgument, "direction out of range");
  if (r.regimes[direction] == DirectionRegime::Smooth || !has_witness(r, direction)) return 1.0;
  return fractal_dim(s.lambda(), s.spectrum().modulus(direction));
}

double predicted_graph_dim(const SkewProduct& s, const RegimeClassification& r) {
  if (!r.i0) return s.dim();
  return s.dim() - 1 + fractal_dim(s.lambda(), s.spectrum().modulus(*r.i0));
}

double sum_of_slice_dims(const SkewProduct& s, const RegimeClassification& r) {
  double sum = 0.0;
  for (int i = 0; i < s.dim(); ++i) sum += predicted_slice_dim(s, i, r);
  return sum;
}

StrictInequality strict_inequality_verdict(const SkewProduct& s, const RegimeClassification& r) {
  StrictInequality v;
  if (!r.i0) return v;
  double expected_gap = 0.0;
  for (int i = *r.i0 + 1; i < r.l; ++i) {
    if (!has_witness(r, i)) continue;
    v.extra_fractal.push_back(i);
    expected_gap += fractal_dim(s.lambda(), s.spectrum().modulus(i)) - 1.0;
  }
  v.holds = !v.extra_fractal.empty();
  v.gap = sum_of_slice_dims(s, r) - predicted_graph_dim(s, r);
  if (std::abs(v.gap - expected_gap) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "slice sum and graph dimension disagree with the gap formula");
  return v;
}

SliceReport measure_slice(const SkewProduct& s, int direction, const RegimeClassification& r,
                          const EstimationParams& params) {
  SliceReport rep;
  rep.direction = direction;
  rep.eigenvalue = s.spectrum().eigenvalues(direction);
  rep.regime = r.regimes[direction];
  rep.predicted = predicted_slice_dim(s, direction, r);
  const bool vanishing = rep.regime == DirectionRegime::FractalCandidate && !has_witness(r, direction);
  rep.label = rep.regime == DirectionRegime::Smooth ? "smooth"
              : vanishing                           ? "predicted smooth (g = 0)"
                                                    : "fractal";

  const PhiEvaluator phi(s, params.truncation_tol);
  const Fn1 f = [&](double t) { return phi.slice(direction, t); };
  const auto lengths = interval_lengths(params);
  const auto anchors = lcg_anchors(params.seed + static_cast<std::uint64_t>(direction), params.anchors,
                                   {0.0, params.slice_domain});
  auto var = variation_exponent(f, anchors, lengths, params.samples_per_interval);
  rep.measured = var.estimate;
  rep.profile = std::move(var.profile);

  if (params.box_counting && s.dim() <= 2) {
    const auto deltas = dyadic_ladder(params.delta_max_log2, params.delta_min_log2);
    rep.series = box_count_series_1d(f, {0.0, 1.0}, deltas, params.samples_per_column);
    rep.box_count = fit_dimension(rep.series);
  }

  if (vanishing)
    rep.discrepancy = rep.measured.slope > kSmoothFlagThreshold;
  else
    rep.discrepancy = std::abs(rep.measured.slope - rep.predicted) > kSliceTolerance;
  return rep;
}

GraphReport measure_graph(const SkewProduct& s, const RegimeClassification& r, const EstimationParams& params) {
  GraphReport rep;
  const int k = s.dim();
  rep.predicted = predicted_graph_dim(s, r);
  const PhiEvaluator phi(s, params.truncation_tol);

  const FnK in_eigen = [&](const Vec& t) { return phi.at_eigen(t); };
  const Cube anchor_range{Vec::Zero(k), params.slice_domain};
  const auto anchors = lcg_anchors_kd(params.seed + 1000, params.anchors, anchor_range);
  const auto lengths = interval_lengths(params);
  auto var = variation_exponent_kd(in_eigen, anchors, lengths, params.samples_per_interval,
                                   params.graph_samples_per_edge);
  rep.variation = var.estimate;
  rep.profile = std::move(var.profile);
  rep.measured = var.estimate;

  if (params.box_counting && k <= 2) {
    const FnK on_torus = [&](const Vec& x) { return phi(s.from_standard(x)); };
    const auto deltas = dyadic_ladder(params.delta_max_log2, params.graph_delta_min_log2);
    rep.series = box_count_series_kd(on_torus, Cube{Vec::Zero(k), 1.0}, deltas, params.graph_box_samples);
    rep.box_count = fit_dimension(rep.series);
    rep.measured = *rep.box_count;
  }
  rep.discrepancy = std::abs(rep.measured.slope - rep.predicted) > kGraphTolerance;
  return rep;
}

DimensionReport build_report(const SkewProduct& s, const EstimationParams& params) {
  // The series tail must sit well below the finest box size.
  if (s.plan(params.truncation_tol).tail_bound > std::ldexp(1.0, params.delta_min_log2) / 100.0)
    throw Error(ErrorCode::InvalidArgument, "truncation tail exceeds delta_min / 100; lower truncation_tol");
  DimensionReport rep;
  rep.regime = classify_regime(s);
  for (int i = 0; i < s.dim(); ++i) rep.slices.push_back(measure_slice(s, i, rep.regime, params));
  rep.graph = measure_graph(s, rep.regime, params);
  rep.sum_predicted = sum_of_slice_dims(s, rep.regime);
  for (const auto& sl : rep.slices) rep.sum_measured += sl.measured.slope;
  rep.strict_predicted = strict_inequality_verdict(s, rep.regime);
  rep.strict_measured = rep.graph.measured.slope + kStrictMargin < rep.sum_measured;
  rep.discrepancy = rep.graph.discrepancy || rep.strict_measured != rep.strict_predicted.holds;
  for (const auto& sl : rep.slices) rep.discrepancy = rep.discrepancy || sl.discrepancy;
  return rep;
}

}  // namespace skewdim
