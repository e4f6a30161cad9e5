#include "skewdim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewdim/boxdim.hpp"
#include "skewdim/harmonics.hpp"
#include "skewdim/io.hpp"
#include "skewdim/render.hpp"
#include "skewdim/theory.hpp"
#include "skewdim/verify.hpp"

namespace skewdim {
namespace {

std::string series_csv(const BoxCountSeries& s) {
  std::string out = "delta,count\n";
  for (const auto& e : s.entries) out += fmt_g9(e.delta) + ',' + std::to_string(e.count) + '\n';
  return out;
}

std::string profile_csv(const VariationProfile& p) {
  std::string out = "L,var\n";
  for (const auto& e : p.entries) out += fmt_g9(e.length) + ',' + fmt_g9(e.var) + '\n';
  return out;
}

void add_estimate(Report& r, const std::string& prefix, const DimensionEstimate& e) {
  r.add(prefix + "slope", e.slope);
  r.add(prefix + "intercept", e.intercept);
  r.add(prefix + "r2", e.r_squared);
  r.add(prefix + "delta_min", e.scale_min);
  r.add(prefix + "delta_max", e.scale_max);
  r.add(prefix + "method", to_string(e.method));
  if (e.degenerate) r.add(prefix + "degenerate", true);
}

std::string regime_name(DirectionRegime d) {
  return d == DirectionRegime::Smooth ? "smooth" : "fractal_candidate";
}

int slice_target(std::string_view target, int k) {
  std::istringstream in{std::string(target)};
  std::string word;
  int i = 0;
  if (!(in >> word >> i) || word != "slice" || i < 1 || i > k)
    throw Error(ErrorCode::InvalidArgument, "render target must be 'slice <1..k>', 'graph' or 'figure1'");
  return i - 1;
}

void write_cover_outputs(const std::filesystem::path& dir, const std::string& stem, const Polyline& line,
                         const std::vector<CoverColumn>& cover, double delta, int resolution) {
  std::string csv = "t,phi\n";
  for (std::size_t i = 0; i < line.t.size(); ++i) csv += fmt_g9(line.t[i]) + ',' + fmt_g9(line.y[i]) + '\n';
  write_file_atomic(dir / (stem + ".csv"), csv);
  std::string cov = "column,x0,base,boxes\n";
  for (std::size_t c = 0; c < cover.size(); ++c)
    cov += std::to_string(c + 1) + ',' + fmt_g9(cover[c].x0) + ',' + fmt_g9(cover[c].base) + ',' +
           std::to_string(cover[c].boxes) + '\n';
  write_file_atomic(dir / (stem + "_cover.csv"), cov);
  const int width = std::clamp(resolution, 64, 2048);
  const int height = std::max(64, width / 2);
  write_file_atomic(dir / (stem + ".pgm"), rasterize_slice(line, cover, delta, width, height).pgm());
  write_file_atomic(dir / (stem + ".svg"), slice_svg(line, cover, delta, width, height));
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::TruncationTooDeep:
    case ErrorCode::ResourceLimit:
    case ErrorCode::IoError:
      return kExitResource;
    default:
      return kExitValidation;
  }
}

int cmd_spectrum(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out) {
  const SkewProduct s = build_product(config);
  const Spectrum& sp = s.spectrum();
  const int k = s.dim();
  Report r;
  r.section("spectrum");
  r.add("k", static_cast<long long>(k));
  for (int i = 0; i < k; ++i) {
    r.add("eigenvalue." + std::to_string(i + 1), sp.eigenvalues(i));
    r.add("modulus." + std::to_string(i + 1), sp.modulus(i));
  }
  r.add("stable_count", static_cast<long long>(sp.stable_count));
  r.add("determinant", static_cast<long long>(s.matrix().determinant()));
  r.section("regime");
  r.add("lambda", s.lambda());
  r.add("l", static_cast<long long>(fractal_candidate_count(s)));
  out << r.str();

  std::string csv = "index,eigenvalue";
  for (int c = 0; c < k; ++c) csv += ",v" + std::to_string(c + 1);
  csv += '\n';
  for (int i = 0; i < k; ++i) {
    csv += std::to_string(i + 1) + ',' + fmt_g9(sp.eigenvalues(i));
    for (int c = 0; c < k; ++c) csv += ',' + fmt_g9(sp.eigenvectors(c, i));
    csv += '\n';
  }
  write_file_atomic(dir / "eigenvectors.csv", csv);

  std::vector<SliceSpectrum> spectra;
  for (int i = 0; i < k; ++i) spectra.push_back(slice_spectrum(s, i));
  std::ostringstream spec;
  write_spectrum_csv(spec, spectra);
  write_file_atomic(dir / "slice_spectra.csv", spec.str());
  return kExitOk;
}

int cmd_render(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out) {
  const RenderParams& rp = config.render;
  if (rp.resolution < 2 || rp.resolution > (1 << 20)) throw Error(ErrorCode::ResourceLimit, "resolution out of range");
  if (!(rp.delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "render.delta must be positive");

  if (rp.target == "figure1") {
    const Interval dom{0.0, 1.0};
    const Polyline line = sample_polyline(figure_one_function, dom, rp.resolution);
    const auto cover = graph_cover(figure_one_function, dom, rp.delta);
    write_cover_outputs(dir, "figure1", line, cover, rp.delta, rp.resolution);
    std::int64_t total = 0;
    for (const auto& c : cover) total += c.boxes;
    out << "figure1 columns = " << cover.size() << ", boxes = " << total << '\n';
    return kExitOk;
  }

  const SkewProduct s = build_product(config);
  const PhiEvaluator phi(s, config.estimation.truncation_tol);
  if (rp.target == "graph") {
    if (s.dim() > 2) throw Error(ErrorCode::InvalidArgument, "graph rendering needs k <= 2");
    const int n = rp.resolution;
    if (static_cast<std::int64_t>(n) * n > (std::int64_t{1} << 24)) throw Error(ErrorCode::ResourceLimit, "graph grid too large");
    std::vector<double> values(static_cast<std::size_t>(n) * n);
    parallel_for(values.size(), [&](std::size_t idx) {
      Vec x(2);
      x << static_cast<double>(idx % n) / (n - 1), 1.0 - static_cast<double>(idx / n) / (n - 1);
      values[idx] = phi(s.from_standard(x));
    });
    std::string csv = "t1,t2,phi\n";
    for (std::size_t idx = 0; idx < values.size(); ++idx)
      csv += fmt_g9(static_cast<double>(idx % n) / (n - 1)) + ',' +
             fmt_g9(1.0 - static_cast<double>(idx / n) / (n - 1)) + ',' + fmt_g9(values[idx]) + '\n';
    write_file_atomic(dir / "graph.csv", csv);
    write_file_atomic(dir / "graph.pgm", height_map(values, n).pgm());
    out << "graph samples = " << values.size() << '\n';
    return kExitOk;
  }

  const int i = slice_target(rp.target, s.dim());
  const Fn1 f = [&](double t) { return phi.slice(i, t); };
  const Interval dom{0.0, rp.domain};
  const Polyline line = sample_polyline(f, dom, rp.resolution);
  const auto cover = graph_cover(f, dom, rp.delta);
  write_cover_outputs(dir, "slice_" + std::to_string(i + 1), line, cover, rp.delta, rp.resolution);
  out << "slice " << i + 1 << " rows = " << line.t.size() << '\n';
  return kExitOk;
}

int cmd_dims(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out) {
  const SkewProduct s = build_product(config);
  const DimensionReport rep = build_report(s, config.estimation);
  const int k = s.dim();

  Report r;
  r.section("config");
  for (const auto& [key, value] : config.entries) r.add(key, value);
  r.section("regime");
  r.add("lambda", s.lambda());
  r.add("l", static_cast<long long>(rep.regime.l));
  r.add("i0", rep.regime.i0 ? std::to_string(*rep.regime.i0 + 1) : std::string("none"));
  for (int i = 0; i < k; ++i) {
    const std::string d = std::to_string(i + 1);
    r.add("direction." + d, regime_name(rep.regime.regimes[i]));
    if (rep.regime.witnesses[i]) {
      r.add("witness." + d + ".sigma", rep.regime.witnesses[i]->sigma);
      r.add("witness." + d + ".abs_g", std::abs(rep.regime.witnesses[i]->value));
    }
  }

  std::string slices = "direction,eigenvalue,modulus,regime,predicted,measured,r2,box_count,discrepancy\n";
  for (const auto& sl : rep.slices) {
    const std::string d = std::to_string(sl.direction + 1);
    r.section("slice." + d);
    r.add("eigenvalue", sl.eigenvalue);
    r.add("eigenvalue_sign", std::string(sl.eigenvalue < 0 ? "negative" : "positive"));
    r.add("label", sl.label);
    r.add("predicted", sl.predicted);
    add_estimate(r, "measured.", sl.measured);
    if (sl.box_count) add_estimate(r, "box_count.", *sl.box_count);
    r.add("discrepancy", sl.discrepancy);
    slices += d + ',' + fmt_g9(sl.eigenvalue) + ',' + fmt_g9(std::abs(sl.eigenvalue)) + ',' +
              regime_name(sl.regime) + ',' + fmt_g9(sl.predicted) + ',' + fmt_g9(sl.measured.slope) + ',' +
              fmt_g9(sl.measured.r_squared) + ',' + (sl.box_count ? fmt_g9(sl.box_count->slope) : std::string()) +
              ',' + (sl.discrepancy ? "true" : "false") + '\n';
    write_file_atomic(dir / "variation" / ("slice_" + d + ".csv"), profile_csv(sl.profile));
    if (sl.box_count) write_file_atomic(dir / "boxcounts" / ("slice_" + d + ".csv"), series_csv(sl.series));
  }
  write_file_atomic(dir / "slices.csv", slices);

  r.section("graph");
  r.add("predicted", rep.graph.predicted);
  add_estimate(r, "measured.", rep.graph.measured);
  if (rep.graph.variation) add_estimate(r, "variation.", *rep.graph.variation);
  r.add("discrepancy", rep.graph.discrepancy);
  write_file_atomic(dir / "variation" / "graph.csv", profile_csv(rep.graph.profile));
  if (rep.graph.box_count) write_file_atomic(dir / "boxcounts" / "graph.csv", series_csv(rep.graph.series));

  r.section("sum_of_slices");
  r.add("predicted", rep.sum_predicted);
  r.add("measured", rep.sum_measured);
  r.add("strict_inequality_predicted", rep.strict_predicted.holds);
  r.add("predicted_gap", rep.strict_predicted.gap);
  r.add("strict_inequality_measured", rep.strict_measured);
  r.section("verdict");
  r.add("discrepancy", rep.discrepancy);

  const std::string text = r.str();
  write_file_atomic(dir / "report.txt", text);
  out << text;
  return rep.discrepancy ? kExitDiscrepancy : kExitOk;
}

int cmd_verify(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out) {
  const SkewProduct s = build_product(config);
  VerifyOptions opt;
  opt.truncation_tol = config.estimation.truncation_tol;
  opt.seed = config.estimation.seed;
  opt.tamper_eigenvector_sign = config.tamper_eigenvector_sign;
  const auto results = run_invariant_suite(s, opt);
  bool all = true;
  std::string csv = "invariant,passed,residual,detail\n";
  for (const auto& res : results) {
    all = all && res.passed;
    out << (res.passed ? "PASS " : "FAIL ") << res.name << " residual=" << fmt_g9(res.residual) << " ("
        << res.detail << ")\n";
    csv += res.name + ',' + (res.passed ? "true" : "false") + ',' + fmt_g9(res.residual) + ',' + res.detail + '\n';
  }
  write_file_atomic(dir / "verify.csv", csv);
  return all ? kExitOk : kExitDiscrepancy;
}

int run_command(std::string_view name, const AnalysisConfig& config, const std::filesystem::path& dir,
                std::ostream& out, std::ostream& err) {
  try {
    if (name == "spectrum") return cmd_spectrum(config, dir, out);
    if (name == "render") return cmd_render(config, dir, out);
    if (name == "dims") return cmd_dims(config, dir, out);
    if (name == "verify") return cmd_verify(config, dir, out);
    err << "unknown command: " << name << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace skewdim
