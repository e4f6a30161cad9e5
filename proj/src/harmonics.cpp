#include "skewdim/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewdim/error.hpp"
#include "skewdim/io.hpp"

namespace skewdim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool entry_order(const SpectralEntry& x, const SpectralEntry& y) {
  if (std::abs(x.frequency) != std::abs(y.frequency)) return std::abs(x.frequency) < std::abs(y.frequency);
  return x.frequency < y.frequency;
}

/// Integer n with a = sigma * B^n (B signed), if any.
std::optional<int> match_power(double a, double sigma, double eigenvalue) {
  if (a == 0.0 || sigma == 0.0) return std::nullopt;
  const double ratio = a / sigma;
  const double x = std::log(std::abs(ratio)) / std::log(std::abs(eigenvalue));
  const double n = std::round(x);
  if (std::abs(x - n) > kPowerMatchTol) return std::nullopt;
  const int ni = static_cast<int>(n);
  const bool positive = eigenvalue > 0.0 || ni % 2 == 0;
  if ((ratio > 0.0) != positive) return std::nullopt;
  return ni;
}

void require_regime(double lambda, double eigenvalue) {
  if (!(std::abs(eigenvalue) < lambda))
    throw Error(ErrorCode::ArgumentOutOfRegime, "g_sigma requires |B_i| < lambda");
}

}  // namespace

SliceSpectrum make_spectrum(int direction, std::vector<SpectralEntry> entries, double alpha) {
  std::sort(entries.begin(), entries.end(),
            [](const SpectralEntry& x, const SpectralEntry& y) { return x.frequency < y.frequency; });
  std::vector<SpectralEntry> merged;
  for (const auto& e : entries) {
    if (!merged.empty()) {
      auto& last = merged.back();
      if (std::abs(e.frequency - last.frequency) <= 1e-9 * std::max(1.0, std::abs(e.frequency))) {
        last.coeff += e.coeff;
        continue;
      }
    }
    merged.push_back(e);
  }
  std::erase_if(merged, [](const SpectralEntry& e) { return std::abs(e.coeff) < 1e-14; });
  std::sort(merged.begin(), merged.end(), entry_order);
  return SliceSpectrum{direction, std::move(merged), alpha};
}

SliceSpectrum slice_spectrum(const SkewProduct& s, int direction, int lattice_radius) {
  const int k = s.dim();
  if (direction < 0 || direction >= k) throw Error(ErrorCode::InvalidArgument, "direction out of range");
  const Vec v = s.spectrum().eigenvectors.col(direction);
  const Vec xbar = s.base_point_standard();
  const Vec& tbar = s.base_point();

  std::vector<SpectralEntry> entries;
  for (const auto& m : s.forcing().lattice_modes()) {
    if (m.j.cwiseAbs().maxCoeff() > lattice_radius) continue;
    const Vec j = m.j.cast<double>();
    const double a = kTwoPi * j.dot(v);
    entries.push_back({a, m.coeff * std::polar(1.0, kTwoPi * j.dot(xbar))});
  }
  for (const auto& m : s.forcing().eigen_modes()) {
    if (m.direction == direction && m.frequency != 0.0) {
      const double shift = m.phase + m.frequency * tbar(direction);
      entries.push_back({m.frequency, 0.5 * m.amplitude * std::polar(1.0, shift)});
      entries.push_back({-m.frequency, 0.5 * m.amplitude * std::polar(1.0, -shift)});
    } else {
      entries.push_back({0.0, m.amplitude * std::cos(m.frequency * tbar(m.direction) + m.phase)});
    }
  }
  const double alpha = std::log(s.lambda()) / std::log(s.spectrum().modulus(direction));
  return make_spectrum(direction, std::move(entries), alpha);
}

SliceSpectrum slice_spectrum(const SkewProduct& s, int direction) {
  return slice_spectrum(s, direction, s.forcing().max_lattice_radius());
}

std::complex<double> time_average_coefficient(const std::function<double(double)>& q, double a,
                                              double horizon, int samples) {
  if (!(horizon > 0.0) || samples < 1) throw Error(ErrorCode::InvalidArgument, "horizon and samples must be positive");
  const double h = 2.0 * horizon / samples;
  std::complex<double> acc = 0.0;
  for (int m = 0; m <= samples; ++m) {
    const double t = -horizon + m * h;
    const double w = (m == 0 || m == samples) ? 0.5 : 1.0;
    acc += w * q(t) * std::polar(1.0, -a * t);
  }
  return acc * h / (2.0 * horizon);
}

H1Sum h1_sum(const SliceSpectrum& spec) {
  H1Sum out;
  for (const auto& e : spec.entries) out.partial_sum += std::abs(e.coeff) * std::pow(std::abs(e.frequency), spec.alpha);
  return out;
}

GSigma g_sigma(const SliceSpectrum& spec, double lambda, double eigenvalue, double sigma) {
  require_regime(lambda, eigenvalue);
  if (sigma == 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be nonzero");
  GSigma g;
  g.sigma = sigma;
  for (const auto& e : spec.entries) {
    const auto n = match_power(e.frequency, sigma, eigenvalue);
    if (!n) continue;
    const std::complex<double> term = std::pow(lambda, *n) * e.coeff;
    g.terms.push_back({*n, e.frequency, term});
    g.value += term;
  }
  return g;
}

std::vector<std::vector<std::size_t>> orbit_classes(const SliceSpectrum& spec, double eigenvalue) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < spec.entries.size(); ++i)
    if (spec.entries[i].frequency != 0.0) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const double fx = spec.entries[x].frequency, fy = spec.entries[y].frequency;
    if (std::abs(fx) != std::abs(fy)) return std::abs(fx) > std::abs(fy);
    return fx > fy;
  });
  std::vector<bool> taken(spec.entries.size(), false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t idx : order) {
    if (taken[idx]) continue;
    std::vector<std::size_t> cls{idx};
    taken[idx] = true;
    const double rep = spec.entries[idx].frequency;
    for (std::size_t other : order) {
      if (taken[other]) continue;
      if (match_power(spec.entries[other].frequency, rep, eigenvalue)) {
        cls.push_back(other);
        taken[other] = true;
      }
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::optional<NonzeroG> find_nonzero_g(const SliceSpectrum& spec, double lambda, double eigenvalue,
                                       double threshold) {
  require_regime(lambda, eigenvalue);
  for (const auto& cls : orbit_classes(spec, eigenvalue)) {
    const double sigma = spec.entries[cls.front()].frequency;
    GSigma g = g_sigma(spec, lambda, eigenvalue, sigma);
    if (std::abs(g.value) > threshold) return NonzeroG{sigma, std::move(g)};
  }
  return std::nullopt;
}

int fractal_candidate_count(const SkewProduct& s) {
  int l = 0;
  for (int i = 0; i < s.dim(); ++i)
    if (s.spectrum().modulus(i) < s.lambda()) ++l;
  return l;
}

std::optional<int> critical_index(const SkewProduct& s, int l) {
  if (l < 0 || l > fractal_candidate_count(s))
    throw Error(ErrorCode::InvalidArgument, "l exceeds the number of directions with |B_i| < lambda");
  for (int i = 0; i < l; ++i)
    if (find_nonzero_g(slice_spectrum(s, i), s.lambda(), s.spectrum().eigenvalues(i))) return i;
  return std::nullopt;
}

SkewProduct genericity_perturbation(const SkewProduct& s, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const int l = fractal_candidate_count(s);
  std::vector<EigenMode> added;
  for (int i = 0; i < l; ++i)
    if (!find_nonzero_g(slice_spectrum(s, i), s.lambda(), s.spectrum().eigenvalues(i)))
      added.push_back({i, epsilon, 1.0 / s.spectrum().modulus(i), 0.0});
  if (added.empty()) return s;
  SkewProduct out = s.with_forcing(s.forcing().plus(ForcingFunction::eigen(std::move(added))));
  for (int i = 0; i < l; ++i)
    if (!find_nonzero_g(slice_spectrum(out, i), out.lambda(), out.spectrum().eigenvalues(i)))
      throw Error(ErrorCode::InvalidArgument, "perturbation failed to create a fractal witness");
  return out;
}

void write_spectrum_csv(std::ostream& out, std::span<const SliceSpectrum> spectra) {
  out << "direction,frequency,re_coeff,im_coeff\n";
  for (const auto& spec : spectra)
    for (const auto& e : spec.entries)
      out << spec.direction + 1 << ',' << fmt_g9(e.frequency) << ',' << fmt_g9(e.coeff.real()) << ','
          << fmt_g9(e.coeff.imag()) << '\n';
}

}  // namespace skewdim
