#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "skewdim/fiber.hpp"

namespace skewdim {

/// Frequencies whose log-ratio to a power of |B_i| is within this of an integer match.
inline constexpr double kPowerMatchTol = 1e-9;
/// |g_sigma| above this counts as a genuine fractal witness (configurable per call).
inline constexpr double kNonzeroGThreshold = 1e-10;

struct SpectralEntry {
  double frequency = 0.0;
  std::complex<double> coeff;
};

/// Almost-periodic spectrum of q_i(t) = sum_a (q_i)_a e^{iat}.
struct SliceSpectrum {
  int direction = 0;
  std::vector<SpectralEntry> entries;  // sorted by |a|, then by a
  /// ln lambda / ln |B_i|; lies in (0,1) exactly in the fractal regime |B_i| < lambda.
  double alpha = 0.0;
};

/// Merges frequencies closer than 1e-9 (relative), drops zero coefficients, sorts.
SliceSpectrum make_spectrum(int direction, std::vector<SpectralEntry> entries, double alpha);

/// Lattice modes with sup-radius above lattice_radius are left out.
SliceSpectrum slice_spectrum(const SkewProduct& s, int direction, int lattice_radius);
SliceSpectrum slice_spectrum(const SkewProduct& s, int direction);

/// Composite trapezoid estimate of (1/2T) int_{-T}^{T} q(t) e^{-iat} dt on `samples` intervals.
std::complex<double> time_average_coefficient(const std::function<double(double)>& q, double a,
                                              double horizon, int samples);

struct H1Sum {
  double partial_sum = 0.0;
  double tail_estimate = 0.0;
};
H1Sum h1_sum(const SliceSpectrum& spec);

struct GSigmaTerm {
  int n = 0;
  double frequency = 0.0;
  std::complex<double> value;  // lambda^n (q_i)_a
};

struct GSigma {
  double sigma = 0.0;
  std::complex<double> value;
  std::vector<GSigmaTerm> terms;
};

/// g_sigma = sum_n lambda^n (q_i)_a over spectrum frequencies a = sigma B_i^n.
/// With B = 1/|B_i| and B_i > 0 this is sum_n lambda^n q_{sigma B^-n}. A
/// negative B_i alternates the sign of the matched frequency with n.
/// Throws ArgumentOutOfRegime unless |B_i| < lambda.
GSigma g_sigma(const SliceSpectrum& spec, double lambda, double eigenvalue, double sigma);

/// Indices into spec.entries grouped by orbit {a B_i^n}; each class starts with
/// its representative (largest |a|). Zero frequency is excluded.
std::vector<std::vector<std::size_t>> orbit_classes(const SliceSpectrum& spec, double eigenvalue);

struct NonzeroG {
  double sigma = 0.0;
  GSigma g;
};

std::optional<NonzeroG> find_nonzero_g(const SliceSpectrum& spec, double lambda, double eigenvalue,
                                       double threshold = kNonzeroGThreshold);

/// Number of directions with |B_i| < lambda.
int fractal_candidate_count(const SkewProduct& s);

/// Smallest 0-based i < l whose slice has a nonzero g coefficient.
std::optional<int> critical_index(const SkewProduct& s, int l);

/// Adds epsilon cos(t_i / |B_i|) for every candidate direction whose g vanishes.
SkewProduct genericity_perturbation(const SkewProduct& s, double epsilon);

/// CSV with header direction,frequency,re_coeff,im_coeff (direction is 1-based).
void write_spectrum_csv(std::ostream& out, std::span<const SliceSpectrum> spectra);

}  // namespace skewdim
