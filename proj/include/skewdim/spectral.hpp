#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skewdim/types.hpp"

namespace skewdim {

inline constexpr double kHyperbolicityTol = 1e-9;
inline constexpr double kDistinctModulusTol = 1e-9;

/// Integer k x k matrix with |det| = 1, real simple spectrum and no eigenvalue
/// on the unit circle. Only obtainable through validate().
class HyperbolicToralMatrix {
 public:
  int dim() const { return static_cast<int>(entries_.rows()); }
  const IntMat& entries() const { return entries_; }
  /// Exact integer inverse (the matrix is unimodular).
  const IntMat& inverse() const { return inverse_; }
  std::int64_t determinant() const { return det_; }
  /// Coefficients of det(A - xI), ascending powers.
  const std::vector<std::int64_t>& characteristic() const { return char_poly_; }

  friend HyperbolicToralMatrix validate(const IntMat& entries);

 private:
  HyperbolicToralMatrix() = default;
  IntMat entries_;
  IntMat inverse_;
  std::int64_t det_ = 0;
  std::vector<std::int64_t> char_poly_;
};

/// Eigenstructure sorted by modulus. eigenvectors.col(i) is v_i (unit length,
/// first nonzero coordinate positive); dual.row(i) is w_i with w_i . v_m = delta_im.
struct Spectrum {
  Vec eigenvalues;
  Mat eigenvectors;
  Mat dual;
  int stable_count = 0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double modulus(int i) const { return std::abs(eigenvalues(i)); }
};

/// Exact coefficients of det(A - xI) in ascending powers; the leading one is (-1)^k.
std::vector<std::int64_t> char_poly(const IntMat& entries);

/// Faddeev-LeVerrier: characteristic polynomial together with the exact adjugate.
struct FaddeevLeverrier {
  std::vector<std::int64_t> monic;  // det(xI - A), ascending
  IntMat adjugate;                  // adj(A), so that A * adj(A) = det(A) I
};
FaddeevLeverrier faddeev_leverrier(const IntMat& entries);

/// Throws Error{DetNotUnimodular | EigenvalueOnUnitCircle | RepeatedOrComplexEigenvalue}.
HyperbolicToralMatrix validate(const IntMat& entries);
HyperbolicToralMatrix validate(int k, std::span<const std::int64_t> row_major);

/// Real eigenvalues in ascending modulus, polished in extended precision.
std::vector<long double> sorted_eigenvalues(std::span<const std::int64_t> char_coeffs);

Spectrum spectrum(const HyperbolicToralMatrix& a);

Vec to_eigen_coords(const Spectrum& s, const Vec& x);
Vec from_eigen_coords(const Spectrum& s, const Vec& t);

/// Eigenvectors and dual agree entrywise (determinism / sign convention check).
bool same_frame(const Spectrum& a, const Spectrum& b, double tol = 0.0);

}  // namespace skewdim
