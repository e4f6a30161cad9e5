#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "skewdim/spectral.hpp"
#include "skewdim/types.hpp"

namespace skewdim {

/// Point of T^k as 64-bit fixed-point fractions: coordinate c is c / 2^64.
/// Integer matrices act exactly through wrapping arithmetic.
using TorusPoint = VectorK<std::uint64_t>;

TorusPoint to_torus(const Vec& x);
Vec from_torus(const TorusPoint& p);
TorusPoint apply(const IntMat& m, const TorusPoint& p);

/// p_j for one lattice frequency j in Z^k; p(x) = sum_j p_j exp(2 pi i j.x).
struct LatticeMode {
  IntVec j;
  std::complex<double> coeff;
};

/// a cos(omega t_d + theta) in eigen coordinate d (0-based).
struct EigenMode {
  int direction = 0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

/// Real trigonometric polynomial p. Lattice modes are periodic on T^k; eigen
/// modes live on R^k in eigen coordinates and are not reduced mod 1. Both may
/// be present at once (a perturbed lattice forcing is such a sum).
class ForcingFunction {
 public:
  ForcingFunction() = default;

  /// Merges repeated j, completes missing conjugates, and rejects inconsistent
  /// pairs (p_{-j} != conj p_j) or a non-real constant term.
  static ForcingFunction lattice(std::vector<LatticeMode> modes);
  static ForcingFunction eigen(std::vector<EigenMode> modes);

  ForcingFunction plus(const ForcingFunction& other) const;

  /// Full conjugate-symmetric set, sorted lexicographically by j.
  const std::vector<LatticeMode>& lattice_modes() const { return lattice_; }
  const std::vector<EigenMode>& eigen_modes() const { return eigen_; }

  /// Sum of |coefficients|; an upper bound of sup |p|.
  double sup_norm_bound() const;
  int max_lattice_radius() const;
  bool is_zero() const;

 private:
  std::vector<LatticeMode> lattice_;
  std::vector<EigenMode> eigen_;
};

/// A base point carried in the form the backward orbit needs. The lattice part
/// of p sees  anchor + sum_i B_i^shift offset_i v_i  (mod 1); the eigen part
/// sees eigen coordinates  B^shift (eigen_anchor + offset). Applying A moves
/// the anchor exactly and bumps the shift, so A^n is never rounded.
struct BasePoint {
  TorusPoint anchor;
  Vec eigen_anchor;
  Vec offset;
  int shift = 0;
};

struct TruncationPlan {
  int n_terms = 1;
  double tail_bound = 0.0;
};

inline constexpr int kMaxTruncationTerms = 1'000'000;

class SkewProduct {
 public:
  /// Throws InvalidArgument for lambda outside (0,1) or inconsistent
  /// dimensions, LambdaOnEigenvalueModulus when |lambda - |B_i|| <= 1e-9.
  SkewProduct(HyperbolicToralMatrix matrix, double lambda, ForcingFunction forcing,
              Vec base_point = Vec());

  int dim() const { return matrix_.dim(); }
  const HyperbolicToralMatrix& matrix() const { return matrix_; }
  const Spectrum& spectrum() const { return spectrum_; }
  double lambda() const { return lambda_; }
  const ForcingFunction& forcing() const { return forcing_; }
  const Vec& base_point() const { return base_point_; }
  Vec base_point_standard() const { return from_eigen_coords(spectrum_, base_point_); }

  /// Upper bounds on |dp/dt_i| along each unit eigendirection.
  const Vec& derivative_bounds() const { return derivative_bounds_; }

  /// Smallest N with lambda^(N+1) sup|p| / (1 - lambda) <= tol.
  TruncationPlan plan(double tol) const;

  /// Point with eigen coordinates t, anchored at the configured base point so
  /// that nearby points differ only in the exactly scaled offset.
  BasePoint point_at(const Vec& t) const;
  BasePoint from_standard(const Vec& x) const;
  BasePoint apply_matrix(const BasePoint& p) const;
  BasePoint apply_inverse(const BasePoint& p) const;
  Vec standard_coords(const BasePoint& p) const;
  Vec eigen_coords(const BasePoint& p) const;

  double p(const BasePoint& point) const { return evaluate_term(point.anchor, point, point.shift); }
  double phi(const BasePoint& point, const TruncationPlan& plan) const;

  SkewProduct with_forcing(ForcingFunction forcing) const;

 private:
  struct HalfMode {
    IntVec j;
    double amplitude;  // 2 |p_j|
    double cos_arg;
    double sin_arg;
    Vec omega;         // 2 pi (j . v_i)
  };

  // frequency = sign^shift * base * |B_d|^shift. Modes whose frequencies differ
  // by a power of |B_d| share a base, so their phases round identically.
  struct CompiledEigenMode {
    int direction;
    double amplitude;
    double base;
    int shift;
    double sign;
    double cos_phase;
    double sin_phase;
  };

  double power(int direction, int exponent) const;
  double evaluate_term(const TorusPoint& anchor, const BasePoint& point, int exponent) const;

  HyperbolicToralMatrix matrix_;
  Spectrum spectrum_;
  double lambda_;
  ForcingFunction forcing_;
  Vec base_point_;
  TorusPoint base_anchor_;

  double constant_ = 0.0;
  std::vector<HalfMode> half_modes_;
  std::vector<CompiledEigenMode> eigen_modes_;
  Vec derivative_bounds_;
  std::vector<std::vector<double>> powers_;  // B_i^e for |e| <= kPowerTable
  static constexpr int kPowerTable = 4096;
};

double eval_p(const SkewProduct& s, const Vec& x);
double eval_p(const SkewProduct& s, const BasePoint& p);

/// Truncated series sum_{n<=N} lambda^n p(A^-n x) with tail <= tol.
/// Throws TruncationTooDeep when N would exceed 10^6.
double eval_phi(const SkewProduct& s, const Vec& x, double tol);
double eval_phi(const SkewProduct& s, const BasePoint& p, double tol);

/// q_i(t) = p(t v_i + base point); direction is 0-based.
double slice_q(const SkewProduct& s, int direction, double t);
double slice_phi(const SkewProduct& s, int direction, double t, double tol);

/// n-fold F(x,y) = (Ax, lambda y + p(x)).
std::pair<BasePoint, double> iterate_F(const SkewProduct& s, BasePoint x, double y, int steps);
std::pair<Vec, double> iterate_F(const SkewProduct& s, const Vec& x, double y, int steps);

/// Bound on |d phi / d t_i| when lambda < |B_i|; nullopt marks a non-smooth direction.
std::optional<double> smoothness_bound(const SkewProduct& s, int direction);

/// Reusable evaluator of phi with a fixed truncation plan.
class PhiEvaluator {
 public:
  PhiEvaluator(const SkewProduct& s, double tol) : s_(&s), plan_(s.plan(tol)) {}

  double operator()(const BasePoint& p) const { return s_->phi(p, plan_); }
  double at_eigen(const Vec& t) const { return s_->phi(s_->point_at(t), plan_); }
  double slice(int direction, double t) const;
  const TruncationPlan& plan() const { return plan_; }
  const SkewProduct& product() const { return *s_; }

 private:
  const SkewProduct* s_;
  TruncationPlan plan_;
};

}  // namespace skewdim
