#include "skewdim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "skewdim/error.hpp"
#include "skewdim/polynomial.hpp"

namespace skewdim {
namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorCode::ResourceLimit, "integer overflow in characteristic polynomial");
  return static_cast<std::int64_t>(v);
}

IntMat multiply(const IntMat& a, const IntMat& b) {
  const int k = static_cast<int>(a.rows());
  IntMat out(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      __int128 acc = 0;
      for (int m = 0; m < k; ++m) acc += static_cast<__int128>(a(r, m)) * b(m, c);
      out(r, c) = checked(acc);
    }
  return out;
}

}  // namespace

FaddeevLeverrier faddeev_leverrier(const IntMat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::int64_t> c(n + 1, 0);
  c[n] = 1;
  IntMat m = IntMat::Zero(n, n);
  for (int step = 1; step <= n; ++step) {
    m = multiply(a, m);
    for (int d = 0; d < n; ++d) m(d, d) = checked(static_cast<__int128>(m(d, d)) + c[n - step + 1]);
    const IntMat am = multiply(a, m);
    __int128 trace = 0;
    for (int d = 0; d < n; ++d) trace += am(d, d);
    // Exact: Newton identities guarantee divisibility for integer matrices.
    c[n - step] = checked(-trace / step);
  }
  FaddeevLeverrier out;
  out.monic = c;
  out.adjugate = (n % 2 == 0) ? IntMat(-m) : m;
  return out;
}

std::vector<std::int64_t> char_poly(const IntMat& entries) {
  std::vector<std::int64_t> c = faddeev_leverrier(entries).monic;
  if (entries.rows() % 2 == 1)
    for (auto& v : c) v = -v;
  return c;
}

std::vector<long double> sorted_eigenvalues(std::span<const std::int64_t> char_coeffs) {
  std::vector<long double> c(char_coeffs.begin(), char_coeffs.end());
  std::vector<long double> roots = poly::real_simple_roots<long double>(c);
  const int k = static_cast<int>(c.size()) - 1;
  for (long double mu : roots) {
    const long double residual = std::abs(poly::evaluate<long double>(c, mu));
    const long double scale = 1.0L + std::pow(std::abs(mu), static_cast<long double>(k));
    if (!(residual <= 1e-12L * scale))
      throw Error(ErrorCode::RootPolishDiverged, "residual " + std::to_string(static_cast<double>(residual)));
  }
  std::sort(roots.begin(), roots.end(),
            [](long double x, long double y) { return std::abs(x) < std::abs(y); });
  return roots;
}

HyperbolicToralMatrix validate(const IntMat& entries) {
  const auto k = entries.rows();
  if (k != entries.cols() || k < 2 || k > kMaxDim)
    throw Error(ErrorCode::InvalidArgument, "matrix must be square with 2 <= k <= 6");

  const FaddeevLeverrier fl = faddeev_leverrier(entries);
  const std::int64_t det = (k % 2 == 0) ? fl.monic[0] : -fl.monic[0];
  if (det != 1 && det != -1)
    throw Error(ErrorCode::DetNotUnimodular, "det = " + std::to_string(det));

  auto exact_at = [&](std::int64_t x) {
    __int128 acc = 0;
    for (auto it = fl.monic.rbegin(); it != fl.monic.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  if (exact_at(1) == 0 || exact_at(-1) == 0)
    throw Error(ErrorCode::EigenvalueOnUnitCircle, "eigenvalue +-1");

  // Complex pairs on the circle are caught here; real ones are re-checked below.
  const Eigen::MatrixXd dense = entries.cast<double>();
  const Eigen::VectorXcd complex_eigs = Eigen::EigenSolver<Eigen::MatrixXd>(dense, false).eigenvalues();
  for (Eigen::Index i = 0; i < complex_eigs.size(); ++i)
    if (std::abs(std::abs(complex_eigs(i)) - 1.0) <= kHyperbolicityTol)
      throw Error(ErrorCode::EigenvalueOnUnitCircle, "eigenvalue modulus 1");

  const std::vector<long double> roots = sorted_eigenvalues(fl.monic);
  if (static_cast<Eigen::Index>(roots.size()) != k)
    throw Error(ErrorCode::RepeatedOrComplexEigenvalue,
                std::to_string(roots.size()) + " simple real roots for degree " + std::to_string(k));
  for (long double mu : roots)
    if (std::abs(std::abs(mu) - 1.0L) <= kHyperbolicityTol)
      throw Error(ErrorCode::EigenvalueOnUnitCircle, "eigenvalue modulus 1");
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (std::abs(roots[i]) - std::abs(roots[i - 1]) <= kDistinctModulusTol)
      throw Error(ErrorCode::RepeatedOrComplexEigenvalue, "eigenvalue moduli not distinct");

  HyperbolicToralMatrix out;
  out.entries_ = entries;
  out.det_ = det;
  out.inverse_ = det == 1 ? fl.adjugate : IntMat(-fl.adjugate);
  out.char_poly_ = char_poly(entries);
  return out;
}

HyperbolicToralMatrix validate(int k, std::span<const std::int64_t> row_major) {
  if (k < 2 || k > kMaxDim || static_cast<std::size_t>(k) * k != row_major.size())
    throw Error(ErrorCode::InvalidArgument, "expected k*k row-major entries");
  IntMat m(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) m(r, c) = row_major[static_cast<std::size_t>(r) * k + c];
  return validate(m);
}

Spectrum spectrum(const HyperbolicToralMatrix& a) {
  const int k = a.dim();
  const std::vector<long double> roots = sorted_eigenvalues(a.characteristic());
  const Mat dense = a.entries().cast<double>();

  Spectrum s;
  s.eigenvalues.resize(k);
  s.eigenvectors.resize(k, k);
  for (int i = 0; i < k; ++i) {
    const double mu = static_cast<double>(roots[i]);
    s.eigenvalues(i) = mu;
    const Mat shifted = dense - mu * Mat::Identity(k, k);
    Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullV);
    Vec v = svd.matrixV().col(k - 1);
    v.normalize();
    for (int c = 0; c < k; ++c) {
      if (std::abs(v(c)) > 1e-12) {
        if (v(c) < 0) v = -v;
        break;
      }
    }
    s.eigenvectors.col(i) = v;
    if (std::abs(mu) < 1.0) ++s.stable_count;
  }
  // Rows of the dual basis solve V^T W^T = I.
  const Mat wt = s.eigenvectors.transpose().fullPivLu().solve(Mat::Identity(k, k));
  s.dual = wt.transpose();
  return s;
}

Vec to_eigen_coords(const Spectrum& s, const Vec& x) { return s.dual * x; }

Vec from_eigen_coords(const Spectrum& s, const Vec& t) { return s.eigenvectors * t; }

bool same_frame(const Spectrum& a, const Spectrum& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return (a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() <= tol &&
         (a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() <= tol &&
         (a.dual - b.dual).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace skewdim
