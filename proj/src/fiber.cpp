#include "skewdim/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "skewdim/error.hpp"

namespace skewdim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_fraction(std::uint64_t u) {
  return std::ldexp(static_cast<double>(static_cast<std::int64_t>(u)), -64);
}

bool first_nonzero_positive(const IntVec& j) {
  for (Eigen::Index c = 0; c < j.size(); ++c)
    if (j(c) != 0) return j(c) > 0;
  return false;
}

std::vector<std::int64_t> key_of(const IntVec& j) { return {j.data(), j.data() + j.size()}; }

}  // namespace

TorusPoint to_torus(const Vec& x) {
  TorusPoint p(x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    const double frac = x(c) - std::floor(x(c));
    const double scaled = std::ldexp(frac, 64);
    p(c) = scaled >= 18446744073709551616.0 ? 0u : static_cast<std::uint64_t>(scaled);
  }
  return p;
}

Vec from_torus(const TorusPoint& p) {
  Vec x(p.size());
  for (Eigen::Index c = 0; c < p.size(); ++c) {
    const double v = std::ldexp(static_cast<double>(p(c)), -64);
    x(c) = v >= 1.0 ? 0.0 : v;
  }
  return x;
}

TorusPoint apply(const IntMat& m, const TorusPoint& p) {
  TorusPoint out(p.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) acc += static_cast<std::uint64_t>(m(r, c)) * p(c);
    out(r) = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------

ForcingFunction ForcingFunction::lattice(std::vector<LatticeMode> modes) {
  std::map<std::vector<std::int64_t>, std::complex<double>> merged;
  Eigen::Index k = -1;
  for (const auto& m : modes) {
    if (k < 0) k = m.j.size();
    if (m.j.size() != k) throw Error(ErrorCode::InvalidArgument, "lattice modes of mixed dimension");
    if (!std::isfinite(m.coeff.real()) || !std::isfinite(m.coeff.imag()))
      throw Error(ErrorCode::InvalidArgument, "non-finite lattice coefficient");
    merged[key_of(m.j)] += m.coeff;
  }
  std::map<std::vector<std::int64_t>, std::complex<double>> full = merged;
  for (const auto& [key, c] : merged) {
    std::vector<std::int64_t> neg(key.size());
    std::transform(key.begin(), key.end(), neg.begin(), [](std::int64_t v) { return -v; });
    const double scale = std::max(1.0, std::abs(c));
    if (neg == key) {
      if (std::abs(c.imag()) > 1e-12 * scale)
        throw Error(ErrorCode::InvalidArgument, "constant lattice mode must be real");
      full[key] = {c.real(), 0.0};
      continue;
    }
    auto it = merged.find(neg);
    if (it == merged.end()) {
      full[neg] = std::conj(c);
    } else if (std::abs(it->second - std::conj(c)) > 1e-12 * scale) {
      throw Error(ErrorCode::InvalidArgument, "lattice modes violate p_{-j} = conj(p_j)");
    }
  }
  ForcingFunction f;
  for (const auto& [key, c] : full) {
    if (c == std::complex<double>(0.0, 0.0)) continue;
    IntVec j(static_cast<Eigen::Index>(key.size()));
    for (std::size_t i = 0; i < key.size(); ++i) j(static_cast<Eigen::Index>(i)) = key[i];
    f.lattice_.push_back({j, c});
  }
  return f;
}

ForcingFunction ForcingFunction::eigen(std::vector<EigenMode> modes) {
  for (const auto& m : modes) {
    if (m.direction < 0) throw Error(ErrorCode::InvalidArgument, "negative eigen-mode direction");
    if (!std::isfinite(m.amplitude) || !std::isfinite(m.frequency) || !std::isfinite(m.phase))
      throw Error(ErrorCode::InvalidArgument, "non-finite eigen-mode parameter");
  }
  ForcingFunction f;
  f.eigen_ = std::move(modes);
  return f;
}

ForcingFunction ForcingFunction::plus(const ForcingFunction& other) const {
  std::vector<LatticeMode> lat = lattice_;
  lat.insert(lat.end(), other.lattice_.begin(), other.lattice_.end());
  ForcingFunction f = lattice(std::move(lat));
  f.eigen_ = eigen_;
  f.eigen_.insert(f.eigen_.end(), other.eigen_.begin(), other.eigen_.end());
  return f;
}

double ForcingFunction::sup_norm_bound() const {
  double s = 0.0;
  for (const auto& m : lattice_) s += std::abs(m.coeff);
  for (const auto& m : eigen_) s += std::abs(m.amplitude);
  return s;
}

int ForcingFunction::max_lattice_radius() const {
  std::int64_t r = 0;
  for (const auto& m : lattice_) r = std::max(r, m.j.cwiseAbs().maxCoeff());
  return static_cast<int>(r);
}

bool ForcingFunction::is_zero() const { return sup_norm_bound() == 0.0; }

// ---------------------------------------------------------------------------

SkewProduct::SkewProduct(HyperbolicToralMatrix matrix, double lambda, ForcingFunction forcing,
                         Vec base_point)
    : matrix_(std::move(matrix)),
      spectrum_(skewdim::spectrum(matrix_)),
      lambda_(lambda),
      forcing_(std::move(forcing)),
      base_point_(std::move(base_point)) {
  const int k = dim();
  if (!(lambda_ > 0.0 && lambda_ < 1.0))
    throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0,1)");
  for (int i = 0; i < k; ++i)
    if (std::abs(lambda_ - spectrum_.modulus(i)) <= kHyperbolicityTol)
      throw Error(ErrorCode::LambdaOnEigenvalueModulus,
                  "lambda coincides with |B_" + std::to_string(i + 1) + "|");
  if (base_point_.size() == 0) base_point_ = Vec::Zero(k);
  if (base_point_.size() != k) throw Error(ErrorCode::InvalidArgument, "base point dimension");
  base_anchor_ = to_torus(from_eigen_coords(spectrum_, base_point_));

  derivative_bounds_ = Vec::Zero(k);
  for (const auto& m : forcing_.lattice_modes()) {
    if (m.j.size() != k) throw Error(ErrorCode::InvalidArgument, "lattice mode dimension");
    if (m.j.isZero()) {
      constant_ += m.coeff.real();
      continue;
    }
    if (!first_nonzero_positive(m.j)) continue;
    const double arg = std::arg(m.coeff);
    HalfMode h{m.j, 2.0 * std::abs(m.coeff), std::cos(arg), std::sin(arg), Vec(k)};
    for (int i = 0; i < k; ++i)
      h.omega(i) = kTwoPi * m.j.cast<double>().dot(spectrum_.eigenvectors.col(i));
    derivative_bounds_ += h.amplitude * h.omega.cwiseAbs();
    half_modes_.push_back(std::move(h));
  }
  for (const auto& m : forcing_.eigen_modes()) {
    if (m.direction >= k) throw Error(ErrorCode::InvalidArgument, "eigen-mode direction out of range");
    derivative_bounds_(m.direction) += std::abs(m.amplitude * m.frequency);
    const double b = spectrum_.eigenvalues(m.direction);
    CompiledEigenMode cm{m.direction, m.amplitude, m.frequency, 0, 1.0, std::cos(m.phase), std::sin(m.phase)};
    for (const auto& ref : eigen_modes_) {
      if (ref.direction != m.direction || ref.shift != 0 || ref.base == 0.0 || m.frequency == 0.0) continue;
      const double e = std::log(std::abs(m.frequency / ref.base)) / std::log(std::abs(b));
      const double r = std::round(e);
      if (std::abs(e - r) > 1e-9 || std::abs(r) > kPowerTable) continue;
      const int n = static_cast<int>(r);
      const double sign = (b < 0.0 && (n % 2 != 0)) ? -1.0 : 1.0;
      if (std::abs(sign * ref.base * std::pow(b, n) - m.frequency) > 1e-9 * std::abs(m.frequency)) continue;
      cm.base = ref.base;
      cm.shift = n;
      cm.sign = sign;
      break;
    }
    eigen_modes_.push_back(cm);
  }

  powers_.assign(k, std::vector<double>(2 * kPowerTable + 1));
  for (int i = 0; i < k; ++i) {
    const double b = spectrum_.eigenvalues(i);
    auto& row = powers_[i];
    row[kPowerTable] = 1.0;
    for (int e = 1; e <= kPowerTable; ++e) {
      row[kPowerTable + e] = std::pow(b, e);
      row[kPowerTable - e] = std::pow(b, -e);
    }
  }

  // Probe grid: 64 points per axis, capped at 2^18 points in total.
  const double bound = forcing_.sup_norm_bound();
  int per_axis = 64;
  while (per_axis > 2 && std::pow(static_cast<double>(per_axis), k) > 262144.0) --per_axis;
  Vec x = Vec::Zero(k);
  std::vector<int> idx(k, 0);
  while (true) {
    for (int c = 0; c < k; ++c) x(c) = static_cast<double>(idx[c]) / per_axis;
    const double v = std::abs(this->p(from_standard(x)));
    if (v > bound * (1.0 + 1e-9) + 1e-12)
      throw Error(ErrorCode::InvalidArgument, "forcing exceeds its sup-norm bound");
    int c = 0;
    while (c < k && ++idx[c] == per_axis) idx[c++] = 0;
    if (c == k) break;
  }
}

SkewProduct SkewProduct::with_forcing(ForcingFunction forcing) const {
  return SkewProduct(matrix_, lambda_, std::move(forcing), base_point_);
}

TruncationPlan SkewProduct::plan(double tol) const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double sup = forcing_.sup_norm_bound();
  TruncationPlan plan;
  auto tail = [&](double n) { return std::pow(lambda_, n + 1.0) * sup / (1.0 - lambda_); };
  if (sup == 0.0) {
    plan.n_terms = 1;
    plan.tail_bound = 0.0;
    return plan;
  }
  double n = std::ceil(std::log(tol * (1.0 - lambda_) / sup) / std::log(lambda_) - 1.0);
  n = std::max(n, 1.0);
  while (n > 1.0 && tail(n - 1.0) <= tol) n -= 1.0;
  while (tail(n) > tol) n += 1.0;
  if (n > kMaxTruncationTerms)
    throw Error(ErrorCode::TruncationTooDeep, "needs " + std::to_string(n) + " terms");
  plan.n_terms = static_cast<int>(n);
  plan.tail_bound = tail(n);
  return plan;
}

BasePoint SkewProduct::point_at(const Vec& t) const {
  return BasePoint{base_anchor_, base_point_, t - base_point_, 0};
}

BasePoint SkewProduct::from_standard(const Vec& x) const {
  return BasePoint{to_torus(x), to_eigen_coords(spectrum_, x), Vec::Zero(dim()), 0};
}

BasePoint SkewProduct::apply_matrix(const BasePoint& p) const {
  BasePoint out = p;
  out.anchor = apply(matrix_.entries(), p.anchor);
  out.shift = p.shift + 1;
  return out;
}

BasePoint SkewProduct::apply_inverse(const BasePoint& p) const {
  BasePoint out = p;
  out.anchor = apply(matrix_.inverse(), p.anchor);
  out.shift = p.shift - 1;
  return out;
}

Vec SkewProduct::standard_coords(const BasePoint& p) const {
  Vec x = from_torus(p.anchor);
  for (int i = 0; i < dim(); ++i)
    if (p.offset(i) != 0.0) x += power(i, p.shift) * p.offset(i) * spectrum_.eigenvectors.col(i);
  for (int c = 0; c < dim(); ++c) x(c) -= std::floor(x(c));
  return x;
}

Vec SkewProduct::eigen_coords(const BasePoint& p) const {
  Vec t(dim());
  for (int i = 0; i < dim(); ++i) t(i) = power(i, p.shift) * (p.eigen_anchor(i) + p.offset(i));
  return t;
}

double SkewProduct::power(int direction, int exponent) const {
  if (exponent >= -kPowerTable && exponent <= kPowerTable) return powers_[direction][kPowerTable + exponent];
  return std::pow(spectrum_.eigenvalues(direction), exponent);
}

double SkewProduct::evaluate_term(const TorusPoint& anchor, const BasePoint& point, int exponent) const {
  const int k = dim();
  double value = constant_;
  if (!half_modes_.empty()) {
    Vec scaled = Vec::Zero(k);
    bool any_offset = false;
    for (int i = 0; i < k; ++i) {
      if (point.offset(i) == 0.0) continue;
      scaled(i) = power(i, exponent) * point.offset(i);
      any_offset = true;
    }
    for (const auto& h : half_modes_) {
      std::uint64_t dot = 0;
      for (int c = 0; c < k; ++c) dot += static_cast<std::uint64_t>(h.j(c)) * anchor(c);
      double phase = kTwoPi * signed_fraction(dot);
      if (any_offset) phase += h.omega.dot(scaled);
      value += h.amplitude * (std::cos(phase) * h.cos_arg - std::sin(phase) * h.sin_arg);
    }
  }
  for (const auto& m : eigen_modes_) {
    const double c = point.eigen_anchor(m.direction) + point.offset(m.direction);
    const double u = c == 0.0 ? 0.0 : m.base * (power(m.direction, exponent + m.shift) * c);
    // Deep arguments dwarf the phase, so it is applied by rotation, not by addition.
    const double x = m.sign * u;
    value += m.amplitude * (std::cos(x) * m.cos_phase - std::sin(x) * m.sin_phase);
  }
  // A non-finite value means B_i^-n overflowed: the requested depth is beyond double range.
  if (!std::isfinite(value))
    throw Error(ErrorCode::ResourceLimit, "backward orbit scale overflow at depth " + std::to_string(-exponent));
  return value;
}

double SkewProduct::phi(const BasePoint& point, const TruncationPlan& plan) const {
  TorusPoint anchor = point.anchor;
  double sum = 0.0;
  double weight = 1.0;
  for (int n = 0; n <= plan.n_terms; ++n) {
    sum += weight * evaluate_term(anchor, point, point.shift - n);
    weight *= lambda_;
    anchor = apply(matrix_.inverse(), anchor);
  }
  return sum;
}

// ---------------------------------------------------------------------------

double eval_p(const SkewProduct& s, const Vec& x) { return s.p(s.from_standard(x)); }
double eval_p(const SkewProduct& s, const BasePoint& p) { return s.p(p); }

double eval_phi(const SkewProduct& s, const Vec& x, double tol) { return s.phi(s.from_standard(x), s.plan(tol)); }
double eval_phi(const SkewProduct& s, const BasePoint& p, double tol) { return s.phi(p, s.plan(tol)); }

namespace {
Vec along(const SkewProduct& s, int direction, double t) {
  if (direction < 0 || direction >= s.dim()) throw Error(ErrorCode::InvalidArgument, "direction out of range");
  Vec v = s.base_point();
  v(direction) += t;
  return v;
}
}  // namespace

double slice_q(const SkewProduct& s, int direction, double t) { return s.p(s.point_at(along(s, direction, t))); }

double slice_phi(const SkewProduct& s, int direction, double t, double tol) {
  return s.phi(s.point_at(along(s, direction, t)), s.plan(tol));
}

double PhiEvaluator::slice(int direction, double t) const {
  return s_->phi(s_->point_at(along(*s_, direction, t)), plan_);
}

std::pair<BasePoint, double> iterate_F(const SkewProduct& s, BasePoint x, double y, int steps) {
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "negative step count");
  for (int n = 0; n < steps; ++n) {
    y = s.lambda() * y + s.p(x);
    x = s.apply_matrix(x);
  }
  return {x, y};
}

std::pair<Vec, double> iterate_F(const SkewProduct& s, const Vec& x, double y, int steps) {
  auto [p, out] = iterate_F(s, s.from_standard(x), y, steps);
  return {s.standard_coords(p), out};
}

std::optional<double> smoothness_bound(const SkewProduct& s, int direction) {
  const double b = s.spectrum().modulus(direction);
  if (!(s.lambda() < b)) return std::nullopt;
  return s.derivative_bounds()(direction) / (1.0 - s.lambda() / b);
}

}  // namespace skewdim
