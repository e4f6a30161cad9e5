#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace skewdim::poly {

// Coefficients are stored in ascending order: c[i] multiplies x^i.

template <typename Scalar>
Scalar evaluate(std::span<const Scalar> c, Scalar x) {
  Scalar acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <typename Scalar>
std::vector<Scalar> derivative(std::span<const Scalar> c) {
  std::vector<Scalar> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<Scalar>(i));
  return d;
}

/// Cauchy bound: every root satisfies |x| < 1 + max |c_i / c_n|.
template <typename Scalar>
Scalar root_bound(std::span<const Scalar> c) {
  const Scalar lead = std::abs(c.back());
  Scalar m = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]) / lead);
  return 1 + m;
}

/// Bisection on a sign-changing bracket followed by bracket-guarded Newton steps.
template <typename Scalar>
Scalar polish_root(std::span<const Scalar> c, std::span<const Scalar> dc, Scalar lo, Scalar hi) {
  Scalar flo = evaluate(c, lo);
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const Scalar fm = evaluate(c, mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  Scalar x = lo + (hi - lo) / 2;
  for (int it = 0; it < 4; ++it) {
    const Scalar d = evaluate(dc, x);
    if (d == 0) break;
    const Scalar next = x - evaluate(c, x) / d;
    if (!(next >= lo && next <= hi)) break;
    x = next;
  }
  return x;
}

/// Real roots of odd multiplicity, ascending. A root of even multiplicity (a
/// touching zero) produces no sign change and is not reported, so a degree-n
/// polynomial yields n roots iff all its roots are real and simple.
template <typename Scalar>
std::vector<Scalar> real_simple_roots(std::span<const Scalar> c) {
  std::vector<Scalar> coeffs(c.begin(), c.end());
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return {};
  if (degree == 1) return {-coeffs[0] / coeffs[1]};

  const std::vector<Scalar> dc = derivative<Scalar>(coeffs);
  std::vector<Scalar> breaks = real_simple_roots<Scalar>(dc);
  const Scalar bound = root_bound<Scalar>(coeffs);
  breaks.insert(breaks.begin(), -bound);
  breaks.push_back(bound);

  std::vector<Scalar> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Scalar a = breaks[i], b = breaks[i + 1];
    const Scalar fa = evaluate<Scalar>(coeffs, a), fb = evaluate<Scalar>(coeffs, b);
    if (fa == 0 || fb == 0) continue;
    if ((fa < 0) != (fb < 0)) roots.push_back(polish_root<Scalar>(coeffs, dc, a, b));
  }
  return roots;
}

}  // namespace skewdim::poly
