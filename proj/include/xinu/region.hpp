#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "xinu/closed_form.hpp"
#include "xinu/errors.hpp"

namespace xinu {

struct XiInverse {
  double b;
  bool clamped;  // x fell outside [Xi(lo), Xi(hi)] and b is the bracket edge
};

/// Bisection in log b for Xi(b) = x on [lo, hi], run until the bracket
/// cannot be split further.
inline XiInverse xi_inverse_within(double x, double lo = 1e-8, double hi = 1e8) {
  if (!(x > 0.0 && x < 1.0)) throw domain_error("xi_inverse: x must lie in (0, 1)");
  if (x <= Xi(lo)) return {lo, x < Xi(lo)};
  if (x >= Xi(hi)) return {hi, x > Xi(hi)};
  double a = std::log(lo), c = std::log(hi);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + c);
    if (!(m > a && m < c)) break;
    (Xi(std::exp(m)) < x ? a : c) = m;
  }
  const double ba = std::exp(a), bc = std::exp(c);
  return {std::abs(Xi(ba) - x) <= std::abs(Xi(bc) - x) ? ba : bc, false};
}

/// The unique b > 0 with Xi(b) = x. The bracket starts at [1e-8, 1e8] and is
/// widened geometrically as needed.
inline double xi_inverse(double x) {
  if (!(x > 0.0 && x < 1.0)) throw domain_error("xi_inverse: x must lie in (0, 1)");
  double lo = 1e-8, hi = 1e8;
  while (Xi(lo) > x && lo > 1e-300) lo *= 1e-4;
  while (Xi(hi) < x && hi < 1e300) hi *= 1e4;
  return xi_inverse_within(x, lo, hi).b;
}

/// Upper boundary of the region, psi = N o Xi^{-1}, with psi(0) = 0, psi(1) = 1.
inline double psi(double x) {
  if (std::isnan(x)) throw domain_error("psi: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return N(xi_inverse(x));
}

enum class Membership { Inside, Boundary, Outside };

inline const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Boundary: return "boundary";
    case Membership::Outside: return "outside";
  }
  return "?";
}

/// Classifies (x, y) against {(x, y) : 0 <= x <= 1, |y| <= psi(x)}.
inline Membership contains(double x, double y, double tol = 1e-9) {
  if (std::isnan(x) || std::isnan(y) || x < 0.0 || x > 1.0) return Membership::Outside;
  const double ay = std::abs(y);
  if (ay > 1.0 + tol) return Membership::Outside;
  if (1.0 - x <= tol && ay <= 1.0 + tol) return Membership::Boundary;
  const double p = psi(x);
  if (ay > p + tol) return Membership::Outside;
  if (std::abs(ay - p) <= tol) return Membership::Boundary;
  return Membership::Inside;
}

struct BoundarySample {
  double b;   // 0 and +inf at the endpoints
  double xi;
  double nu;  // upper branch; the lower branch is -nu
};

enum class Spacing { UniformXi, LogB };

/// Sampled boundary. The closed region is the symmetric hypograph of the
/// upper branch together with the segment {1} x [-1, 1].
struct RegionBoundary {
  std::vector<BoundarySample> samples;
  double segment_x = 1.0;
  double segment_lo = -1.0;
  double segment_hi = 1.0;
};

inline BoundarySample boundary_point(double b) {
  return {b, Xi(b), N(b)};
}

/// k samples along the upper branch, endpoints b = 0 and b = inf included.
/// Extra b values in `anchors` are merged in order.
inline RegionBoundary boundary_samples(std::size_t k, Spacing spacing = Spacing::UniformXi,
                                       const std::vector<double>& anchors = {}) {
  if (k < 2) throw domain_error("boundary_samples: need at least 2 samples");
  constexpr double inf = std::numeric_limits<double>::infinity();
  RegionBoundary out;
  out.samples.push_back(boundary_point(0.0));
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(k - 1);
    const double b = spacing == Spacing::UniformXi ? xi_inverse(f) : std::pow(10.0, -3.0 + 6.0 * f);
    out.samples.push_back(boundary_point(b));
  }
  for (double b : anchors) {
    if (!(b > 0.0) || std::isinf(b)) throw domain_error("boundary_samples: anchors must be finite and > 0");
    out.samples.push_back(boundary_point(b));
  }
  out.samples.push_back(boundary_point(inf));
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const BoundarySample& a, const BoundarySample& c) { return a.b < c.b; });
  out.samples.erase(std::unique(out.samples.begin(), out.samples.end(),
                                [](const BoundarySample& a, const BoundarySample& c) {
                                  return a.b == c.b;
                                }),
                    out.samples.end());
  return out;
}

/// Golden-section search for the maximizer of f on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, c = hi;
  double x1 = c - r * (c - a), x2 = a + r * (c - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && c - a > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (c - a);
      f2 = f(x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - r * (c - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + c);
}

struct MaxGap {
  double b;
  double xi;
  double nu;
  double gap;
  double search_b;  // golden-section maximizer of gap(b), as a cross-check
};

/// The gap-maximizing boundary point b = 1.
inline MaxGap max_gap_point() {
  MaxGap m{1.0, Xi(1.0), N(1.0), gap(1.0), 0.0};
  m.search_b = golden_section_max([](double b) { return gap(b); }, 0.1, 10.0);
  return m;
}

}  // namespace xinu
