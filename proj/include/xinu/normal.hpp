#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "xinu/gauss_legendre.hpp"

namespace xinu::normal {

inline constexpr double kClip = 1e-12;

inline double clip(double p) { return std::clamp(p, kClip, 1.0 - kClip); }

inline double pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

inline double cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Standard normal quantile; +-inf at the endpoints.
inline double quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace detail {

struct HalfRule {
  std::vector<double> x, w;  // positive half of a symmetric rule
};

inline HalfRule half_rule(int n) {
  const QuadratureRule r = gauss_legendre(n);
  HalfRule h;
  for (int i = n / 2; i < n; ++i) {
    h.x.push_back(r.nodes[i]);
    h.w.push_back(r.weights[i]);
  }
  return h;
}

}  // namespace detail

/// P(X > h, Y > k) for a standard bivariate normal with correlation r.
/// Drezner-Wesolowsky / Genz (BVNU) with 6, 12 or 20 point rules.
inline double bivariate_upper(double h, double k, double r) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (h == inf || k == inf) return 0.0;
  if (h == -inf) return k == -inf ? 1.0 : cdf(-k);
  if (k == -inf) return cdf(-h);
  if (r == 0.0) return cdf(-h) * cdf(-k);

  static const detail::HalfRule r6 = detail::half_rule(6);
  static const detail::HalfRule r12 = detail::half_rule(12);
  static const detail::HalfRule r20 = detail::half_rule(20);
  const detail::HalfRule& g = std::abs(r) < 0.3 ? r6 : std::abs(r) < 0.75 ? r12 : r20;

  constexpr double tp = 2.0 * std::numbers::pi;
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = 0.5 * std::asin(r);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sgn * g.x[i]));
        bvn += g.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / tp + cdf(-h) * cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (std::abs(r) < 1.0) {
      const double as = 1.0 - r * r;
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 80.0;
      double asr = -0.5 * (bs / as + hk);
      if (asr > -100.0)
        bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
      if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(tp) * cdf(-b / a);
        bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
      }
      a *= 0.5;
      double sum = 0.0;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (double sgn : {-1.0, 1.0}) {
          const double ax = a * (1.0 + sgn * g.x[i]);
          const double xs = ax * ax;
          asr = -0.5 * (bs / xs + hk);
          if (asr <= -100.0) continue;
          const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          sum += g.w[i] * std::exp(asr) * (sp - ep);
        }
      }
      bvn = (a * sum - bvn) / tp;
    }
    if (r > 0.0) {
      bvn += cdf(-std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double L = h < 0.0 ? cdf(k) - cdf(h) : cdf(-h) - cdf(-k);
      bvn = L - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

/// P(X <= h, Y <= k).
inline double bivariate_cdf(double h, double k, double r) { return bivariate_upper(-h, -k, r); }

}  // namespace xinu::normal
