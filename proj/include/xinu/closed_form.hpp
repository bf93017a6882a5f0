#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "xinu/errors.hpp"
#include "xinu/extremal.hpp"
#include "xinu/gauss_legendre.hpp"

namespace xinu {

// Closed forms of xi(C_b) and nu(C_b).
//
// For b > 1 the textbook expressions carry b^3 prefactors that cancel almost
// completely for large b and vanish like sqrt(b-1) near b = 1. Both issues go
// away after writing everything in g = sqrt((b-1)/b), using b = 1/(1-g^2) and
// 1 - g = 1/(b(1+g)). The resulting rational functions of g have positive
// denominators on [0, 1) and reduce to the b <= 1 polynomials at g = 0.

namespace detail {

inline double check_b(double b, const char* who) {
  if (std::isnan(b) || b < 0.0) throw domain_error(std::string(who) + ": b must be >= 0");
  return b;
}

inline double gamma_of(double b) { return std::sqrt((b - 1.0) / b); }

// acosh(sqrt(b)) without the loss of precision near b = 1
inline double acosh_sqrt(double b) { return std::asinh(std::sqrt(b - 1.0)); }

inline double xi_lower(double b) { return 8.0 * b * b * (7.0 - 3.0 * b) / 105.0; }
inline double nu_lower(double b) { return 4.0 * b * (28.0 - 9.0 * b) / 105.0; }

inline double xi_upper(double b) {
  const double g = gamma_of(b), A = acosh_sqrt(b), p = 1.0 + g;
  const double num = (((183.0 * g + 549.0) * g + 587.0) * g + 297.0) * g + 64.0;
  return num / (210.0 * p * p * p) - A / (2.0 * b);
}

inline double nu_upper(double b) {
  const double g = gamma_of(b), A = acosh_sqrt(b), p = 1.0 + g;
  const double num = ((((-87.0 * g - 174.0) * g + 250.0) * g + 674.0) * g + 713.0) * g + 304.0;
  return num / (420.0 * p * p) - A / (4.0 * b * b);
}

}  // namespace detail

/// Xi(b) = xi(C_b); Xi(0) = 0 and Xi(inf) = 1.
inline double Xi(double b) {
  detail::check_b(b, "Xi");
  if (b == 0.0) return 0.0;
  if (std::isinf(b)) return 1.0;
  return b <= 1.0 ? detail::xi_lower(b) : detail::xi_upper(b);
}

/// N(b) = nu(C_b); N(0) = 0 and N(inf) = 1.
inline double N(double b) {
  detail::check_b(b, "N");
  if (b == 0.0) return 0.0;
  if (std::isinf(b)) return 1.0;
  return b <= 1.0 ? detail::nu_lower(b) : detail::nu_upper(b);
}

inline double Xi_prime(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw domain_error("Xi_prime: b must be positive and finite");
  if (b <= 1.0) return 8.0 * b * (14.0 - 9.0 * b) / 105.0;
  const double g = detail::gamma_of(b), A = detail::acosh_sqrt(b), p = 1.0 + g;
  const double one_minus_g = 1.0 / (b * p);
  const double poly = ((39.0 * g + 156.0) * g + 215.0) * g + 80.0;
  return one_minus_g * one_minus_g / (210.0 * p * p) * (105.0 * A * p * p * p * p + poly);
}

/// N'(b) = Xi'(b) / b.
inline double N_prime(double b) { return Xi_prime(b) / b; }

inline double gap(double b) {
  if (!(b > 0.0)) throw domain_error("gap: b must be positive");
  return N(b) - Xi(b);
}

struct BoundaryValue {
  double b;
  double xi;
  double nu;
  std::optional<double> gamma;       // b > 1 only
  std::optional<double> acosh_term;  // b > 1 only
};

inline BoundaryValue boundary_value(double b) {
  BoundaryValue out{b, Xi(b), N(b), std::nullopt, std::nullopt};
  if (b > 1.0 && std::isfinite(b)) {
    out.gamma = detail::gamma_of(b);
    out.acosh_term = detail::acosh_sqrt(b);
  }
  return out;
}

struct RegimeDecomposition {
  double xi;           // 6 * sum of regime contributions - 2
  double nu;           // 12 * sum of regime contributions - 2
  double xi_residual;  // |xi - Xi(b)|
  double nu_residual;  // |nu - N(b)|
};

/// Rebuilds xi(C_b) and nu(C_b) from one-dimensional integrals over the
/// section level q, split by regime and substituted to the variable in which
/// the density -dv/dq is polynomial:
///   upper-clamped   R in (0, min(1, 1/sqrt b)),  weight 2 b R^2
///   unclamped       R in [1, 1/sqrt b),         weight 2 b R
///   double-clamped  r in (0, sqrt(1 - 1/b)),    weight (1 + b (R - r)^2) r / R
///   lower-clamped   r in (max(0, ...), 1],      weight 2 b r (1 - r)
inline RegimeDecomposition regime_decomposition_check(double b, int order = 32, int panels = 4) {
  if (!(b > 0.0) || !std::isfinite(b))
    throw domain_error("regime_decomposition_check: b must be positive and finite");
  const QuadratureRule rule = gauss_legendre(order);
  double sq = 0.0, wt = 0.0;
  auto add = [&](double lo, double hi, auto&& level, auto&& weight) {
    if (!(hi > lo)) return;
    const auto edges = panel_edges(lo, hi, panels);
    sq += integrate(rule, edges, [&](double x) {
      return section_integrals(b, level(x)).square * weight(x);
    });
    wt += integrate(rule, edges, [&](double x) {
      return section_integrals(b, level(x)).weighted * weight(x);
    });
  };
  const double inv = 1.0 / b;
  auto from_R = [inv](double R) { return R * R - inv; };
  auto from_r = [](double r) { return r * r; };
  add(0.0, std::min(1.0, std::sqrt(inv)), from_R, [b](double R) { return 2.0 * b * R * R; });
  add(1.0, std::sqrt(inv), from_R, [b](double R) { return 2.0 * b * R; });
  const double r_split = b > 1.0 ? std::sqrt(1.0 - inv) : 0.0;
  add(0.0, r_split, from_r, [b, inv](double r) {
    const double R = std::sqrt(r * r + inv);
    return (1.0 + b * (R - r) * (R - r)) * r / R;
  });
  add(r_split, 1.0, from_r, [b](double r) { return 2.0 * b * r * (1.0 - r); });
  RegimeDecomposition out;
  out.xi = 6.0 * sq - 2.0;
  out.nu = 12.0 * wt - 2.0;
  out.xi_residual = std::abs(out.xi - Xi(b));
  out.nu_residual = std::abs(out.nu - N(b));
  return out;
}

}  // namespace xinu
