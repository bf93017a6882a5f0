#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "xinu/copula.hpp"
#include "xinu/errors.hpp"

namespace xinu {

// Antiderivatives in x = 1 - t for a section with level q.
namespace primitives {
inline double F(double x, double q) {
  const double x2 = x * x;
  return x * (x2 * x2 / 5.0 - 2.0 * q * x2 / 3.0 + q * q);
}
inline double T(double x, double q) { return x * (x * x / 3.0 - q); }
inline double S(double x, double q) {
  const double x2 = x * x;
  return x * x2 * (x2 / 5.0 - q / 3.0);
}

// Differences P(r + d) - P(r) for q = r^2, expanded in d so that nothing
// cancels when the section is a thin sliver just above sqrt(q).
inline double dT(double r, double d) { return d * d * (d / 3.0 + r); }
inline double dF(double r, double d) {
  return d * d * d * (d * d / 5.0 + r * d + 4.0 * r * r / 3.0);
}
inline double dS(double r, double d) {
  return d * d * (d * d * d / 5.0 + r * d * d + 5.0 * r * r * d / 3.0 + r * r * r);
}
}  // namespace primitives

enum class RegimeTag { UpperClamped, Unclamped, DoubleClamped, LowerClamped };

inline const char* regime_name(RegimeTag t) {
  switch (t) {
    case RegimeTag::UpperClamped: return "upper-clamped";
    case RegimeTag::Unclamped: return "unclamped";
    case RegimeTag::DoubleClamped: return "double-clamped";
    case RegimeTag::LowerClamped: return "lower-clamped";
  }
  return "?";
}

/// Switching data of the section t -> clamp(b((1-t)^2 - q), 0, 1).
/// The section equals 1 on [0, a], the open parabola on (a, s) and 0 on [s, 1].
struct Regime {
  RegimeTag tag;
  double q;
  double R;        // sqrt(q + 1/b)
  double r;        // sqrt(q) for q >= 0, NaN otherwise
  double x_a;      // min(1, R)
  double x_s;      // sqrt(q) for q >= 0, else 0
  double a;        // 1 - x_a
  double s;        // 1 - x_s
  double width;    // x_a - x_s, computed without subtracting square roots
};

namespace detail {
inline double checked_q(double b, double q) {
  if (!(b > 0.0) || !std::isfinite(b)) throw domain_error("extremal: b must be positive and finite");
  const double lo = -1.0 / b;
  const double slack = 1e-14 * (1.0 + std::abs(lo));
  if (!(q >= lo - slack && q <= 1.0 + 1e-14))
    throw domain_error("extremal: q = " + std::to_string(q) + " outside [-1/b, 1] for b = " +
                       std::to_string(b));
  return std::clamp(q, lo, 1.0);
}
}  // namespace detail

inline Regime classify_regime(double b, double q) {
  q = detail::checked_q(b, q);
  Regime g{};
  g.q = q;
  g.R = std::sqrt(std::max(0.0, q + 1.0 / b));
  g.r = q >= 0.0 ? std::sqrt(q) : std::nan("");
  g.x_a = std::min(1.0, g.R);
  g.x_s = q >= 0.0 ? g.r : 0.0;
  g.a = std::max(0.0, 1.0 - g.R);
  g.s = 1.0 - g.x_s;
  if (q < 0.0)
    g.width = g.x_a;
  else
    g.width = g.R < 1.0 ? (1.0 / b) / (g.R + g.r) : 1.0 - g.r;
  if (q < 0.0)
    g.tag = g.R < 1.0 ? RegimeTag::UpperClamped : RegimeTag::Unclamped;
  else
    g.tag = q < 1.0 - 1.0 / b ? RegimeTag::DoubleClamped : RegimeTag::LowerClamped;
  return g;
}

/// Exact per-section integrals of h = h_b(., v) for the level q:
/// marginal = int h, square = int h^2, weighted = int (1-t)^2 h.
struct SectionIntegrals {
  double marginal;
  double square;
  double weighted;
};

inline SectionIntegrals section_integrals(double b, double q) {
  using namespace primitives;
  const Regime g = classify_regime(b, q);
  q = g.q;
  const double ua = 1.0 - g.a;
  SectionIntegrals out;
  out.weighted = (1.0 - ua * ua * ua) / 3.0;
  if (q >= 0.0) {
    out.marginal = g.a + b * dT(g.r, g.width);
    out.square = g.a + b * b * dF(g.r, g.width);
    out.weighted += b * dS(g.r, g.width);
  } else {
    out.marginal = g.a + b * T(g.x_a, q);
    out.square = g.a + b * b * F(g.x_a, q);
    out.weighted += b * S(g.x_a, q);
  }
  return out;
}

/// Phi(q) = int_0^1 h_b^{(q)}(t) dt, strictly decreasing from 1 to 0.
inline double phi(double b, double q) { return section_integrals(b, q).marginal; }

namespace detail {
// Bisection of Phi(q) = v on [lo, hi], assuming Phi(lo) >= v >= Phi(hi).
inline double bisect_q(double b, double v, double lo, double hi, double tol) {
  double best = lo, best_res = std::abs(phi(b, lo) - v);
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f = phi(b, mid) - v;
    if (std::abs(f) < best_res) best = mid, best_res = std::abs(f);
    if (std::abs(f) <= tol) return mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  const double fh = std::abs(phi(b, hi) - v);
  return fh < best_res ? hi : best;
}
}  // namespace detail

/// Unique q with Phi(q) = v. Stops once |Phi(q) - v| <= tol or the bracket
/// cannot be halved any further.
inline double solve_q(double b, double v, double tol = 1e-12) {
  if (!(b > 0.0) || !std::isfinite(b)) throw domain_error("solve_q: b must be positive and finite");
  if (!(v >= 0.0 && v <= 1.0)) throw domain_error("solve_q: v must lie in [0, 1]");
  if (v == 0.0) return 1.0;
  if (v == 1.0) return -1.0 / b;
  return detail::bisect_q(b, v, -1.0 / b, 1.0, tol);
}

/// C_b for b != 0: the clamped-parabola family, with b < 0 defined through the
/// sigma2 reflection of C_{|b|}. Immutable after construction; q(v) is
/// tabulated once on a uniform v grid and refined by bracketed bisection.
class ExtremalCopula {
 public:
  static constexpr double kUpperLimit = 1e8;
  static constexpr double kLowerLimit = 1e-8;

  struct Options {
    double solver_tol = 1e-12;
    std::size_t cache_points = 4097;  // 0 disables the table
  };

  enum class Limit { None, Comonotone, Countermonotone, Independence };

  explicit ExtremalCopula(double b) : ExtremalCopula(b, Options{}) {}

  ExtremalCopula(double b, Options opt) : b_(b), beta_(std::abs(b)), opt_(opt) {
    if (b == 0.0 || !std::isfinite(b))
      throw domain_error("ExtremalCopula: b must be finite and nonzero");
    if (b > kUpperLimit) limit_ = Limit::Comonotone;
    else if (b < -kUpperLimit) limit_ = Limit::Countermonotone;
    else if (beta_ < kLowerLimit) limit_ = Limit::Independence;
    if (limit_ == Limit::None && opt_.cache_points >= 2) {
      const std::size_t m = opt_.cache_points;
      auto table = std::make_shared<std::vector<double>>(m);
      (*table)[0] = 1.0;
      (*table)[m - 1] = -1.0 / beta_;
      for (std::size_t k = 1; k + 1 < m; ++k) {
        const double v = static_cast<double>(k) / (m - 1);
        (*table)[k] = detail::bisect_q(beta_, v, -1.0 / beta_, (*table)[k - 1], opt_.solver_tol);
      }
      table_ = std::move(table);
    }
  }

  double b() const { return b_; }
  Limit limit() const { return limit_; }
  const Options& options() const { return opt_; }

  /// Level q(v) of the positive-parameter base family C_{|b|}.
  double base_q(double v) const {
    require_regular();
    if (!(v >= 0.0 && v <= 1.0)) throw domain_error("ExtremalCopula: v must lie in [0, 1]");
    if (v == 0.0) return 1.0;
    if (v == 1.0) return -1.0 / beta_;
    if (!table_) return detail::bisect_q(beta_, v, -1.0 / beta_, 1.0, opt_.solver_tol);
    const std::vector<double>& t = *table_;
    const std::size_t m = t.size();
    const double s = v * static_cast<double>(m - 1);
    const auto k = std::min(static_cast<std::size_t>(s), m - 2);
    if (s == static_cast<double>(k)) return t[k];
    return detail::bisect_q(beta_, v, t[k + 1], t[k], opt_.solver_tol);
  }

  /// Regime of the base section that determines h(., v).
  Regime regime(double v) const { return classify_regime(beta_, base_q(b_ > 0 ? v : 1.0 - v)); }

  double h(double t, double v) const { return section(v)(t); }
  double cdf(double u, double v) const { return cdf_section(v)(u); }

  /// t -> h(t, v) with q(v) resolved once.
  Section section(double v) const {
    switch (limit_) {
      case Limit::Comonotone: return [v](double t) { return v >= t ? 1.0 : 0.0; };
      case Limit::Countermonotone: return [v](double t) { return t >= 1.0 - v ? 1.0 : 0.0; };
      case Limit::Independence: return [v](double) { return v; };
      case Limit::None: break;
    }
    const double beta = beta_;
    if (b_ > 0.0) {
      const double q = base_q(v);
      return [beta, q](double t) { return base_h(beta, q, t); };
    }
    const double q = base_q(1.0 - v);
    return [beta, q](double t) { return 1.0 - base_h(beta, q, t); };
  }

  /// u -> C_b(u, v) with q(v) resolved once.
  Section cdf_section(double v) const {
    switch (limit_) {
      case Limit::Comonotone: return [v](double u) { return std::min(u, v); };
      case Limit::Countermonotone: return [v](double u) { return std::max(u + v - 1.0, 0.0); };
      case Limit::Independence: return [v](double u) { return u * v; };
      case Limit::None: break;
    }
    const double beta = beta_;
    if (b_ > 0.0) {
      const Regime g = classify_regime(beta, base_q(v));
      return [beta, g](double u) { return base_cdf(beta, g, u); };
    }
    const Regime g = classify_regime(beta, base_q(1.0 - v));
    return [beta, g](double u) { return u - base_cdf(beta, g, u); };
  }

  /// Exact integrals of the section at v (requires a regular, non-limit b).
  SectionIntegrals integrals(double v) const {
    require_regular();
    if (b_ > 0.0) return section_integrals(beta_, base_q(v));
    // h = 1 - h', with h' the base section at 1 - v
    const SectionIntegrals p = section_integrals(beta_, base_q(1.0 - v));
    return {1.0 - p.marginal, 1.0 - 2.0 * p.marginal + p.square, 1.0 / 3.0 - p.weighted};
  }

  /// Points in t where h(., v) switches between clamped and open pieces.
  std::vector<double> t_kinks(double v) const {
    switch (limit_) {
      case Limit::Comonotone: return {v};
      case Limit::Countermonotone: return {1.0 - v};
      case Limit::Independence: return {};
      case Limit::None: break;
    }
    const Regime g = regime(v);
    return {g.a, g.s};
  }

  /// Values of v at which the regime of the section changes.
  std::vector<double> v_kinks() const {
    if (limit_ != Limit::None) return {};
    // q = 0 and q = 1 - 1/b; the latter is R = 1 for b <= 1
    std::vector<double> k{phi(beta_, 0.0), phi(beta_, 1.0 - 1.0 / beta_)};
    if (b_ < 0.0)
      for (double& x : k) x = 1.0 - x;
    std::sort(k.begin(), k.end());
    return k;
  }

  Copula as_copula() const {
    CopulaDef d;
    d.name = "extremal(" + std::to_string(b_) + ")";
    const ExtremalCopula self = *this;
    d.cdf = [self](double u, double v) { return self.cdf(u, v); };
    d.dh1 = [self](double t, double v) { return self.h(t, v); };
    d.t_kinks = [self](double v) { return self.t_kinks(v); };
    d.v_kinks = v_kinks();
    d.cdf_section = [self](double v) { return self.cdf_section(v); };
    d.dh1_section = [self](double v) { return self.section(v); };
    return Copula(std::move(d));
  }

  static double base_h(double beta, double q, double t) {
    const double x = 1.0 - t;
    return std::clamp(beta * (x * x - q), 0.0, 1.0);
  }

  static double base_cdf(double beta, const Regime& g, double u) {
    using primitives::T;
    using primitives::dT;
    if (u <= 0.0) return 0.0;
    u = std::min(u, 1.0);
    double c = std::min(u, g.a);
    if (u > g.a) {
      const double lo = std::max(1.0 - u, g.x_s);
      if (g.q >= 0.0)
        c += beta * (dT(g.r, g.width) - dT(g.r, lo - g.r));
      else
        c += beta * (T(g.x_a, g.q) - T(lo, g.q));
    }
    return std::clamp(c, 0.0, u);
  }

 private:
  void require_regular() const {
    if (limit_ != Limit::None)
      throw domain_error("ExtremalCopula: b = " + std::to_string(b_) +
                         " is handled by its limiting copula; no section level exists");
  }

  double b_;
  double beta_;
  Options opt_;
  Limit limit_ = Limit::None;
  std::shared_ptr<const std::vector<double>> table_;
};

/// h_b(t, v) without a q table.
inline double h_section(double b, double t, double v) {
  return ExtremalCopula(b, {.cache_points = 0}).h(t, v);
}

/// C_b(u, v) without a q table.
inline double extremal_cdf(double b, double u, double v) {
  return ExtremalCopula(b, {.cache_points = 0}).cdf(u, v);
}

struct ProfilePoint {
  double t;
  double h;
};

/// k equally spaced samples of t -> h_b(t, v) on [0, 1].
inline std::vector<ProfilePoint> conditional_profile(double b, double v, std::size_t k) {
  if (k < 2) throw domain_error("conditional_profile: need at least 2 samples");
  const Section s = ExtremalCopula(b, {.cache_points = 0}).section(v);
  std::vector<ProfilePoint> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(k - 1);
    out[i] = {t, s(t)};
  }
  return out;
}

}  // namespace xinu
