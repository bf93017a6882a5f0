#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xinu/errors.hpp"
#include "xinu/normal.hpp"

namespace xinu {

/// A one-dimensional slice of a copula at a fixed v.
using Section = std::function<double(double)>;

/// Everything needed to build a Copula. Only cdf is mandatory.
struct CopulaDef {
  std::string name;
  std::function<double(double, double)> cdf;
  std::function<double(double, double)> dh1;          // empty: finite differences
  std::function<std::vector<double>(double)> t_kinks;  // kinks of t -> dh1(t, v)
  std::vector<double> v_kinks;                         // v where the section structure changes
  std::function<Section(double)> cdf_section;          // optional fast paths that bind
  std::function<Section(double)> dh1_section;          // per-v work once
};

/// Immutable, cheaply copyable copula handle.
class Copula {
 public:
  static constexpr double kFdStep = 1e-6;

  explicit Copula(CopulaDef def) : def_(std::make_shared<const CopulaDef>(std::move(def))) {
    if (!def_->cdf) throw domain_error("Copula: cdf is required");
  }

  const std::string& name() const { return def_->name; }
  bool analytic_dh1() const { return static_cast<bool>(def_->dh1); }

  double cdf(double u, double v) const { return def_->cdf(u, v); }

  double dh1(double t, double v) const {
    if (def_->dh1) return def_->dh1(t, v);
    return fd_dh1(t, v);
  }

  std::vector<double> t_kinks(double v) const {
    return def_->t_kinks ? def_->t_kinks(v) : std::vector<double>{};
  }
  std::span<const double> v_kinks() const { return def_->v_kinks; }

  Section cdf_section(double v) const {
    if (def_->cdf_section) return def_->cdf_section(v);
    return [self = *this, v](double u) { return self.cdf(u, v); };
  }

  Section dh1_section(double v) const {
    if (def_->dh1_section) return def_->dh1_section(v);
    return [self = *this, v](double t) { return self.dh1(t, v); };
  }

  const CopulaDef& definition() const { return *def_; }

 private:
  double fd_dh1(double t, double v) const {
    const double h = kFdStep;
    double d;
    if (t - h < 0.0)
      d = (cdf(t + h, v) - cdf(t, v)) / h;
    else if (t + h > 1.0)
      d = (cdf(t, v) - cdf(t - h, v)) / h;
    else
      d = (cdf(t + h, v) - cdf(t - h, v)) / (2.0 * h);
    return std::clamp(d, 0.0, 1.0);
  }

  std::shared_ptr<const CopulaDef> def_;
};

// ---------------------------------------------------------------------------
// Reference copulas

enum class Reference { M, W, Pi };

inline Copula reference_copula(Reference tag) {
  CopulaDef d;
  switch (tag) {
    case Reference::Pi:
      d.name = "Pi";
      d.cdf = [](double u, double v) { return u * v; };
      d.dh1 = [](double, double v) { return v; };
      break;
    case Reference::M:
      d.name = "M";
      d.cdf = [](double u, double v) { return std::min(u, v); };
      d.dh1 = [](double t, double v) { return v >= t ? 1.0 : 0.0; };
      d.t_kinks = [](double v) { return std::vector<double>{v}; };
      break;
    case Reference::W:
      d.name = "W";
      d.cdf = [](double u, double v) { return std::max(u + v - 1.0, 0.0); };
      d.dh1 = [](double t, double v) { return t >= 1.0 - v ? 1.0 : 0.0; };
      d.t_kinks = [](double v) { return std::vector<double>{1.0 - v}; };
      break;
  }
  return Copula(std::move(d));
}

// ---------------------------------------------------------------------------
// Parametric families

enum class Family { Clayton, Frank, Gaussian, GumbelHougaard, Joe };

struct ParametricFamily {
  Family family;
  double theta;
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::Clayton: return "clayton";
    case Family::Frank: return "frank";
    case Family::Gaussian: return "gaussian";
    case Family::GumbelHougaard: return "gumbel";
    case Family::Joe: return "joe";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (Family f : {Family::Clayton, Family::Frank, Family::Gaussian, Family::GumbelHougaard,
                   Family::Joe})
    if (s == family_name(f)) return f;
  if (s == "gumbel-hougaard" || s == "gumbelhougaard") return Family::GumbelHougaard;
  return std::nullopt;
}

inline std::string_view family_range(Family f) {
  switch (f) {
    case Family::Clayton: return "theta > 0";
    case Family::Frank: return "theta != 0";
    case Family::Gaussian: return "-1 < theta < 1";
    case Family::GumbelHougaard: return "theta >= 1";
    case Family::Joe: return "theta >= 1";
  }
  return "";
}

inline void validate(const ParametricFamily& p) {
  const double t = p.theta;
  bool ok = std::isfinite(t);
  switch (p.family) {
    case Family::Clayton: ok = ok && t > 0.0; break;
    case Family::Frank: ok = ok && t != 0.0; break;
    case Family::Gaussian: ok = ok && t > -1.0 && t < 1.0; break;
    case Family::GumbelHougaard:
    case Family::Joe: ok = ok && t >= 1.0; break;
  }
  if (!ok)
    throw domain_error(std::string(family_name(p.family)) + ": parameter " + std::to_string(t) +
                       " outside valid range " + std::string(family_range(p.family)));
}

namespace detail {

// Boundary values shared by all families; returns true when (u, v) was handled.
inline bool cdf_edge(double u, double v, double& out) {
  if (u <= 0.0 || v <= 0.0) return out = 0.0, true;
  if (u >= 1.0) return out = std::min(v, 1.0), true;
  if (v >= 1.0) return out = u, true;
  return false;
}

inline bool dh1_edge(double v, double& out) {
  if (v <= 0.0) return out = 0.0, true;
  if (v >= 1.0) return out = 1.0, true;
  return false;
}

inline CopulaDef clayton(double th) {
  CopulaDef d;
  d.cdf = [th](double u, double v) {
    double c;
    if (cdf_edge(u, v, c)) return c;
    // u (1 + u^th (v^-th - 1))^(-1/th), stable for small u
    const double z = std::pow(u, th) * std::expm1(-th * std::log(v));
    return std::clamp(u * std::exp(-std::log1p(z) / th), 0.0, std::min(u, v));
  };
  d.dh1 = [th](double t, double v) {
    double c;
    if (dh1_edge(v, c)) return c;
    if (t <= 0.0) return 1.0;
    const double z = std::pow(t, th) * std::expm1(-th * std::log(v));
    return std::clamp(std::exp(-(1.0 / th + 1.0) * std::log1p(z)), 0.0, 1.0);
  };
  return d;
}

inline CopulaDef frank(double th) {
  CopulaDef d;
  d.cdf = [th](double u, double v) {
    double c;
    if (cdf_edge(u, v, c)) return c;
    const double num = std::expm1(-th * u) * std::expm1(-th * v);
    return std::clamp(-std::log1p(num / std::expm1(-th)) / th, 0.0, std::min(u, v));
  };
  d.dh1 = [th](double t, double v) {
    double c;
    if (dh1_edge(v, c)) return c;
    const double a = std::expm1(-th * t), b = std::expm1(-th * v), e = std::expm1(-th);
    // e^{-th t} b / (e + a b)
    return std::clamp(std::exp(-th * t) * b / (e + a * b), 0.0, 1.0);
  };
  return d;
}

inline CopulaDef gaussian(double rho) {
  CopulaDef d;
  const double s = std::sqrt(1.0 - rho * rho);
  auto cdf_at = [rho](double y, double v) {
    return [rho, y, v](double u) {
      double c;
      if (cdf_edge(u, v, c)) return c;
      const double x = normal::quantile(normal::clip(u));
      return std::clamp(normal::bivariate_cdf(x, y, rho), 0.0, std::min(u, v));
    };
  };
  auto dh1_at = [rho, s](double y) {
    return [rho, s, y](double t) {
      const double x = normal::quantile(normal::clip(t));
      return normal::cdf((y - rho * x) / s);
    };
  };
  d.cdf_section = [cdf_at](double v) -> Section {
    return cdf_at(normal::quantile(normal::clip(v)), v);
  };
  d.dh1_section = [dh1_at](double v) -> Section {
    double c;
    if (dh1_edge(v, c)) return [c](double) { return c; };
    return dh1_at(normal::quantile(normal::clip(v)));
  };
  d.cdf = [cdf_at](double u, double v) {
    return cdf_at(normal::quantile(normal::clip(v)), v)(u);
  };
  d.dh1 = [dh1_at](double t, double v) {
    double c;
    if (dh1_edge(v, c)) return c;
    return dh1_at(normal::quantile(normal::clip(v)))(t);
  };
  return d;
}

inline CopulaDef gumbel(double th) {
  CopulaDef d;
  // yt = (-log v)^th is shared by a whole section
  auto cdf_at = [th](double yt, double v) {
    return [th, yt, v](double u) {
      double c;
      if (cdf_edge(u, v, c)) return c;
      const double A = std::pow(std::pow(-std::log(u), th) + yt, 1.0 / th);
      return std::clamp(std::exp(-A), 0.0, std::min(u, v));
    };
  };
  auto dh1_at = [th](double yt, double v) {
    return [th, yt, v](double t) {
      if (t <= 0.0) return th == 1.0 ? v : 1.0;
      if (t >= 1.0) return th == 1.0 ? v : 0.0;
      const double x = -std::log(t);
      const double A = std::pow(std::pow(x, th) + yt, 1.0 / th);
      // C(t, v) / t * (x / A)^(th - 1)
      return std::clamp(std::exp(x - A) * std::pow(x / A, th - 1.0), 0.0, 1.0);
    };
  };
  auto yt_of = [th](double v) { return std::pow(-std::log(v), th); };
  d.cdf_section = [cdf_at, yt_of](double v) -> Section {
    return cdf_at(v > 0.0 && v < 1.0 ? yt_of(v) : 0.0, v);
  };
  d.dh1_section = [dh1_at, yt_of](double v) -> Section {
    double c;
    if (dh1_edge(v, c)) return [c](double) { return c; };
    return dh1_at(yt_of(v), v);
  };
  d.cdf = [cdf_at, yt_of](double u, double v) {
    return cdf_at(v > 0.0 && v < 1.0 ? yt_of(v) : 0.0, v)(u);
  };
  d.dh1 = [dh1_at, yt_of](double t, double v) {
    double c;
    if (dh1_edge(v, c)) return c;
    return dh1_at(yt_of(v), v)(t);
  };
  return d;
}

inline CopulaDef joe(double th) {
  CopulaDef d;
  d.cdf = [th](double u, double v) {
    double c;
    if (cdf_edge(u, v, c)) return c;
    const double a = std::pow(1.0 - u, th), b = std::pow(1.0 - v, th);
    return std::clamp(1.0 - std::pow(a + b - a * b, 1.0 / th), 0.0, std::min(u, v));
  };
  d.dh1 = [th](double t, double v) {
    double c;
    if (dh1_edge(v, c)) return c;
    t = std::clamp(t, 0.0, 1.0);
    const double a = std::pow(1.0 - t, th), b = std::pow(1.0 - v, th);
    const double s = a + b - a * b;
    return std::clamp(std::pow(s, 1.0 / th - 1.0) * std::pow(1.0 - t, th - 1.0) * (1.0 - b), 0.0,
                      1.0);
  };
  return d;
}

}  // namespace detail

inline Copula parametric_copula(const ParametricFamily& p) {
  validate(p);
  CopulaDef d;
  switch (p.family) {
    case Family::Clayton: d = detail::clayton(p.theta); break;
    case Family::Frank: d = detail::frank(p.theta); break;
    case Family::Gaussian: d = detail::gaussian(p.theta); break;
    case Family::GumbelHougaard: d = detail::gumbel(p.theta); break;
    case Family::Joe: d = detail::joe(p.theta); break;
  }
  d.name = std::string(family_name(p.family)) + "(" + std::to_string(p.theta) + ")";
  return Copula(std::move(d));
}

// ---------------------------------------------------------------------------
// Reflections

/// v - C(1-u, v)
inline Copula reflect_sigma1(const Copula& c) {
  CopulaDef d;
  d.name = "sigma1(" + c.name() + ")";
  d.cdf = [c](double u, double v) { return v - c.cdf(1.0 - u, v); };
  if (c.analytic_dh1()) d.dh1 = [c](double t, double v) { return c.dh1(1.0 - t, v); };
  d.t_kinks = [c](double v) {
    auto k = c.t_kinks(v);
    for (double& x : k) x = 1.0 - x;
    return k;
  };
  d.v_kinks.assign(c.v_kinks().begin(), c.v_kinks().end());
  d.cdf_section = [c](double v) -> Section {
    Section s = c.cdf_section(v);
    return [s, v](double u) { return v - s(1.0 - u); };
  };
  if (c.analytic_dh1())
    d.dh1_section = [c](double v) -> Section {
      Section s = c.dh1_section(v);
      return [s](double t) { return s(1.0 - t); };
    };
  return Copula(std::move(d));
}

/// u - C(u, 1-v)
inline Copula reflect_sigma2(const Copula& c) {
  CopulaDef d;
  d.name = "sigma2(" + c.name() + ")";
  d.cdf = [c](double u, double v) { return u - c.cdf(u, 1.0 - v); };
  if (c.analytic_dh1()) d.dh1 = [c](double t, double v) { return 1.0 - c.dh1(t, 1.0 - v); };
  d.t_kinks = [c](double v) { return c.t_kinks(1.0 - v); };
  for (double x : c.v_kinks()) d.v_kinks.push_back(1.0 - x);
  std::sort(d.v_kinks.begin(), d.v_kinks.end());
  d.cdf_section = [c](double v) -> Section {
    Section s = c.cdf_section(1.0 - v);
    return [s](double u) { return u - s(u); };
  };
  if (c.analytic_dh1())
    d.dh1_section = [c](double v) -> Section {
      Section s = c.dh1_section(1.0 - v);
      return [s](double t) { return 1.0 - s(t); };
    };
  return Copula(std::move(d));
}

}  // namespace xinu
