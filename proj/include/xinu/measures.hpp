#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

#include "xinu/checkerboard.hpp"
#include "xinu/copula.hpp"
#include "xinu/errors.hpp"
#include "xinu/extremal.hpp"
#include "xinu/gauss_legendre.hpp"

namespace xinu {

enum class QuadratureMethod { TensorGL, RegimeExact };

struct QuadratureSpec {
  int order = 64;           // Gauss-Legendre nodes per panel and axis
  int panels = 8;           // uniform panels per axis before adding kinks
  double tolerance = 1e-8;  // refinement stops once the P vs 2P change is below this
  QuadratureMethod method = QuadratureMethod::TensorGL;
  int max_doublings = 1;    // extra doublings beyond 2P while above tolerance
  int grading = 12;         // geometric endpoint levels per axis
  int grading_order = 16;   // nodes on graded and other narrow panels

  void validate() const {
    if (order < 2) throw domain_error("QuadratureSpec: order must be >= 2");
    if (panels < 1) throw domain_error("QuadratureSpec: panels must be >= 1");
    if (!(tolerance > 0.0)) throw domain_error("QuadratureSpec: tolerance must be > 0");
    if (max_doublings < 0) throw domain_error("QuadratureSpec: max_doublings must be >= 0");
    if (grading < 0) throw domain_error("QuadratureSpec: grading must be >= 0");
    if (grading_order < 2) throw domain_error("QuadratureSpec: grading_order must be >= 2");
  }
};

/// A quadrature value and its refinement-based error estimate.
struct Estimate {
  double value;
  double error;
};

struct MeasurePair {
  double xi;
  double nu;
  double error;
};

namespace detail {

/// Runs body(k) for k in [0, n) on a few threads; each k writes its own slot,
/// so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n / 64 + 1);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < n; k += workers) body(k);
    });
  for (auto& t : pool) t.join();
}

/// Node layout along one axis for a given spec.
struct AxisLayout {
  QuadratureRule rule;
  QuadratureRule small;
  int levels;

  explicit AxisLayout(const QuadratureSpec& spec)
      : rule(gauss_legendre(spec.order)),
        small(gauss_legendre(std::min(spec.order, spec.grading_order))),
        levels(spec.grading) {}

  CompositeGrid grid(int panels, std::span<const double> kinks) const {
    const auto edges = graded_edges(0.0, 1.0, panels, levels, kinks);
    return composite(rule, small, edges, 1.0 / panels);
  }
};

/// Outer integral over v of a K-vector of inner section integrals.
template <std::size_t K, class Inner>
std::array<double, K> outer(const AxisLayout& axis, int panels, std::span<const double> v_kinks,
                            Inner& inner) {
  inner.prepare(panels);
  const CompositeGrid g = axis.grid(panels, v_kinks);
  std::vector<std::array<double, K>> vals(g.x.size());
  parallel_for(g.x.size(), [&](std::size_t k) { vals[k] = inner(g.x[k]); });
  std::array<double, K> out{};
  for (std::size_t k = 0; k < g.x.size(); ++k)
    for (std::size_t i = 0; i < K; ++i) out[i] += g.w[k] * vals[k][i];
  return out;
}

/// Evaluates at P and 2P panels, doubling further while the change exceeds
/// the tolerance. The last value is returned with the last change as error.
template <std::size_t K, class Inner>
std::array<Estimate, K> refine(const QuadratureSpec& spec, std::span<const double> v_kinks,
                               Inner&& inner) {
  spec.validate();
  const AxisLayout axis(spec);
  int p = spec.panels;
  auto coarse = outer<K>(axis, p, v_kinks, inner);
  auto fine = outer<K>(axis, 2 * p, v_kinks, inner);
  auto change = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < K; ++i) m = std::max(m, std::abs(fine[i] - coarse[i]));
    return m;
  };
  for (int d = 0; d < spec.max_doublings && change() > spec.tolerance; ++d) {
    p *= 2;
    coarse = fine;
    fine = outer<K>(axis, 2 * p, v_kinks, inner);
  }
  std::array<Estimate, K> out;
  for (std::size_t i = 0; i < K; ++i) out[i] = {fine[i], std::abs(fine[i] - coarse[i])};
  return out;
}

// Inner t-integrals. The kink-free grid is shared by all v of one pass.
struct InnerBase {
  const Copula& c;
  AxisLayout axis;
  int panels = 0;
  CompositeGrid plain;

  InnerBase(const Copula& c_, const QuadratureSpec& spec) : c(c_), axis(spec) {}
  void prepare(int p) {
    panels = p;
    plain = axis.grid(p, {});
  }
  template <class F>
  void for_grid(double v, F&& f) const {
    const auto kinks = c.t_kinks(v);
    if (kinks.empty()) return f(plain);
    f(axis.grid(panels, kinks));
  }
};

// Slot 0: int h^2 dt, slot 1: int (1-t)^2 h dt.
struct DhInner : InnerBase {
  using InnerBase::InnerBase;
  std::array<double, 2> operator()(double v) const {
    const Section s = c.dh1_section(v);
    std::array<double, 2> acc{};
    for_grid(v, [&](const CompositeGrid& g) {
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double t = g.x[k], h = s(t);
        acc[0] += g.w[k] * h * h;
        acc[1] += g.w[k] * h * (1.0 - t) * (1.0 - t);
      }
    });
    return acc;
  }
};

struct CdfInner : InnerBase {
  using InnerBase::InnerBase;
  std::array<double, 1> operator()(double v) const {
    const Section s = c.cdf_section(v);
    double acc = 0.0;
    for_grid(v, [&](const CompositeGrid& g) {
      for (std::size_t k = 0; k < g.x.size(); ++k) acc += g.w[k] * (1.0 - g.x[k]) * s(g.x[k]);
    });
    return {acc};
  }
};

}  // namespace detail

/// xi = 6 int int (d1 C)^2 - 2 by panelled tensor Gauss-Legendre.
inline Estimate xi_of(const Copula& c, const QuadratureSpec& spec = {}) {
  detail::DhInner inner(c, spec);
  auto r = detail::refine<2>(spec, c.v_kinks(), inner);
  return {6.0 * r[0].value - 2.0, 6.0 * r[0].error};
}

/// nu = 24 int int (1-u) C(u,v) - 2.
inline Estimate nu_of(const Copula& c, const QuadratureSpec& spec = {}) {
  detail::CdfInner inner(c, spec);
  auto r = detail::refine<1>(spec, c.v_kinks(), inner);
  return {24.0 * r[0].value - 2.0, 24.0 * r[0].error};
}

/// nu = 12 int int (1-t)^2 d1 C(t,v) - 2.
inline Estimate nu_of_dh1(const Copula& c, const QuadratureSpec& spec = {}) {
  detail::DhInner inner(c, spec);
  auto r = detail::refine<2>(spec, c.v_kinks(), inner);
  return {12.0 * r[1].value - 2.0, 12.0 * r[1].error};
}

/// xi and the dh1 form of nu from a single pass over the sections.
inline MeasurePair measures(const Copula& c, const QuadratureSpec& spec = {}) {
  detail::DhInner inner(c, spec);
  auto r = detail::refine<2>(spec, c.v_kinks(), inner);
  return {6.0 * r[0].value - 2.0, 12.0 * r[1].value - 2.0,
          std::max(6.0 * r[0].error, 12.0 * r[1].error)};
}

namespace detail {
inline bool regime_exact(const ExtremalCopula& c, const QuadratureSpec& spec) {
  return spec.method == QuadratureMethod::RegimeExact &&
         c.limit() == ExtremalCopula::Limit::None;
}

struct ExactInner {
  const ExtremalCopula& c;
  void prepare(int) {}
  std::array<double, 2> operator()(double v) const {
    const SectionIntegrals s = c.integrals(v);
    return {s.square, s.weighted};
  }
};
}  // namespace detail

/// For C_b with RegimeExact the inner t-integrals are exact; only v is numeric.
inline Estimate xi_of(const ExtremalCopula& c, const QuadratureSpec& spec = {}) {
  if (!detail::regime_exact(c, spec)) return xi_of(c.as_copula(), spec);
  detail::ExactInner inner{c};
  const auto kinks = c.v_kinks();
  auto r = detail::refine<2>(spec, kinks, inner);
  return {6.0 * r[0].value - 2.0, 6.0 * r[0].error};
}

inline Estimate nu_of_dh1(const ExtremalCopula& c, const QuadratureSpec& spec = {}) {
  if (!detail::regime_exact(c, spec)) return nu_of_dh1(c.as_copula(), spec);
  detail::ExactInner inner{c};
  const auto kinks = c.v_kinks();
  auto r = detail::refine<2>(spec, kinks, inner);
  return {12.0 * r[1].value - 2.0, 12.0 * r[1].error};
}

inline Estimate nu_of(const ExtremalCopula& c, const QuadratureSpec& spec = {}) {
  return nu_of(c.as_copula(), spec);
}

inline MeasurePair measures(const ExtremalCopula& c, const QuadratureSpec& spec = {}) {
  if (!detail::regime_exact(c, spec)) return measures(c.as_copula(), spec);
  detail::ExactInner inner{c};
  const auto kinks = c.v_kinks();
  auto r = detail::refine<2>(spec, kinks, inner);
  return {6.0 * r[0].value - 2.0, 12.0 * r[1].value - 2.0,
          std::max(6.0 * r[0].error, 12.0 * r[1].error)};
}

/// Exact xi and nu of a checkerboard. Within cell (i, j) the section is
/// n (A + f B) with A the row mass left of column j, B the cell mass and
/// f in [0, 1] the position of v inside the cell.
inline MeasurePair measures_checkerboard(const CheckerboardCopula& c) {
  const std::size_t n = c.order();
  const double dn = static_cast<double>(n);
  double sq = 0.0, wt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = 1.0 - static_cast<double>(i) / dn, x1 = 1.0 - static_cast<double>(i + 1) / dn;
    const double w = (x0 * x0 * x0 - x1 * x1 * x1) / 3.0;  // int over the row of (1-t)^2
    double row_sq = 0.0, row_lin = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.row_prefix(i, j), b = c.mass(i, j);
      row_sq += a * a + a * b + b * b / 3.0;
      row_lin += a + 0.5 * b;
    }
    sq += row_sq;
    wt += w * row_lin;
  }
  return {6.0 * sq - 2.0, 12.0 * wt - 2.0, 0.0};
}

}  // namespace xinu
