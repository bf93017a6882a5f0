#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "xinu/errors.hpp"

namespace xinu {

/// Nodes and weights of an n-point rule on [-1, 1], nodes ascending.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule by Newton iteration on the three-term recurrence.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw domain_error("gauss_legendre: order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) {
        // refresh the derivative at the converged node
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Uniform panel edges on [lo, hi] merged with interior breakpoints.
inline std::vector<double> panel_edges(double lo, double hi, int panels,
                                       std::span<const double> breaks = {}) {
  std::vector<double> e;
  e.reserve(panels + 1 + breaks.size());
  for (int k = 0; k <= panels; ++k) e.push_back(lo + (hi - lo) * k / panels);
  e.back() = hi;
  const double eps = 1e-13 * (hi - lo);
  for (double b : breaks)
    if (b > lo + eps && b < hi - eps) e.push_back(b);
  std::sort(e.begin(), e.end());
  std::vector<double> out;
  out.reserve(e.size());
  for (double x : e)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  if (out.back() != hi) out.back() = hi;
  return out;
}

/// Uniform panels plus geometrically graded panels toward both endpoints:
/// lo + w 4^-k and hi - w 4^-k for k = 1..levels, w the uniform panel width.
/// Grading resolves bounded endpoint singularities such as t^alpha or
/// 1/log(t) behaviour of conditional distributions.
inline std::vector<double> graded_edges(double lo, double hi, int panels, int levels,
                                        std::span<const double> breaks = {}) {
  std::vector<double> extra(breaks.begin(), breaks.end());
  const double w = (hi - lo) / panels;
  double d = w;
  for (int k = 1; k <= levels; ++k) {
    d *= 0.25;
    extra.push_back(lo + d);
    extra.push_back(hi - d);
  }
  return panel_edges(lo, hi, panels, extra);
}

/// A rule mapped onto consecutive panels.
struct CompositeGrid {
  std::vector<double> x;
  std::vector<double> w;
};

inline CompositeGrid composite(const QuadratureRule& rule, std::span<const double> edges) {
  CompositeGrid g;
  const std::size_t m = rule.nodes.size();
  g.x.reserve(m * (edges.size() - 1));
  g.w.reserve(m * (edges.size() - 1));
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]);
    const double r = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t k = 0; k < m; ++k) {
      g.x.push_back(c + r * rule.nodes[k]);
      g.w.push_back(r * rule.weights[k]);
    }
  }
  return g;
}

/// Composite integral of f over the panels described by edges.
/// Like composite(), but panels narrower than a fraction of the uniform width
/// use the cheaper rule.
inline CompositeGrid composite(const QuadratureRule& rule, const QuadratureRule& small,
                               std::span<const double> edges, double uniform_width) {
  CompositeGrid g;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]);
    const double r = 0.5 * (edges[p + 1] - edges[p]);
    const QuadratureRule& q = 2.0 * r < 0.3 * uniform_width ? small : rule;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      g.x.push_back(c + r * q.nodes[k]);
      g.w.push_back(r * q.weights[k]);
    }
  }
  return g;
}

template <class F>
double integrate(const QuadratureRule& rule, std::span<const double> edges, F&& f) {
  double total = 0.0;
  const std::size_t m = rule.nodes.size();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]);
    const double r = 0.5 * (edges[p + 1] - edges[p]);
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += rule.weights[k] * f(c + r * rule.nodes[k]);
    total += r * s;
  }
  return total;
}

}  // namespace xinu
