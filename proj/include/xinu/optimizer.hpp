#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xinu/closed_form.hpp"
#include "xinu/errors.hpp"
#include "xinu/extremal.hpp"
#include "xinu/measures.hpp"

namespace xinu {

/// Maximize nu subject to xi <= c over sections h(t, v) sampled at midpoint
/// nodes t_i = (i + 1/2)/n_t, v_j = (j + 1/2)/n_v with uniform weights.
struct GridProblem {
  std::size_t n_t = 40;
  std::size_t n_v = 40;
  double c = 32.0 / 105.0;

  void validate() const {
    if (n_t < 8 || n_v < 8) throw domain_error("GridProblem: grid orders must be >= 8");
    if (!(c > 0.0 && c < 1.0)) throw domain_error("GridProblem: c must lie in (0, 1)");
  }
  double t(std::size_t i) const { return (static_cast<double>(i) + 0.5) / static_cast<double>(n_t); }
  double v(std::size_t j) const { return (static_cast<double>(j) + 0.5) / static_cast<double>(n_v); }
  double x(std::size_t i) const { return (1.0 - t(i)) * (1.0 - t(i)); }
};

/// Dense row-major matrix, rows along t and columns along v.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct KktResiduals {
  double stationarity = 0.0;     // max |-2x + 2 mu h + gamma - alpha + beta|
  double marginal = 0.0;         // max column constraint violation
  double complementarity = 0.0;  // max of |alpha h|, |beta (1 - h)|, |mu (xi - c)|
  double dual_feasibility = 0.0; // negative part of mu, alpha, beta
};

enum class QpSource { Dual, Oracle };

struct QpSolution {
  QpSource source = QpSource::Dual;
  Matrix h;
  double mu = 0.0;
  double achieved_xi = 0.0;  // dual: exact value of C_{1/mu}; oracle: grid sum
  double achieved_nu = 0.0;
  double grid_xi = 0.0;      // midpoint sums of the sampled h
  double grid_nu = 0.0;
  double c = 0.0;            // level actually solved for (after clamping)
  bool c_clamped = false;
  std::vector<double> q;     // per-column level, gamma = 2 q
  KktResiduals kkt;

  double b_c() const { return 1.0 / mu; }
};

namespace detail {

inline double clamp_level(double c, bool& clamped) {
  const double lo = 1e-4, hi = 1.0 - 1e-4;
  clamped = c < lo || c > hi;
  return std::clamp(c, lo, hi);
}

inline void grid_measures(const GridProblem& p, const Matrix& h, double& xi, double& nu) {
  double sq = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < p.n_t; ++i)
    for (std::size_t j = 0; j < p.n_v; ++j) {
      const double v = h(i, j);
      sq += v * v;
      lin += p.x(i) * v;
    }
  const double w = 1.0 / static_cast<double>(p.n_t * p.n_v);
  xi = 6.0 * w * sq - 2.0;
  nu = 12.0 * w * lin - 2.0;
}

// Reconstructs the column levels of an arbitrary feasible h from the
// stationarity condition x - q = mu h on the open entries.
inline std::vector<double> estimate_levels(const GridProblem& p, const Matrix& h, double mu) {
  constexpr double eps = 1e-9;
  std::vector<double> q(p.n_v);
  for (std::size_t j = 0; j < p.n_v; ++j) {
    std::vector<double> open;
    double zero_hi = -1e300, one_lo = 1e300;
    for (std::size_t i = 0; i < p.n_t; ++i) {
      const double v = h(i, j), x = p.x(i);
      if (v > eps && v < 1.0 - eps) open.push_back(x - mu * v);
      else if (v <= eps) zero_hi = std::max(zero_hi, x);
      else one_lo = std::min(one_lo, x - mu);
    }
    if (!open.empty()) {
      std::nth_element(open.begin(), open.begin() + open.size() / 2, open.end());
      q[j] = open[open.size() / 2];
    } else if (zero_hi > -1e300 && one_lo < 1e300) {
      q[j] = 0.5 * (zero_hi + one_lo);
    } else {
      q[j] = zero_hi > -1e300 ? zero_hi : one_lo;
    }
  }
  return q;
}

}  // namespace detail

/// Residuals of the first-order conditions with gamma = 2q,
/// alpha = (2q - 2x)_+ and beta = (2x - 2q - 2 mu)_+ at every node.
inline KktResiduals kkt_check(const QpSolution& s, const GridProblem& p) {
  const std::vector<double> q =
      s.q.size() == p.n_v ? s.q : detail::estimate_levels(p, s.h, s.mu);
  KktResiduals r;
  r.dual_feasibility = std::max(0.0, -s.mu);
  for (std::size_t i = 0; i < p.n_t; ++i)
    for (std::size_t j = 0; j < p.n_v; ++j) {
      const double x = p.x(i), h = s.h(i, j);
      const double alpha = std::max(0.0, 2.0 * q[j] - 2.0 * x);
      const double beta = std::max(0.0, 2.0 * x - 2.0 * q[j] - 2.0 * s.mu);
      r.stationarity =
          std::max(r.stationarity, std::abs(-2.0 * x + 2.0 * s.mu * h + 2.0 * q[j] - alpha + beta));
      r.complementarity = std::max({r.complementarity, std::abs(alpha * h), std::abs(beta * (1.0 - h))});
    }
  r.complementarity = std::max(r.complementarity, std::abs(s.mu * (s.achieved_xi - s.c)));
  // The dual's columns are exact sections, so their constraint is Phi(q_j) = v_j;
  // the oracle's are plain grid sums.
  if (s.source == QpSource::Dual) {
    const double b = s.b_c();
    for (std::size_t j = 0; j < p.n_v; ++j)
      r.marginal = std::max(r.marginal, std::abs(phi(b, q[j]) - p.v(j)));
  } else {
    for (std::size_t j = 0; j < p.n_v; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < p.n_t; ++i) col += s.h(i, j);
      r.marginal = std::max(r.marginal, std::abs(col / static_cast<double>(p.n_t) - p.v(j)));
    }
  }
  return r;
}

/// The clamped candidate h_mu(t, v) = clamp(((1-t)^2 - q(v)) / mu, 0, 1) at the nodes.
inline Matrix dual_candidate(const GridProblem& p, double mu, std::vector<double>* levels = nullptr) {
  const double b = 1.0 / mu;
  Matrix h(p.n_t, p.n_v);
  std::vector<double> q(p.n_v);
  for (std::size_t j = 0; j < p.n_v; ++j) {
    q[j] = solve_q(b, p.v(j));
    for (std::size_t i = 0; i < p.n_t; ++i) h(i, j) = std::clamp((p.x(i) - q[j]) / mu, 0.0, 1.0);
  }
  if (levels) *levels = std::move(q);
  return h;
}

/// Dual bisection: mu is chosen so that the clamped family meets the level,
/// using that mu -> Xi(1/mu) is strictly decreasing.
inline QpSolution solve_dual(const GridProblem& p) {
  p.validate();
  QpSolution s;
  s.source = QpSource::Dual;
  s.c = detail::clamp_level(p.c, s.c_clamped);
  double lo = std::log(1e-6), hi = std::log(1e6);  // in log mu
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (!(m > lo && m < hi)) break;
    (Xi(std::exp(-m)) > s.c ? lo : hi) = m;
  }
  s.mu = std::exp(hi);  // the side with xi <= c
  s.h = dual_candidate(p, s.mu, &s.q);
  const ExtremalCopula cb(s.b_c());
  const MeasurePair m = measures(cb, {.method = QuadratureMethod::RegimeExact});
  s.achieved_xi = m.xi;
  s.achieved_nu = m.nu;
  detail::grid_measures(p, s.h, s.grid_xi, s.grid_nu);
  s.kkt = kkt_check(s, p);
  return s;
}

struct OracleOptions {
  double mu_lo = 1e-6;
  double mu_hi = 1e6;
  int max_bisection = 200;
  int max_gradient_steps = 10000;
  int max_projection_sweeps = 10000;
  double projection_tol = 1e-10;  // column residual in marginal units
  double step_tol = 1e-13;        // max entry change that ends the gradient loop
  double xi_tol = 1e-12;          // bisection stops once |grid xi - c| is below this
};

namespace detail {

// Dykstra's alternating projections onto [0,1]^n and {sum y = target}.
inline void project_column(std::vector<double>& y, double target, const OracleOptions& opt,
                           double& residual) {
  const std::size_t n = y.size();
  std::vector<double> r(n, 0.0);  // correction for the box
  std::vector<double> z(n);
  residual = 1e300;
  for (int sweep = 0; sweep < opt.max_projection_sweeps; ++sweep) {
    double sum = 0.0;
    for (double v : y) sum += v;
    const double shift = (target - sum) / static_cast<double>(n);
    double change = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = y[i] + shift;
      const double w = std::clamp(z[i] + r[i], 0.0, 1.0);
      r[i] = z[i] + r[i] - w;
      change = std::max(change, std::abs(w - y[i]));
      y[i] = w;
      total += w;
    }
    residual = std::abs(total - target) / static_cast<double>(n);
    if (residual <= opt.projection_tol && change <= 1e-15) return;
  }
  if (residual > opt.projection_tol)
    throw convergence_error("solve_qp_oracle: column projection did not converge", {residual});
}

inline void project(const GridProblem& p, Matrix& h, const OracleOptions& opt, double& residual) {
  std::vector<double> col(p.n_t);
  residual = 0.0;
  for (std::size_t j = 0; j < p.n_v; ++j) {
    for (std::size_t i = 0; i < p.n_t; ++i) col[i] = h(i, j);
    double r;
    project_column(col, p.v(j) * static_cast<double>(p.n_t), opt, r);
    residual = std::max(residual, r);
    for (std::size_t i = 0; i < p.n_t; ++i) h(i, j) = col[i];
  }
}

inline double lagrangian(const GridProblem& p, const Matrix& h, double mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.n_t; ++i)
    for (std::size_t j = 0; j < p.n_v; ++j) s += 2.0 * p.x(i) * h(i, j) - mu * h(i, j) * h(i, j);
  return s;
}

// Projected gradient ascent on sum 2 x h - mu h^2 over the feasible set.
inline void ascend(const GridProblem& p, Matrix& h, double mu, const OracleOptions& opt) {
  double step = 1.0 / (2.0 * mu + mu);  // Hessian is 2 mu I; leave a margin
  double value = lagrangian(p, h, mu);
  double residual = 0.0;
  Matrix next(p.n_t, p.n_v);
  for (int it = 0; it < opt.max_gradient_steps; ++it) {
    for (std::size_t i = 0; i < p.n_t; ++i)
      for (std::size_t j = 0; j < p.n_v; ++j)
        next(i, j) = h(i, j) + step * (2.0 * p.x(i) - 2.0 * mu * h(i, j));
    project(p, next, opt, residual);
    const double nv = lagrangian(p, next, mu);
    if (nv < value - 1e-14 * (1.0 + std::abs(value))) {
      step *= 0.5;
      if (step < 1e-12 / mu) break;
      continue;
    }
    double change = 0.0;
    for (std::size_t k = 0; k < h.data.size(); ++k)
      change = std::max(change, std::abs(next.data[k] - h.data[k]));
    std::swap(h, next);
    value = nv;
    if (change <= opt.step_tol) return;
  }
  throw convergence_error("solve_qp_oracle: gradient iteration cap reached at mu = " +
                              std::to_string(mu),
                          {residual});
}

}  // namespace detail

/// Independent check of the dual: projected gradient on the Lagrangian for a
/// fixed mu, with an outer bisection on mu until the grid xi meets the level.
/// The seed only perturbs the starting point.
inline QpSolution solve_qp_oracle(const GridProblem& p, std::uint64_t seed = 0,
                                  const OracleOptions& opt = {}) {
  p.validate();
  if (p.n_t > 128 || p.n_v > 128) throw domain_error("solve_qp_oracle: grid orders must be <= 128");
  QpSolution s;
  s.source = QpSource::Oracle;
  s.c = detail::clamp_level(p.c, s.c_clamped);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  Matrix h(p.n_t, p.n_v);
  for (std::size_t i = 0; i < p.n_t; ++i)
    for (std::size_t j = 0; j < p.n_v; ++j) h(i, j) = std::clamp(p.v(j) + jitter(rng), 0.0, 1.0);
  double residual = 0.0;
  detail::project(p, h, opt, residual);

  auto xi_at = [&](double mu, Matrix& start) {
    detail::ascend(p, start, mu, opt);
    double xi, nu;
    detail::grid_measures(p, start, xi, nu);
    return xi;
  };

  double lo = std::log(opt.mu_lo), hi = std::log(opt.mu_hi);
  Matrix h_hi = h;
  xi_at(std::exp(hi), h_hi);
  Matrix work = h_hi;
  for (int it = 0; it < opt.max_bisection; ++it) {
    const double m = 0.5 * (lo + hi);
    if (!(m > lo && m < hi)) break;
    const double xi = xi_at(std::exp(m), work);
    if (xi > s.c) {
      lo = m;
    } else {
      hi = m;
      h_hi = work;
      if (s.c - xi <= opt.xi_tol) break;
    }
  }
  s.mu = std::exp(hi);
  s.h = std::move(h_hi);
  detail::grid_measures(p, s.h, s.grid_xi, s.grid_nu);
  s.achieved_xi = s.grid_xi;
  s.achieved_nu = s.grid_nu;
  s.q = detail::estimate_levels(p, s.h, s.mu);
  s.kkt = kkt_check(s, p);
  return s;
}

/// sqrt of the grid-weighted mean squared difference.
inline double l2_distance(const GridProblem& p, const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) s += (a.data[k] - b.data[k]) * (a.data[k] - b.data[k]);
  return std::sqrt(s / static_cast<double>(p.n_t * p.n_v));
}

}  // namespace xinu
