#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "xinu/errors.hpp"

namespace xinu {

enum class SplineBoundary { Natural, NotAKnot };

/// Interpolating cubic spline stored through its knot second derivatives.
class CubicSpline {
 public:
  struct Extremum {
    double x;
    double value;
    std::size_t interval;
    bool at_end;  // maximizer sits on the first or last knot
  };

  CubicSpline(std::vector<double> x, std::vector<double> y,
              SplineBoundary bc = SplineBoundary::Natural)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw dimension_error("CubicSpline: need >= 3 matching knots");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i])) throw domain_error("CubicSpline: knots must increase strictly");
    if (bc == SplineBoundary::NotAKnot && n < 4)
      throw dimension_error("CubicSpline: not-a-knot needs >= 4 knots");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      A(i, i - 1) = h0;
      A(i, i) = 2.0 * (h0 + h1);
      A(i, i + 1) = h1;
      rhs(i) = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    if (bc == SplineBoundary::Natural) {
      A(0, 0) = 1.0;
      A(n - 1, n - 1) = 1.0;
    } else {
      // continuous third derivative across the second and second-to-last knots
      const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
      A(0, 0) = h1;
      A(0, 1) = -(h0 + h1);
      A(0, 2) = h0;
      const double g0 = x_[n - 2] - x_[n - 3], g1 = x_[n - 1] - x_[n - 2];
      A(n - 1, n - 3) = g1;
      A(n - 1, n - 2) = -(g0 + g1);
      A(n - 1, n - 1) = g0;
    }
    const Eigen::VectorXd m = A.partialPivLu().solve(rhs);
    m_.assign(m.data(), m.data() + n);
  }

  double operator()(double x) const {
    const std::size_t i = interval(x);
    return eval(i, x - x_[i]);
  }

  double derivative(double x) const {
    const std::size_t i = interval(x);
    const double s = x - x_[i];
    const auto [a, b, c] = slope_coefficients(i);
    return (a * s + b) * s + c;
  }

  /// Global maximizer: per interval, the endpoints and the real roots of the
  /// quadratic derivative.
  Extremum argmax() const {
    Extremum best{x_.front(), y_.front(), 0, true};
    auto consider = [&](std::size_t i, double s) {
      const double v = eval(i, s);
      if (v > best.value) best = {x_[i] + s, v, i, false};
    };
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      const double h = x_[i + 1] - x_[i];
      consider(i, h);
      const auto [a, b, c] = slope_coefficients(i);
      for (double s : quadratic_roots(a, b, c))
        if (s > 0.0 && s < h) consider(i, s);
    }
    best.at_end = best.x == x_.front() || best.x == x_.back();
    return best;
  }

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& second_derivatives() const { return m_; }

 private:
  std::size_t interval(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
  }

  double eval(std::size_t i, double s) const {
    const double h = x_[i + 1] - x_[i], r = h - s;
    return m_[i] * r * r * r / (6.0 * h) + m_[i + 1] * s * s * s / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * r + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * s;
  }

  // S'(x_i + s) = a s^2 + b s + c
  std::tuple<double, double, double> slope_coefficients(std::size_t i) const {
    const double h = x_[i + 1] - x_[i];
    const double a = (m_[i + 1] - m_[i]) / (2.0 * h);
    const double b = m_[i];
    const double c = (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0 - m_[i] * h / 2.0;
    return {a, b, c};
  }

  static std::vector<double> quadratic_roots(double a, double b, double c) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0) return {};
    if (std::abs(a) <= 1e-14 * scale) {
      if (b == 0.0) return {};
      return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> r;
    if (qq != 0.0) r.push_back(c / qq);
    r.push_back(qq / a);
    return r;
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace xinu
