#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "xinu/copula.hpp"
#include "xinu/errors.hpp"

namespace xinu {

/// Piecewise-uniform copula on an n x n grid. Cell (i, j) covers
/// [i/n, (i+1)/n] x [j/n, (j+1)/n] (zero based, i along u).
class CheckerboardCopula {
 public:
  static constexpr double kSumTolerance = 1e-12;

  CheckerboardCopula(std::size_t n, std::vector<double> mass) {
    if (n < 1) throw validation_error("checkerboard: order must be >= 1");
    if (mass.size() != n * n)
      throw dimension_error("checkerboard: expected " + std::to_string(n * n) + " masses, got " +
                            std::to_string(mass.size()));
    auto d = std::make_shared<Data>();
    d->n = n;
    d->mass = std::move(mass);
    check(*d);
    build(*d);
    data_ = std::move(d);
  }

  std::size_t order() const { return data_->n; }
  double mass(std::size_t i, std::size_t j) const { return data_->mass[i * data_->n + j]; }
  std::span<const double> masses() const { return data_->mass; }

  /// Exact bilinear interpolation of the cumulative mass.
  double cdf(double u, double v) const {
    const Data& d = *data_;
    const auto [I, fu] = locate(u);
    const auto [J, fv] = locate(v);
    const std::size_t m = d.n + 1;
    const double p00 = d.cum[I * m + J];
    const double p10 = I < d.n ? d.cum[(I + 1) * m + J] : p00;
    const double p01 = J < d.n ? d.cum[I * m + J + 1] : p00;
    const double b = (I < d.n && J < d.n) ? d.mass[I * d.n + J] : 0.0;
    return p00 + fu * (p10 - p00) + fv * (p01 - p00) + fu * fv * b;
  }

  /// Piecewise-constant in t (right-continuous), linear in v within a cell.
  double dh1(double t, double v) const {
    const Data& d = *data_;
    std::size_t I = t <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(t * d.n));
    I = std::min(I, d.n - 1);
    const auto [J, fv] = locate(v);
    const double a = d.rowcum[I * (d.n + 1) + J];
    const double b = J < d.n ? d.mass[I * d.n + J] : 0.0;
    return std::clamp(d.n * (a + fv * b), 0.0, 1.0);
  }

  /// Mass of row i strictly left of column j.
  double row_prefix(std::size_t i, std::size_t j) const {
    return data_->rowcum[i * (data_->n + 1) + j];
  }

  Copula as_copula() const {
    CopulaDef def;
    def.name = "checkerboard(" + std::to_string(order()) + ")";
    auto self = *this;
    def.cdf = [self](double u, double v) { return self.cdf(u, v); };
    def.dh1 = [self](double t, double v) { return self.dh1(t, v); };
    const std::size_t n = order();
    std::vector<double> lines;
    for (std::size_t k = 1; k < n; ++k) lines.push_back(static_cast<double>(k) / n);
    def.t_kinks = [lines](double) { return lines; };
    def.v_kinks = lines;
    return Copula(std::move(def));
  }

 private:
  struct Data {
    std::size_t n = 0;
    std::vector<double> mass;
    std::vector<double> cum;     // (n+1)^2, cum[i][j] = sum over cells left/below
    std::vector<double> rowcum;  // n x (n+1)
  };

  static void check(const Data& d) {
    const std::size_t n = d.n;
    const double target = 1.0 / static_cast<double>(n);
    for (double m : d.mass)
      if (!(m >= 0.0)) throw validation_error("checkerboard: negative or NaN cell mass");
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        r += d.mass[i * n + j];
        c += d.mass[j * n + i];
      }
      if (std::abs(r - target) > kSumTolerance)
        throw validation_error("checkerboard: row " + std::to_string(i) + " sums to " +
                               std::to_string(r) + ", expected 1/n");
      if (std::abs(c - target) > kSumTolerance)
        throw validation_error("checkerboard: column " + std::to_string(i) + " sums to " +
                               std::to_string(c) + ", expected 1/n");
    }
  }

  static void build(Data& d) {
    const std::size_t n = d.n, m = n + 1;
    d.cum.assign(m * m, 0.0);
    d.rowcum.assign(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d.rowcum[i * m + j + 1] = d.rowcum[i * m + j] + d.mass[i * n + j];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= n; ++j) d.cum[(i + 1) * m + j] = d.cum[i * m + j] + d.rowcum[i * m + j];
  }

  // Cell index and fractional offset; index n only when x >= 1.
  std::pair<std::size_t, double> locate(double x) const {
    const std::size_t n = data_->n;
    if (x <= 0.0) return {0, 0.0};
    if (x >= 1.0) return {n, 0.0};
    const double s = x * static_cast<double>(n);
    const auto k = std::min(static_cast<std::size_t>(std::floor(s)), n - 1);
    return {k, s - static_cast<double>(k)};
  }

  std::shared_ptr<const Data> data_;
};

/// Cell masses are C-volumes of the grid cells.
inline CheckerboardCopula discretize(const Copula& c, std::size_t n = 64) {
  if (n < 2) throw domain_error("discretize: grid order must be >= 2");
  const std::size_t m = n + 1;
  std::vector<double> g(m * m);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    for (std::size_t j = 0; j <= n; ++j) {
      const double v = static_cast<double>(j) / n;
      double val;
      if (i == 0 || j == 0) val = 0.0;
      else if (i == n) val = v;
      else if (j == n) val = u;
      else val = c.cdf(u, v);
      g[i * m + j] = val;
    }
  }
  std::vector<double> mass(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double vol = g[(i + 1) * m + j + 1] - g[i * m + j + 1] - g[(i + 1) * m + j] + g[i * m + j];
      mass[i * n + j] = vol < 0.0 && vol > -1e-12 ? 0.0 : vol;
    }
  return CheckerboardCopula(n, std::move(mass));
}

/// Grid version of the shuffle T_p: rows at or above (1-p) n are reversed in u.
inline CheckerboardCopula shuffle(const CheckerboardCopula& c, double p) {
  const std::size_t n = c.order();
  if (!(p >= 0.0 && p <= 1.0)) throw domain_error("shuffle: p must lie in [0, 1]");
  const double pn = p * static_cast<double>(n);
  const double k = std::round(pn);
  if (std::abs(pn - k) > 1e-9)
    throw precision_error("shuffle: p*n = " + std::to_string(pn) +
                          " is not an integer; round p to k/n with n = " + std::to_string(n));
  const std::size_t s = n - static_cast<std::size_t>(k);
  std::vector<double> mass(c.masses().begin(), c.masses().end());
  for (std::size_t i = s; i < n; ++i) {
    const std::size_t src = s + (n - 1 - i);
    for (std::size_t j = 0; j < n; ++j) mass[i * n + j] = c.mass(src, j);
  }
  return CheckerboardCopula(n, std::move(mass));
}

/// (1 - lambda) c0 + lambda c1, cellwise.
inline CheckerboardCopula mix(const CheckerboardCopula& c0, const CheckerboardCopula& c1,
                              double lambda) {
  if (c0.order() != c1.order())
    throw dimension_error("mix: grid orders differ (" + std::to_string(c0.order()) + " vs " +
                          std::to_string(c1.order()) + ")");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw domain_error("mix: lambda must lie in [0, 1]");
  std::vector<double> mass(c0.masses().size());
  for (std::size_t k = 0; k < mass.size(); ++k)
    mass[k] = (1.0 - lambda) * c0.masses()[k] + lambda * c1.masses()[k];
  return CheckerboardCopula(c0.order(), std::move(mass));
}

/// Exact L2 inner product of the dh1 sections of two checkerboards.
inline double section_inner_product(const CheckerboardCopula& c0, const CheckerboardCopula& c1) {
  if (c0.order() != c1.order()) throw dimension_error("section_inner_product: grid orders differ");
  const std::size_t n = c0.order();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a0 = c0.row_prefix(i, j), a1 = c1.row_prefix(i, j);
      const double b0 = c0.mass(i, j), b1 = c1.mass(i, j);
      s += a0 * a1 + 0.5 * (a0 * b1 + a1 * b0) + b0 * b1 / 3.0;
    }
  return s;
}

}  // namespace xinu
