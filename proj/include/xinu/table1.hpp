#pragma once

#include <string>
#include <vector>

#include "xinu/closed_form.hpp"
#include "xinu/copula.hpp"
#include "xinu/measures.hpp"
#include "xinu/spline.hpp"

namespace xinu {

/// Parameter grid for one family.
struct FamilyScan {
  Family family;
  double lo;
  double hi;
  std::size_t points = 61;
};

inline std::vector<FamilyScan> default_scans() {
  return {{Family::Clayton, 0.5, 4.0},
          {Family::Frank, 2.0, 10.0},
          {Family::Gaussian, 0.3, 0.95},
          {Family::GumbelHougaard, 1.2, 4.0},
          {Family::Joe, 1.1, 3.0}};
}

/// Quadrature used for the scans: coarser than the library default, still
/// far below the 3-decimal resolution of the table.
inline QuadratureSpec table1_quadrature() {
  QuadratureSpec q;
  q.order = 24;
  q.panels = 4;
  q.grading = 12;
  q.grading_order = 12;
  q.tolerance = 1e-7;
  q.max_doublings = 0;
  return q;
}

struct Table1Options {
  QuadratureSpec quadrature = table1_quadrature();
  SplineBoundary boundary = SplineBoundary::Natural;
};

struct Table1Row {
  std::string family;
  double parameter;
  double xi;
  double nu;
  double gap;            // nu - xi
  bool warning = false;  // maximizer not bracketed by the grid
};

struct FamilyScanResult {
  Table1Row row;
  std::vector<double> theta;
  std::vector<double> xi;
  std::vector<double> nu;
};

/// Gap nu - xi on the grid, natural cubic spline through it, closed-form
/// maximization of the spline, then (xi, nu) recomputed at the maximizer.
inline FamilyScanResult scan_family(const FamilyScan& scan, const Table1Options& opt = {}) {
  if (scan.points < 4) throw domain_error("scan_family: need at least 4 grid points");
  if (!(scan.hi > scan.lo)) throw domain_error("scan_family: empty parameter range");
  FamilyScanResult out;
  std::vector<double> g;
  for (std::size_t k = 0; k < scan.points; ++k) {
    const double th = scan.lo + (scan.hi - scan.lo) * k / (scan.points - 1);
    const MeasurePair m = measures(parametric_copula({scan.family, th}), opt.quadrature);
    out.theta.push_back(th);
    out.xi.push_back(m.xi);
    out.nu.push_back(m.nu);
    g.push_back(m.nu - m.xi);
  }
  const CubicSpline spline(out.theta, g, opt.boundary);
  const CubicSpline::Extremum e = spline.argmax();
  const MeasurePair at = measures(parametric_copula({scan.family, e.x}), opt.quadrature);
  out.row = {std::string(family_name(scan.family)), e.x, at.xi, at.nu, at.nu - at.xi, e.at_end};
  return out;
}

/// The boundary family attains the maximal gap exactly at b = 1.
inline Table1Row extremal_row() { return {"extremal", 1.0, Xi(1.0), N(1.0), N(1.0) - Xi(1.0), false}; }

inline std::vector<Table1Row> table1(const std::vector<FamilyScan>& scans = default_scans(),
                                     const Table1Options& opt = {}) {
  std::vector<Table1Row> rows{extremal_row()};
  for (const FamilyScan& s : scans) rows.push_back(scan_family(s, opt).row);
  return rows;
}

}  // namespace xinu
