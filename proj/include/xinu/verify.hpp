#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <tuple>
#include <string>
#include <vector>

#include "xinu/checkerboard.hpp"
#include "xinu/closed_form.hpp"
#include "xinu/extremal.hpp"
#include "xinu/measures.hpp"
#include "xinu/optimizer.hpp"
#include "xinu/region.hpp"
#include "xinu/table1.hpp"

namespace xinu::verify {

/// One measured quantity against its tolerance; pass iff measured <= tolerance.
struct Line {
  std::string label;
  double measured;
  double tolerance;
  bool pass() const { return measured <= tolerance; }
};

struct Result {
  std::string name;
  int criterion;
  std::string title;
  std::vector<Line> lines;
  bool pass() const {
    return std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.pass(); });
  }
  const Line* worst() const {
    const Line* w = nullptr;
    double ratio = -1.0;
    for (const Line& l : lines) {
      const double r = l.tolerance > 0 ? l.measured / l.tolerance : (l.measured > 0 ? 1e300 : 0);
      if (r > ratio) ratio = r, w = &l;
    }
    return w;
  }
};

struct Options {
  std::size_t qp_grid = 40;  // QP tolerances scale with 40 / qp_grid
  std::uint64_t seed = 1;
};

/// Reference (parameter, xi, nu, nu - xi) of the gap-maximizing members.
struct ReferenceRow {
  Family family;
  double parameter, xi, nu, gap;
};

inline const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> rows{
      {Family::Clayton, 1.925, 0.324, 0.719, 0.395},
      {Family::Frank, 5.746, 0.312, 0.695, 0.383},
      {Family::Gaussian, 0.682, 0.284, 0.665, 0.381},
      {Family::GumbelHougaard, 2.106, 0.344, 0.689, 0.345},
      {Family::Joe, 1.6, 0.343, 0.717, 0.374},
  };
  return rows;
}

namespace checks {

inline std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

inline Result anchor_values(const Options&) {
  Result r{"anchor-values", 1, "exact values at b = 1", {}};
  r.lines.push_back({"|Xi(1) - 32/105|", std::abs(Xi(1.0) - 32.0 / 105.0), 1e-12});
  r.lines.push_back({"|N(1) - 76/105|", std::abs(N(1.0) - 76.0 / 105.0), 1e-12});
  r.lines.push_back({"|gap(1) - 44/105|", std::abs(gap(1.0) - 44.0 / 105.0), 1e-12});
  return r;
}

inline Result closed_vs_quadrature(const Options&) {
  Result r{"closed-vs-quadrature", 2, "closed forms against quadrature of C_b", {}};
  const QuadratureSpec exact{.method = QuadratureMethod::RegimeExact};
  for (double b : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const ExtremalCopula c(b);
    const Copula generic = c.as_copula();
    const double xe = xi_of(c, exact).value, ne = nu_of_dh1(c, exact).value;
    const double xg = xi_of(generic).value, ng = nu_of_dh1(generic).value;
    const double nc = nu_of(c).value;
    const std::string at = " at b=" + g(b);
    r.lines.push_back({"|Xi - xi_of| (exact sections)" + at, std::abs(Xi(b) - xe), 1e-6});
    r.lines.push_back({"|N - nu_of_dh1| (exact sections)" + at, std::abs(N(b) - ne), 1e-6});
    r.lines.push_back({"|Xi - xi_of| (tensor)" + at, std::abs(Xi(b) - xg), 1e-6});
    r.lines.push_back({"|N - nu_of_dh1| (tensor)" + at, std::abs(N(b) - ng), 1e-6});
    r.lines.push_back({"|nu_of - nu_of_dh1|" + at, std::abs(nc - ng), 2e-7});
  }
  return r;
}

inline Result branch_continuity(const Options&) {
  Result r{"branch-continuity", 3, "agreement of the two branches around b = 1", {}};
  const double up = 1.0 + 1e-9, dn = 1.0 - 1e-9;
  r.lines.push_back({"|Xi branches| at 1+1e-9", std::abs(detail::xi_lower(up) - detail::xi_upper(up)), 1e-7});
  r.lines.push_back({"|N branches| at 1+1e-9", std::abs(detail::nu_lower(up) - detail::nu_upper(up)), 1e-7});
  r.lines.push_back({"|Xi(1-1e-9) - Xi(1+1e-9)|", std::abs(Xi(dn) - Xi(up)), 1e-7});
  r.lines.push_back({"|N(1-1e-9) - N(1+1e-9)|", std::abs(N(dn) - N(up)), 1e-7});
  r.lines.push_back({"|Xi branches| at 1", std::abs(detail::xi_lower(1.0) - detail::xi_upper(1.0)), 1e-12});
  r.lines.push_back({"|N branches| at 1", std::abs(detail::nu_lower(1.0) - detail::nu_upper(1.0)), 1e-12});
  return r;
}

inline Result derivative_identity(const Options&) {
  Result r{"derivative-identity", 4, "N'(b) = Xi'(b)/b against finite differences of N", {}};
  for (double b : {0.3, 0.9, 1.1, 3.0, 10.0}) {
    const double h = 1e-5 * std::max(1.0, b);
    const double fd = (N(b + h) - N(b - h)) / (2.0 * h);
    r.lines.push_back({"rel |N' - FD| at b=" + g(b), std::abs(N_prime(b) - fd) / std::abs(N_prime(b)), 1e-6});
  }
  return r;
}

inline Result reflection_identities(const Options&) {
  Result r{"reflection-identities", 5, "xi and nu under the sigma2 reflection", {}};
  const std::vector<std::pair<std::string, Copula>> cs{
      {"clayton(2)", parametric_copula({Family::Clayton, 2.0})},
      {"frank(3)", parametric_copula({Family::Frank, 3.0})},
      {"C_2", ExtremalCopula(2.0).as_copula()}};
  for (const auto& [name, c] : cs) {
    const Copula s = reflect_sigma2(c);
    r.lines.push_back({"|xi(s2 C) - xi(C)| " + name, std::abs(xi_of(s).value - xi_of(c).value), 2e-7});
    r.lines.push_back({"|nu(s2 C) + nu(C)| " + name, std::abs(nu_of(s).value + nu_of(c).value), 2e-7});
  }
  for (double b : {0.5, 1.0, 5.0}) {
    const ExtremalCopula pos(b, {.cache_points = 0}), neg(-b, {.cache_points = 0});
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        const double u = i / 20.0, v = j / 20.0;
        worst = std::max(worst, std::abs(neg.cdf(u, v) - (u - pos.cdf(u, 1.0 - v))));
      }
    r.lines.push_back({"max |C_-b - (u - C_b(u,1-v))| b=" + g(b), worst, 0.0});
  }
  return r;
}

inline Result region_geometry(const Options&) {
  Result r{"region-geometry", 6, "concavity of psi, psi' = 1/b and membership probes", {}};
  const std::size_t n = 200;
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = psi(static_cast<double>(k) / (n - 1));
  double worst = -1e300;
  for (std::size_t k = 1; k + 1 < n; ++k) worst = std::max(worst, p[k + 1] - 2.0 * p[k] + p[k - 1]);
  r.lines.push_back({"max second difference of psi", std::max(0.0, worst), 1e-9});
  double slope = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double x = k / 21.0, h = 1e-6 * std::min(x, 1.0 - x);
    const double fd = (psi(x + h) - psi(x - h)) / (2.0 * h);
    const double want = 1.0 / xi_inverse(x);
    slope = std::max(slope, std::abs(fd - want) / want);
  }
  r.lines.push_back({"max rel |psi' - 1/Xi^-1| (20 points)", slope, 1e-5});
  struct Probe {
    double x, y;
    Membership want;
  };
  std::vector<Probe> probes{{0.5, 0.0, Membership::Inside},
                            {1.0, -1.0, Membership::Boundary},
                            {0.0, 0.5, Membership::Outside}};
  for (double b : {0.5, 1.0, 5.0}) {
    probes.push_back({Xi(b), N(b), Membership::Boundary});
    probes.push_back({Xi(b), N(b) + 1e-4, Membership::Outside});
  }
  int wrong = 0;
  for (const Probe& q : probes) wrong += contains(q.x, q.y, 1e-9) != q.want;
  r.lines.push_back({"misclassified probes (of " + std::to_string(probes.size()) + ")", double(wrong), 0.0});
  return r;
}

inline Result table1_reproduction(const Options&) {
  Result r{"table1", 7, "grid + spline maximizers of nu - xi against the reference table", {}};
  for (const FamilyScan& s : default_scans()) {
    const Table1Row row = scan_family(s).row;
    const auto it = std::find_if(reference_table().begin(), reference_table().end(),
                                 [&](const ReferenceRow& p) { return p.family == s.family; });
    const std::string f = row.family;
    r.lines.push_back({f + " |theta - " + g(it->parameter) + "| (got " + g(row.parameter) + ")",
                       std::abs(row.parameter - it->parameter), 0.02});
    r.lines.push_back({f + " |xi - " + g(it->xi) + "| (got " + g(row.xi) + ")", std::abs(row.xi - it->xi), 0.005});
    r.lines.push_back({f + " |nu - " + g(it->nu) + "| (got " + g(row.nu) + ")", std::abs(row.nu - it->nu), 0.005});
    r.lines.push_back({f + " |gap - " + g(it->gap) + "| (got " + g(row.gap) + ")", std::abs(row.gap - it->gap), 0.005});
  }
  return r;
}

inline Result optimizer_agreement(const Options& o) {
  Result r{"optimizer-agreement", 8, "dual bisection against the projected-gradient oracle", {}};
  const double scale = 40.0 / static_cast<double>(o.qp_grid);
  const GridProblem p{o.qp_grid, o.qp_grid, 32.0 / 105.0};
  const QpSolution d = solve_dual(p);
  const QpSolution a = solve_qp_oracle(p, o.seed);
  const QpSolution b = solve_qp_oracle(p, o.seed + 1);
  const double target = 76.0 / 105.0;
  r.lines.push_back({"|b_c - 1|", std::abs(d.b_c() - 1.0), 1e-6});
  r.lines.push_back({"|dual nu - 76/105|", std::abs(d.achieved_nu - target), 1e-6});
  r.lines.push_back({"|oracle nu - 76/105|", std::abs(a.achieved_nu - target), 2e-2 * scale});
  r.lines.push_back({"L2(oracle h, dual h)", l2_distance(p, a.h, d.h), 5e-2 * scale});
  for (auto [name, k, tol] : {std::tuple{"dual", d.kkt, 1e-10}, std::tuple{"oracle", a.kkt, 1e-2 * scale}}) {
    const std::string n = name;
    r.lines.push_back({n + " stationarity", k.stationarity, tol});
    r.lines.push_back({n + " marginal", k.marginal, tol});
    r.lines.push_back({n + " complementarity", k.complementarity, tol});
    r.lines.push_back({n + " dual feasibility", k.dual_feasibility, tol});
  }
  r.lines.push_back({"|nu(seed) - nu(seed+1)|", std::abs(a.achieved_nu - b.achieved_nu), 1e-6});
  return r;
}

inline Result reference_copulas(const Options&) {
  Result r{"reference-copulas", 9, "(xi, nu) of Pi, M and W", {}};
  struct Ref {
    Reference tag;
    const char* name;
    double xi, nu;
  };
  for (Ref ref : {Ref{Reference::Pi, "Pi", 0, 0}, Ref{Reference::M, "M", 1, 1}, Ref{Reference::W, "W", 1, -1}}) {
    const Copula c = reference_copula(ref.tag);
    const std::string n = ref.name;
    r.lines.push_back({"|xi(" + n + ") - " + g(ref.xi) + "|", std::abs(xi_of(c).value - ref.xi), 1e-8});
    r.lines.push_back({"|nu(" + n + ") - " + g(ref.nu) + "|", std::abs(nu_of(c).value - ref.nu), 1e-8});
    r.lines.push_back({"|nu_dh1(" + n + ") - " + g(ref.nu) + "|", std::abs(nu_of_dh1(c).value - ref.nu), 1e-8});
  }
  return r;
}

inline Result shuffle_path(const Options&) {
  Result r{"shuffle-path", 10, "xi constant and nu decreasing along the shuffle of M", {}};
  const CheckerboardCopula m = discretize(reference_copula(Reference::M), 64);
  std::vector<MeasurePair> path;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) path.push_back(measures_checkerboard(shuffle(m, p)));
  double spread = 0.0;
  int flat = 0;  // steps where nu fails to drop
  for (std::size_t k = 1; k < path.size(); ++k) {
    spread = std::max(spread, std::abs(path[k].xi - path[0].xi));
    flat += !(path[k].nu < path[k - 1].nu);
  }
  r.lines.push_back({"max |xi(p) - xi(0)|", spread, 1e-9});
  r.lines.push_back({"non-decreasing nu steps (of 4)", double(flat), 0.0});
  r.lines.push_back({"|nu(1) + nu(0)|", std::abs(path.back().nu + path.front().nu), 1e-12});
  return r;
}

inline Result regime_decomposition(const Options&) {
  Result r{"regime-decomposition", 11, "per-regime one-dimensional integrals rebuild Xi and N", {}};
  for (double b : {0.5, 1.0, 5.0}) {
    const RegimeDecomposition d = regime_decomposition_check(b);
    r.lines.push_back({"xi residual at b=" + g(b), d.xi_residual, 1e-9});
    r.lines.push_back({"nu residual at b=" + g(b), d.nu_residual, 1e-9});
  }
  return r;
}

}  // namespace checks

struct Check {
  std::string name;
  std::function<Result(const Options&)> run;
};

inline const std::vector<Check>& registry() {
  static const std::vector<Check> all{
      {"anchor-values", checks::anchor_values},
      {"closed-vs-quadrature", checks::closed_vs_quadrature},
      {"branch-continuity", checks::branch_continuity},
      {"derivative-identity", checks::derivative_identity},
      {"reflection-identities", checks::reflection_identities},
      {"region-geometry", checks::region_geometry},
      {"table1", checks::table1_reproduction},
      {"optimizer-agreement", checks::optimizer_agreement},
      {"reference-copulas", checks::reference_copulas},
      {"shuffle-path", checks::shuffle_path},
      {"regime-decomposition", checks::regime_decomposition},
  };
  return all;
}

/// Runs the named checks (all when `only` is empty), in registry order.
inline std::vector<Result> run(const Options& opt, const std::vector<std::string>& only = {}) {
  for (const std::string& n : only)
    if (std::none_of(registry().begin(), registry().end(), [&](const Check& c) { return c.name == n; }))
      throw domain_error("verify: unknown check '" + n + "'");
  std::vector<Result> out;
  for (const Check& c : registry())
    if (only.empty() || std::find(only.begin(), only.end(), c.name) != only.end())
      out.push_back(c.run(opt));
  return out;
}

}  // namespace xinu::verify
