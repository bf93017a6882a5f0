// xinu: attainable (xi, nu) region, measures, Table 1 and the verification suite.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xinu/closed_form.hpp"
#include "xinu/copula.hpp"
#include "xinu/extremal.hpp"
#include "xinu/measures.hpp"
#include "xinu/records.hpp"
#include "xinu/region.hpp"
#include "xinu/svg.hpp"
#include "xinu/table1.hpp"
#include "xinu/verify.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

struct Config {
  std::string out = "-";
  std::string format;
  std::optional<std::size_t> samples;
  std::vector<double> b;
  std::string family = "extremal";
  std::optional<double> theta;
  std::optional<int> quad_order;
  std::optional<int> panels;
  std::size_t qp_grid = 40;
  std::uint64_t seed = 1;
  std::vector<std::string> only;
  std::vector<double> v;
  std::string spacing = "uniform-xi";
  std::string spline = "natural";
};

void require_format(const std::string& f, std::initializer_list<const char*> allowed, const char* cmd) {
  for (const char* a : allowed)
    if (f == a) return;
  std::string msg = std::string(cmd) + ": unsupported --format '" + f + "' (expected";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw xinu::domain_error(msg + ")");
}

// Writes to --out, or stdout for "-".
void emit(const Config& cfg, const std::string& text) {
  if (cfg.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw xinu::io_error("cannot open '" + cfg.out + "' for writing");
  f << text;
  f.close();
  if (!f) throw xinu::io_error("write to '" + cfg.out + "' failed");
}

xinu::QuadratureSpec quadrature(const Config& cfg, xinu::QuadratureSpec q = {}) {
  if (cfg.quad_order) q.order = *cfg.quad_order;
  if (cfg.panels) q.panels = *cfg.panels;
  q.validate();
  return q;
}

template <class Row>
std::string as_json(const std::vector<Row>& rows) {
  return nlohmann::json(rows).dump(2) + "\n";
}

template <class Row>
std::string as_csv(const std::vector<Row>& rows) {
  std::ostringstream os;
  xinu::write_csv(os, rows);
  return os.str();
}

int cmd_boundary(const Config& cfg) {
  const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
  require_format(fmt, {"csv", "json", "svg"}, "boundary");
  xinu::Spacing spacing;
  if (cfg.spacing == "uniform-xi") spacing = xinu::Spacing::UniformXi;
  else if (cfg.spacing == "log-b") spacing = xinu::Spacing::LogB;
  else throw xinu::domain_error("boundary: --spacing must be uniform-xi or log-b");
  // b = 1 is always included so the exact anchor (32/105, 76/105) appears in the export.
  std::vector<double> anchors{1.0};
  anchors.insert(anchors.end(), cfg.b.begin(), cfg.b.end());
  const auto region = xinu::boundary_samples(cfg.samples.value_or(101), spacing, anchors);
  if (fmt == "svg") emit(cfg, xinu::svg::region(region));
  else if (fmt == "json") emit(cfg, as_json(xinu::boundary_rows(region)));
  else emit(cfg, as_csv(xinu::boundary_rows(region)));
  return kOk;
}

xinu::MeasureRecord measure_record(const Config& cfg) {
  const xinu::QuadratureSpec q = quadrature(cfg);
  xinu::MeasureRecord rec{};
  rec.family = cfg.family;
  xinu::MeasurePair m{};
  if (cfg.family == "extremal") {
    if (cfg.b.size() > 1) throw xinu::domain_error("measures: give a single --b");
    const double b = cfg.b.empty() ? 1.0 : cfg.b.front();
    if (!std::isfinite(b)) throw xinu::domain_error("measures: --b must be finite");
    rec.parameter = b;
    m = xinu::measures(xinu::ExtremalCopula(b), q);
    const double sign = b < 0 ? -1.0 : 1.0;
    rec.closed_xi = xinu::Xi(std::abs(b));
    rec.closed_nu = sign * xinu::N(std::abs(b));
  } else if (cfg.family == "pi" || cfg.family == "m" || cfg.family == "w") {
    const auto tag = cfg.family == "pi" ? xinu::Reference::Pi
                     : cfg.family == "m" ? xinu::Reference::M
                                         : xinu::Reference::W;
    rec.parameter = std::nan("");
    m = xinu::measures(xinu::reference_copula(tag), q);
  } else {
    const auto fam = xinu::parse_family(cfg.family);
    if (!fam)
      throw xinu::domain_error("measures: unknown family '" + cfg.family +
                               "' (extremal, pi, m, w, clayton, frank, gaussian, gumbel, joe)");
    if (!cfg.theta) throw xinu::domain_error("measures: --theta is required for " + cfg.family);
    const xinu::ParametricFamily p{*fam, *cfg.theta};
    xinu::validate(p);
    rec.parameter = p.theta;
    m = xinu::measures(xinu::parametric_copula(p), q);
  }
  rec.xi = m.xi;
  rec.nu = m.nu;
  rec.gap = m.nu - m.xi;
  rec.xi_error = m.error;  // one refinement pass yields both, so the estimate is shared
  rec.nu_error = m.error;
  return rec;
}

int cmd_measures(const Config& cfg) {
  const std::string fmt = cfg.format.empty() ? "text" : cfg.format;
  require_format(fmt, {"text", "csv", "json"}, "measures");
  const xinu::MeasureRecord rec = measure_record(cfg);
  if (fmt == "json") return emit(cfg, nlohmann::json(rec).dump(2) + "\n"), kOk;
  if (fmt == "csv") return emit(cfg, as_csv(std::vector{rec})), kOk;
  // rounding noise below the printed precision would otherwise show as -0.000000
  auto shown = [](double x) { return std::abs(x) < 5e-7 ? 0.0 : x; };
  char buf[512];
  std::string text;
  std::snprintf(buf, sizeof buf, "family     %s\nparameter  %.12g\n", rec.family.c_str(), rec.parameter);
  text += buf;
  std::snprintf(buf, sizeof buf, "xi         %.6f   (err %.1e)\nnu         %.6f   (err %.1e)\ngap        %.6f\n",
                shown(rec.xi), rec.xi_error, shown(rec.nu), rec.nu_error, shown(rec.gap));
  text += buf;
  if (rec.closed_xi) {
    std::snprintf(buf, sizeof buf,
                  "closed xi  %.6f   (|diff| %.1e)\nclosed nu  %.6f   (|diff| %.1e)\n", *rec.closed_xi,
                  std::abs(*rec.closed_xi - rec.xi), *rec.closed_nu, std::abs(*rec.closed_nu - rec.nu));
    text += buf;
  }
  emit(cfg, text);
  return kOk;
}

int cmd_table1(const Config& cfg) {
  const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
  require_format(fmt, {"csv", "json"}, "table1");
  xinu::Table1Options opt;
  opt.quadrature = quadrature(cfg, xinu::table1_quadrature());
  if (cfg.spline == "natural") opt.boundary = xinu::SplineBoundary::Natural;
  else if (cfg.spline == "not-a-knot") opt.boundary = xinu::SplineBoundary::NotAKnot;
  else throw xinu::domain_error("table1: --spline must be natural or not-a-knot");
  auto scans = xinu::default_scans();
  if (cfg.samples) {
    if (*cfg.samples < 4) throw xinu::domain_error("table1: --samples must be >= 4");
    for (auto& s : scans) s.points = *cfg.samples;
  }
  if (cfg.family != "extremal" && cfg.family != "all") {
    const auto fam = xinu::parse_family(cfg.family);
    if (!fam) throw xinu::domain_error("table1: unknown family '" + cfg.family + "'");
    std::erase_if(scans, [&](const xinu::FamilyScan& s) { return s.family != *fam; });
  }
  const auto rows = xinu::table1(scans, opt);
  for (const auto& r : rows)
    if (r.warning)
      std::cerr << "warning: " << r.family << " maximizer at the edge of the parameter grid\n";
  emit(cfg, fmt == "json" ? as_json(rows) : as_csv(rows));
  return kOk;
}

int cmd_profiles(const Config& cfg) {
  const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
  require_format(fmt, {"csv", "json", "svg"}, "profiles");
  const std::vector<double> bs = cfg.b.empty() ? std::vector{0.5, 1.0, 5.0} : cfg.b;
  const std::vector<double> vs = cfg.v.empty() ? std::vector{0.1, 0.5, 0.9} : cfg.v;
  for (double b : bs)
    if (b == 0.0 || !std::isfinite(b)) throw xinu::domain_error("profiles: b must be finite and nonzero");
  for (double v : vs)
    if (!(v >= 0.0 && v <= 1.0)) throw xinu::domain_error("profiles: v must lie in [0, 1]");
  const std::size_t k = cfg.samples.value_or(401);
  if (k < 2) throw xinu::domain_error("profiles: --samples must be >= 2");
  if (fmt == "svg") return emit(cfg, xinu::svg::profiles(bs, vs, k)), kOk;
  // One block per (b, v); b is not a column of the schema, so multiple b go in file order.
  std::vector<xinu::ProfileRow> rows;
  for (double b : bs)
    for (double v : vs)
      for (const auto& p : xinu::conditional_profile(b, v, k)) rows.push_back({p.t, v, p.h});
  emit(cfg, fmt == "json" ? as_json(rows) : as_csv(rows));
  return kOk;
}

int cmd_verify(const Config& cfg) {
  const std::string fmt = cfg.format.empty() ? "text" : cfg.format;
  require_format(fmt, {"text", "json"}, "verify");
  if (cfg.qp_grid < 8 || cfg.qp_grid > 128) throw xinu::domain_error("verify: --qp-grid must be in [8, 128]");
  const xinu::verify::Options opt{cfg.qp_grid, cfg.seed};
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = xinu::verify::run(opt, cfg.only);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool ok = true;
  std::string text;
  nlohmann::json j = nlohmann::json::array();
  char buf[512];
  for (const auto& r : results) {
    ok = ok && r.pass();
    std::snprintf(buf, sizeof buf, "%-4s %2d %-22s %s\n", r.pass() ? "PASS" : "FAIL", r.criterion, r.name.c_str(),
                  r.title.c_str());
    text += buf;
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& l : r.lines) {
      std::snprintf(buf, sizeof buf, "       %s %-58s %10.3e <= %.1e\n", l.pass() ? " " : "x", l.label.c_str(),
                    l.measured, l.tolerance);
      text += buf;
      lines.push_back({{"label", l.label}, {"measured", l.measured}, {"tolerance", l.tolerance}, {"pass", l.pass()}});
    }
    j.push_back({{"name", r.name}, {"criterion", r.criterion}, {"pass", r.pass()}, {"lines", lines}});
  }
  std::snprintf(buf, sizeof buf, "%zu checks, %.1f s\n", results.size(), secs);
  text += buf;
  emit(cfg, fmt == "json" ? j.dump(2) + "\n" : text);
  for (const auto& r : results)
    if (!r.pass()) std::cerr << "failed: " << r.name << "\n";
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xinu: the attainable region of Chatterjee's xi and Blest's nu"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--out", cfg.out, "output file, - for stdout");
    s->add_option("--format", cfg.format, "output format");
  };
  auto quad = [&](CLI::App* s) {
    s->add_option("--quad-order", cfg.quad_order, "Gauss-Legendre nodes per panel");
    s->add_option("--panels", cfg.panels, "uniform panels per axis");
  };

  auto* boundary = app.add_subcommand("boundary", "sampled boundary of the region (csv, json, svg)");
  common(boundary);
  boundary->add_option("--samples", cfg.samples, "number of boundary samples (default 101)");
  boundary->add_option("--b", cfg.b, "extra b values to include");
  boundary->add_option("--spacing", cfg.spacing, "uniform-xi or log-b");

  auto* measures = app.add_subcommand("measures", "xi and nu of one copula (text, csv, json)");
  common(measures);
  quad(measures);
  measures->add_option("--family", cfg.family, "extremal, pi, m, w, clayton, frank, gaussian, gumbel, joe");
  measures->add_option("--b", cfg.b, "extremal parameter (default 1)");
  measures->add_option("--theta", cfg.theta, "parametric family parameter");

  auto* table1 = app.add_subcommand("table1", "gap-maximizing members of the parametric families (csv, json)");
  common(table1);
  quad(table1);
  table1->add_option("--family", cfg.family, "restrict to one family");
  table1->add_option("--samples", cfg.samples, "grid points per family (default 61)");
  table1->add_option("--spline", cfg.spline, "natural or not-a-knot");

  auto* profiles = app.add_subcommand("profiles", "conditional profiles t -> h_b(t, v) (csv, json, svg)");
  common(profiles);
  profiles->add_option("--b", cfg.b, "b values (default 0.5 1 5)");
  profiles->add_option("--v", cfg.v, "v values (default 0.1 0.5 0.9)");
  profiles->add_option("--samples", cfg.samples, "t samples per profile (default 401)");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  common(verify);
  verify->add_option("--qp-grid", cfg.qp_grid, "grid size for the optimizer checks (default 40)");
  verify->add_option("--seed", cfg.seed, "oracle seed");
  verify->add_option("--only", cfg.only, "run only the named checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*boundary) return cmd_boundary(cfg);
    if (*measures) return cmd_measures(cfg);
    if (*table1) return cmd_table1(cfg);
    if (*profiles) return cmd_profiles(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const xinu::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
