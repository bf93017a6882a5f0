#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xinu/errors.hpp"
#include "xinu/region.hpp"
#include "xinu/table1.hpp"

namespace xinu {

/// Fixed 12 significant digits; non-finite values as inf, -inf, nan.
inline std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace detail {
inline nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return csv_number(x);  // JSON has no infinities
}
inline double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw validation_error("expected a number, got \"" + s + "\"");
}
}  // namespace detail

// One row of the boundary export.
struct BoundaryRow {
  double b;
  double xi;
  double nu_upper;
  double nu_lower;
  bool operator==(const BoundaryRow&) const = default;
};

inline std::vector<BoundaryRow> boundary_rows(const RegionBoundary& r) {
  std::vector<BoundaryRow> rows;
  for (const BoundarySample& s : r.samples) rows.push_back({s.b, s.xi, s.nu, 0.0 - s.nu});  // 0 - x keeps -0 out of the export
  return rows;
}

struct MeasureRecord {
  std::string family;
  double parameter;
  double xi;
  double nu;
  double gap;
  double xi_error;
  double nu_error;
  std::optional<double> closed_xi;  // extremal family only
  std::optional<double> closed_nu;
  bool operator==(const MeasureRecord&) const = default;
};

struct ProfileRow {
  double t;
  double v;
  double h;
  bool operator==(const ProfileRow&) const = default;
};

inline void to_json(nlohmann::json& j, const BoundaryRow& r) {
  j = {{"b", detail::json_number(r.b)},
       {"xi", detail::json_number(r.xi)},
       {"nu_upper", detail::json_number(r.nu_upper)},
       {"nu_lower", detail::json_number(r.nu_lower)}};
}
inline void from_json(const nlohmann::json& j, BoundaryRow& r) {
  r.b = detail::number_from_json(j.at("b"));
  r.xi = detail::number_from_json(j.at("xi"));
  r.nu_upper = detail::number_from_json(j.at("nu_upper"));
  r.nu_lower = detail::number_from_json(j.at("nu_lower"));
}

inline void to_json(nlohmann::json& j, const Table1Row& r) {
  j = {{"family", r.family},
       {"parameter", detail::json_number(r.parameter)},
       {"xi", detail::json_number(r.xi)},
       {"nu", detail::json_number(r.nu)},
       {"gap", detail::json_number(r.gap)},
       {"warning", r.warning}};
}
inline void from_json(const nlohmann::json& j, Table1Row& r) {
  r.family = j.at("family").get<std::string>();
  r.parameter = detail::number_from_json(j.at("parameter"));
  r.xi = detail::number_from_json(j.at("xi"));
  r.nu = detail::number_from_json(j.at("nu"));
  r.gap = detail::number_from_json(j.at("gap"));
  r.warning = j.value("warning", false);
}

inline void to_json(nlohmann::json& j, const MeasureRecord& r) {
  j = {{"family", r.family},
       {"parameter", detail::json_number(r.parameter)},
       {"xi", detail::json_number(r.xi)},
       {"nu", detail::json_number(r.nu)},
       {"gap", detail::json_number(r.gap)},
       {"xi_error", detail::json_number(r.xi_error)},
       {"nu_error", detail::json_number(r.nu_error)}};
  if (r.closed_xi) j["closed_xi"] = detail::json_number(*r.closed_xi);
  if (r.closed_nu) j["closed_nu"] = detail::json_number(*r.closed_nu);
}
inline void from_json(const nlohmann::json& j, MeasureRecord& r) {
  r.family = j.at("family").get<std::string>();
  r.parameter = detail::number_from_json(j.at("parameter"));
  r.xi = detail::number_from_json(j.at("xi"));
  r.nu = detail::number_from_json(j.at("nu"));
  r.gap = detail::number_from_json(j.at("gap"));
  r.xi_error = detail::number_from_json(j.at("xi_error"));
  r.nu_error = detail::number_from_json(j.at("nu_error"));
  r.closed_xi = j.contains("closed_xi") ? std::optional(detail::number_from_json(j["closed_xi"]))
                                        : std::nullopt;
  r.closed_nu = j.contains("closed_nu") ? std::optional(detail::number_from_json(j["closed_nu"]))
                                        : std::nullopt;
}

inline void to_json(nlohmann::json& j, const ProfileRow& r) {
  j = {{"t", detail::json_number(r.t)}, {"v", detail::json_number(r.v)}, {"h", detail::json_number(r.h)}};
}
inline void from_json(const nlohmann::json& j, ProfileRow& r) {
  r.t = detail::number_from_json(j.at("t"));
  r.v = detail::number_from_json(j.at("v"));
  r.h = detail::number_from_json(j.at("h"));
}

// CSV writers. Column order mirrors the JSON field names.

inline void write_csv(std::ostream& os, const std::vector<BoundaryRow>& rows) {
  os << "b,xi,nu_upper,nu_lower\n";
  for (const auto& r : rows)
    os << csv_number(r.b) << ',' << csv_number(r.xi) << ',' << csv_number(r.nu_upper) << ','
       << csv_number(r.nu_lower) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<Table1Row>& rows) {
  os << "family,parameter,xi,nu,gap,warning\n";
  for (const auto& r : rows)
    os << r.family << ',' << csv_number(r.parameter) << ',' << csv_number(r.xi) << ','
       << csv_number(r.nu) << ',' << csv_number(r.gap) << ',' << (r.warning ? 1 : 0) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<ProfileRow>& rows) {
  os << "t,v,h\n";
  for (const auto& r : rows)
    os << csv_number(r.t) << ',' << csv_number(r.v) << ',' << csv_number(r.h) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<MeasureRecord>& rows) {
  os << "family,parameter,xi,nu,gap,xi_error,nu_error,closed_xi,closed_nu\n";
  for (const auto& r : rows)
    os << r.family << ',' << csv_number(r.parameter) << ',' << csv_number(r.xi) << ','
       << csv_number(r.nu) << ',' << csv_number(r.gap) << ',' << csv_number(r.xi_error) << ','
       << csv_number(r.nu_error) << ',' << (r.closed_xi ? csv_number(*r.closed_xi) : "") << ','
       << (r.closed_nu ? csv_number(*r.closed_nu) : "") << '\n';
}

}  // namespace xinu
