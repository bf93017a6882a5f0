#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "xinu/extremal.hpp"
#include "xinu/region.hpp"

namespace xinu::svg {

// Minimal standalone SVG: polylines, axis ticks and labelled markers.

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

struct Frame {
  double left, top, width, height;  // pixel box of the plot area
  double x0, x1, y0, y1;            // data range
  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + (y1 - y) / (y1 - y0) * height; }
};

inline void axes(std::ostringstream& os, const Frame& f, const std::vector<double>& xt,
                 const std::vector<double>& yt, const std::string& xl, const std::string& yl) {
  os << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.width)
     << "\" height=\"" << num(f.height) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double x : xt) {
    os << "<line x1=\"" << num(f.px(x)) << "\" y1=\"" << num(f.top + f.height) << "\" x2=\""
       << num(f.px(x)) << "\" y2=\"" << num(f.top + f.height + 5) << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(f.top + f.height + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << num(x).substr(0, 4) << "</text>\n";
  }
  for (double y : yt) {
    os << "<line x1=\"" << num(f.left - 5) << "\" y1=\"" << num(f.py(y)) << "\" x2=\""
       << num(f.left) << "\" y2=\"" << num(f.py(y)) << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << num(f.left - 8) << "\" y=\"" << num(f.py(y) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << num(y).substr(0, y < 0 ? 5 : 4) << "</text>\n";
  }
  os << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\"" << num(f.top + f.height + 34)
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xl << "</text>\n";
  const double lx = f.left - 44, ly = f.top + f.height / 2;
  os << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" transform=\"rotate(-90 " << num(lx) << ' '
     << num(ly) << ")\" font-size=\"13\" text-anchor=\"middle\">" << yl << "</text>\n";
}

inline void polyline(std::ostringstream& os, const Frame& f, const std::vector<double>& x,
                     const std::vector<double>& y, const std::string& colour) {
  os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < x.size(); ++k) os << num(f.px(x[k])) << ',' << num(f.py(y[k])) << ' ';
  os << "\"/>\n";
}

}  // namespace detail

/// The attainable region: upper and lower branch, the segment at xi = 1 and
/// the points Pi, M and W.
inline std::string region(const RegionBoundary& r) {
  using detail::num;
  std::ostringstream os;
  const detail::Frame f{60, 20, 400, 400, 0.0, 1.0, -1.0, 1.0};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"470\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  detail::axes(os, f, {0, 0.25, 0.5, 0.75, 1}, {-1, -0.5, 0, 0.5, 1}, "xi", "nu");
  std::vector<double> x, up, lo;
  for (const auto& s : r.samples) {
    x.push_back(s.xi);
    up.push_back(s.nu);
    lo.push_back(-s.nu);
  }
  std::ostringstream fill;
  fill << "<polygon fill=\"#dfe8f5\" stroke=\"none\" points=\"";
  for (std::size_t k = 0; k < x.size(); ++k) fill << num(f.px(x[k])) << ',' << num(f.py(up[k])) << ' ';
  for (std::size_t k = x.size(); k-- > 0;) fill << num(f.px(x[k])) << ',' << num(f.py(lo[k])) << ' ';
  fill << "\"/>\n";
  os << fill.str();
  detail::polyline(os, f, x, up, "#1f4e9c");
  detail::polyline(os, f, x, lo, "#1f4e9c");
  detail::polyline(os, f, {r.segment_x, r.segment_x}, {r.segment_lo, r.segment_hi}, "#1f4e9c");
  struct Marker {
    const char* label;
    double x, y;
  };
  for (Marker m : {Marker{"Pi", 0, 0}, Marker{"M", 1, 1}, Marker{"W", 1, -1}}) {
    os << "<circle cx=\"" << num(f.px(m.x)) << "\" cy=\"" << num(f.py(m.y))
       << "\" r=\"4\" fill=\"#c0392b\"/>\n";
    os << "<text x=\"" << num(f.px(m.x) + (m.x > 0.5 ? -10 : 8)) << "\" y=\"" << num(f.py(m.y) + 4)
       << "\" font-size=\"12\" text-anchor=\"" << (m.x > 0.5 ? "end" : "start") << "\">" << m.label
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// One panel per b with the profiles t -> h_b(t, v) for every v.
inline std::string profiles(const std::vector<double>& bs, const std::vector<double>& vs,
                            std::size_t samples = 401) {
  using detail::num;
  static const char* colours[] = {"#1f4e9c", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085"};
  std::ostringstream os;
  const double pw = 260, gap = 70;
  const double total = 40 + bs.size() * (pw + gap);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total) << "\" height=\"360\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < bs.size(); ++p) {
    const detail::Frame f{60 + p * (pw + gap), 30, pw, 260, 0.0, 1.0, 0.0, 1.0};
    detail::axes(os, f, {0, 0.5, 1}, {0, 0.5, 1}, "t", "h");
    os << "<text x=\"" << num(f.left + pw / 2) << "\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">b = "
       << num(bs[p]) << "</text>\n";
    for (std::size_t k = 0; k < vs.size(); ++k) {
      std::vector<double> t, h;
      for (const ProfilePoint& q : conditional_profile(bs[p], vs[k], samples)) {
        t.push_back(q.t);
        h.push_back(q.h);
      }
      detail::polyline(os, f, t, h, colours[k % 6]);
      os << "<text x=\"" << num(f.left + pw - 4) << "\" y=\"" << num(f.top + 14 + 14 * k)
         << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << colours[k % 6] << "\">v = "
         << num(vs[k]) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace xinu::svg
