#include "crn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace crn {

namespace {

struct View {
  double x0, x1, y0, y1;  // data bounds, in axis units (log10 when log_axes)
  SvgOptions opt;

  double ax(double v) const { return opt.log_axes ? std::log10(v) : v; }
  double px(double x) const { return 40 + (ax(x) - x0) / (x1 - x0) * (opt.width - 60); }
  double py(double y) const { return opt.height - 40 - (ax(y) - y0) / (y1 - y0) * (opt.height - 60); }
};

View fit(const std::vector<Point>& pts, const SvgOptions& opt) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  View v{inf, -inf, inf, -inf, opt};
  for (const auto& p : pts) {
    if (opt.log_axes && (p[0] <= 0 || p[1] <= 0)) continue;
    v.x0 = std::min(v.x0, v.ax(p[0]));
    v.x1 = std::max(v.x1, v.ax(p[0]));
    v.y0 = std::min(v.y0, v.ax(p[1]));
    v.y1 = std::max(v.y1, v.ax(p[1]));
  }
  if (!(v.x0 < v.x1)) v.x0 -= 1, v.x1 += 1;
  if (!(v.y0 < v.y1)) v.y0 -= 1, v.y1 += 1;
  double mx = 0.05 * (v.x1 - v.x0), my = 0.05 * (v.y1 - v.y0);
  v.x0 -= mx, v.x1 += mx, v.y0 -= my, v.y1 += my;
  return v;
}

std::ostringstream header(const View& v) {
  std::ostringstream s;
  s << std::setprecision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << v.opt.width << "\" height=\"" << v.opt.height
    << "\" viewBox=\"0 0 " << v.opt.width << ' ' << v.opt.height << "\">\n";
  s << "<defs><clipPath id=\"plot\"><rect x=\"40\" y=\"20\" width=\"" << v.opt.width - 60 << "\" height=\""
    << v.opt.height - 60 << "\"/></clipPath></defs>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect x=\"40\" y=\"20\" width=\"" << v.opt.width - 60 << "\" height=\"" << v.opt.height - 60
    << "\" fill=\"none\" stroke=\"#888\"/>\n";
  const char* unit = v.opt.log_axes ? "log10 " : "";
  s << "<text x=\"" << v.opt.width / 2 << "\" y=\"" << v.opt.height - 10 << "\" font-size=\"12\">" << unit
    << "x [" << v.x0 << ", " << v.x1 << "]</text>\n";
  s << "<text x=\"5\" y=\"14\" font-size=\"12\">" << unit << "y [" << v.y0 << ", " << v.y1 << "]</text>\n";
  s << "<g clip-path=\"url(#plot)\">\n";
  return s;
}

void polyline(std::ostringstream& s, const View& v, const std::vector<Point>& pts, const std::string& style,
              bool closed = false) {
  s << (closed ? "<polygon" : "<polyline") << " points=\"";
  for (const auto& p : pts) s << v.px(p[0]) << ',' << v.py(p[1]) << ' ';
  s << "\" " << style << "/>\n";
}

// y = a x^sigma is a straight line in log coordinates; without log axes it is sampled.
void power_curve(std::ostringstream& s, const View& v, double a, double sigma, const std::string& style) {
  std::vector<Point> pts;
  const int n = v.opt.log_axes ? 2 : 200;
  for (int k = 0; k <= n; ++k) {
    double u = v.x0 + (v.x1 - v.x0) * k / n;
    double x = v.opt.log_axes ? std::pow(10.0, u) : u;
    if (x <= 0) continue;
    double y = a * std::pow(x, sigma);
    if (!std::isfinite(y) || y <= 0) continue;
    pts.push_back({x, y});
  }
  if (pts.size() >= 2) polyline(s, v, pts, style);
}

}  // namespace

std::string polygon_svg(const PolygonFamily& fam, const Polygon& poly, const SvgOptions& opt) {
  View v = fit(poly.vertices, opt);
  auto s = header(v);
  for (const auto& q : fam.slopes.r)
    for (double a : {fam.delta_prime, 1.0 / fam.delta_prime})
      power_curve(s, v, a, to_double(q), "fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"2,3\"");
  for (const auto& q : fam.slopes.s)
    for (double a : {fam.delta_prime, 1.0 / fam.delta_prime})
      power_curve(s, v, a, to_double(q), "fill=\"none\" stroke=\"#36c\" stroke-dasharray=\"2,3\"");
  for (double t : fam.slopes.r_frac) power_curve(s, v, 1.0, t, "fill=\"none\" stroke=\"#aaa\" stroke-dasharray=\"6,4\"");
  for (double t : fam.slopes.s_frac) power_curve(s, v, 1.0, t, "fill=\"none\" stroke=\"#aaa\" stroke-dasharray=\"6,4\"");
  polyline(s, v, poly.vertices, "fill=\"#dde8f8\" fill-opacity=\"0.6\" stroke=\"#124\" stroke-width=\"1.5\"", true);
  for (std::size_t i = 0; i < poly.size(); ++i)
    s << "<text x=\"" << v.px(poly.vertices[i][0]) + 3 << "\" y=\"" << v.py(poly.vertices[i][1]) - 3
      << "\" font-size=\"10\">" << poly.labels[i] << "</text>\n";
  s << "</g>\n</svg>\n";
  return s.str();
}

std::string trajectories_svg(const std::vector<Trajectory>& trajs, const Polygon* poly, const SvgOptions& opt) {
  std::vector<Point> all;
  std::vector<std::vector<Point>> lines;
  for (const auto& t : trajs) {
    std::vector<Point> pts;
    const std::size_t stride = std::max<std::size_t>(1, t.states.size() / 2000);
    for (std::size_t k = 0; k < t.states.size(); k += stride) pts.push_back({t.states[k][0], t.states[k][1]});
    if (!t.states.empty()) pts.push_back({t.final_state()[0], t.final_state()[1]});
    all.insert(all.end(), pts.begin(), pts.end());
    lines.push_back(std::move(pts));
  }
  View v = fit(all, opt);
  auto s = header(v);
  if (poly) polyline(s, v, poly->vertices, "fill=\"none\" stroke=\"#124\" stroke-dasharray=\"4,2\"", true);
  for (const auto& l : lines) polyline(s, v, l, "fill=\"none\" stroke=\"#a32\" stroke-width=\"0.8\"");
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace crn
