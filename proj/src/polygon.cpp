#include "crn/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>

namespace crn {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<Vec2> planar_sources(const ReactionNetwork& net) {
  std::vector<Vec2> pts;
  for (const auto& c : source_complexes(net)) pts.push_back(to_vec2(c));
  return pts;
}

double norm(const Point& p) { return std::hypot(p[0], p[1]); }

double vector_norm(const RationalVector& v) {
  double s = 0;
  for (const auto& q : v) s += to_double(q) * to_double(q);
  return std::sqrt(s);
}

// First t > 0 where the ray p + t d meets y = x^tau. The function
// h(t) = log y(t) - tau log x(t) has at most one critical point, so the ray splits into at
// most two monotone pieces.
std::optional<Point> hit_curve(const Point& p, const Point& d, double tau) {
  double tmax = inf;
  for (int k = 0; k < 2; ++k)
    if (d[k] < 0) tmax = std::min(tmax, -p[k] / d[k]);
  auto at = [&](double t) { return Point{p[0] + t * d[0], p[1] + t * d[1]}; };
  auto h = [&](double t) {
    Point c = at(t);
    if (c[0] <= 0 || c[1] <= 0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(c[1]) - tau * std::log(c[0]);
  };
  // Sign of h as t approaches tmax from below.
  auto end_sign = [&]() {
    bool y_vanishes = d[1] < 0 && -p[1] / d[1] <= tmax;
    bool x_vanishes = d[0] < 0 && -p[0] / d[0] <= tmax;
    if (y_vanishes && !x_vanishes) return -1.0;
    if (x_vanishes && !y_vanishes) return tau > 0 ? 1.0 : -1.0;
    return 0.0;
  };

  std::vector<double> cuts{0.0};
  double denom = d[0] * d[1] * (1.0 - tau);
  if (denom != 0) {
    double tc = (tau * d[0] * p[1] - d[1] * p[0]) / denom;
    if (tc > 0 && tc < tmax) cuts.push_back(tc);
  }
  cuts.push_back(tmax);

  double h0 = h(0.0);
  if (!std::isfinite(h0)) return std::nullopt;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double lo = cuts[k];
    double hlo = h(lo);
    double hi = cuts[k + 1];
    double shi;
    if (std::isinf(hi)) {
      hi = std::max(1.0, 2.0 * lo);
      int guard = 0;
      while (std::signbit(h(hi)) == std::signbit(hlo) && guard++ < 2100) hi *= 2.0;
      if (!std::isfinite(hi) || std::signbit(h(hi)) == std::signbit(hlo)) continue;
      shi = h(hi);
    } else if (k + 2 == cuts.size()) {
      shi = end_sign();
      if (shi == 0.0) continue;
    } else {
      shi = h(hi);
    }
    if (hlo == 0.0 && lo > 0) return at(lo);
    if (std::signbit(hlo) == std::signbit(shi)) continue;
    // Bisect along the coordinate that vanishes first when there is one, so the small
    // coordinate of the vertex is never the result of a cancelling subtraction.
    int k0 = -1;
    for (int c = 0; c < 2; ++c)
      if (d[c] < 0 && (k0 < 0 || -p[c] / d[c] < -p[k0] / d[k0])) k0 = c;
    auto point_at = [&](double u) {
      if (k0 < 0) return at(u);
      Point v;
      v[k0] = u;
      v[1 - k0] = p[1 - k0] + (p[k0] - u) / (-d[k0]) * d[1 - k0];
      return v;
    };
    auto hu = [&](double u) {
      Point v = point_at(u);
      if (v[0] <= 0 || v[1] <= 0) return std::numeric_limits<double>::quiet_NaN();
      return std::log(v[1]) - tau * std::log(v[0]);
    };
    double ua = lo, ub = hi;
    if (k0 >= 0) {
      ua = p[k0] + lo * d[k0];
      ub = std::isfinite(hi) && hi < tmax ? p[k0] + hi * d[k0] : 0.0;
      if (lo == 0) ua = p[k0];
    }
    // Invariant: hu(ua) has the sign of hlo, the other end has the opposite sign.
    for (int it = 0; it < 4000; ++it) {
      double a = std::min(ua, ub), b = std::max(ua, ub);
      double mid = (a > 0 && b > 4 * a) ? std::sqrt(a * b) : 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      double hm = hu(mid);
      if (!std::isfinite(hm)) break;
      if (std::signbit(hm) == std::signbit(hlo))
        ua = mid;
      else
        ub = mid;
      if (std::abs(ub - ua) <= 1e-15 * std::max(std::abs(ua), std::abs(ub))) break;
    }
    double u = (ua > 0 && ub > 0) ? std::sqrt(ua * ub) : 0.5 * (ua + ub);
    Point v = point_at(u);
    if (!(v[0] > 0 && v[1] > 0 && std::isfinite(v[0]) && std::isfinite(v[1]))) return std::nullopt;
    return v;
  }
  return std::nullopt;
}

struct Curve {
  double log_a;
  double tau;
  bool dotted;
};

std::vector<Curve> family_curves(const PolygonFamily& fam) {
  std::vector<Curve> out;
  for (double t : fam.slopes.r_frac) out.push_back({0.0, t, false});
  for (double t : fam.slopes.s_frac) out.push_back({0.0, t, false});
  double la = std::log(fam.delta_prime);
  for (const auto& q : fam.slopes.r) {
    out.push_back({la, to_double(q), true});
    out.push_back({-la, to_double(q), true});
  }
  for (const auto& q : fam.slopes.s) {
    out.push_back({la, to_double(q), true});
    out.push_back({-la, to_double(q), true});
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool polygon_usable(const std::optional<Polygon>& poly) {
  if (!poly) return false;
  for (const auto& v : poly->vertices)
    if (!(v[0] > 1e-300 && v[1] > 1e-300 && v[0] < 1e300 && v[1] < 1e300)) return false;
  return is_convex(*poly);
}

bool nested_inside(const Polygon& outer, const Polygon& inner) {
  for (const auto& v : inner.vertices)
    if (!strictly_contains(outer, v)) return false;
  return true;
}

}  // namespace

SlopeSet slope_set(const ReactionNetwork& net) {
  auto src = planar_sources(net);
  std::set<Rational> pos, neg;
  for (std::size_t a = 0; a < src.size(); ++a)
    for (std::size_t b = a + 1; b < src.size(); ++b) {
      const auto& [m1, n1] = src[a];
      const auto& [m2, n2] = src[b];
      if (m1 == m2 || n1 == n2) continue;
      Rational sigma = (m1 - m2) / (n2 - n1);
      (sigma > 0 ? pos : neg).insert(sigma);
    }
  SlopeSet out;
  out.r.assign(pos.begin(), pos.end());
  out.s.assign(neg.begin(), neg.end());

  const auto& r = out.r;
  const auto& s = out.s;
  if (r.empty()) {
    out.r_frac = {1.0};
  } else {
    out.r_frac.push_back(to_double(r.front() / 2));
    for (std::size_t i = 0; i + 1 < r.size(); ++i) out.r_frac.push_back(to_double((r[i] + r[i + 1]) / 2));
    out.r_frac.push_back(to_double(r.back() + 1));
  }
  if (s.empty()) {
    out.s_frac = {-1.0};
  } else {
    out.s_frac.push_back(to_double(s.front() - 1));
    for (std::size_t j = 0; j + 1 < s.size(); ++j) out.s_frac.push_back(to_double((s[j] + s[j + 1]) / 2));
    out.s_frac.push_back(to_double(s.back() / 2));
  }
  return out;
}

std::optional<DirectionDelta> delta_for_direction(const ReactionNetwork& net, double eta, const Vec2& n) {
  auto line = essential_support(net, n);
  if (!line) return std::nullopt;
  std::optional<std::size_t> best;
  Rational best_dot, worst_dot;
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& rx = net.reactions()[r];
    if (dot2(to_vec2(rx.source), n) != line->offset) continue;
    Rational d = dot2(to_vec2(rx.vector()), n);
    if (!best || d < worst_dot) worst_dot = d;
    bool better = !best || d > best_dot;
    if (best && d == best_dot) {
      const auto& cur = net.reactions()[*best];
      better = std::tie(rx.source, rx.target) < std::tie(cur.source, cur.target);
    }
    if (better) {
      best = r;
      best_dot = d;
    }
  }
  if (best_dot <= 0 || worst_dot < 0)
    throw FamilyError("sweep test fails along (" + format_rational(n[0]) + "," + format_rational(n[1]) + ")");
  double total = 0;
  for (const auto& rx : net.reactions()) total += vector_norm(rx.vector());
  double nn = std::hypot(to_double(n[0]), to_double(n[1]));
  return DirectionDelta{n, *best, eta * eta * to_double(best_dot) / (nn * total)};
}

std::vector<Vec2> delta_directions(const ReactionNetwork& net) {
  auto dirs = test_vector_set(net).vectors;
  auto slopes = slope_set(net);
  auto add = [&](const Rational& sigma) {
    dirs.push_back(primitive(Vec2{1, sigma}));
    dirs.push_back(primitive(Vec2{-1, -sigma}));
  };
  for (const auto& q : slopes.r) add(q);
  for (const auto& q : slopes.s) add(q);
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  return dirs;
}

double delta_bound(const ReactionNetwork& net, double eta) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
  double delta = inf;
  for (const auto& n : delta_directions(net))
    if (auto d = delta_for_direction(net, eta, n)) delta = std::min(delta, d->delta);
  if (!std::isfinite(delta)) throw FamilyError("no direction has a non-orthogonal reaction");
  return delta;
}

double delta_prime(const ReactionNetwork& net, double delta) {
  auto src = planar_sources(net);
  double out = inf;
  for (const auto& a : src)
    for (const auto& b : src)
      if (a[1] != b[1]) out = std::min(out, std::pow(delta, 1.0 / to_double(b[1] - a[1])));
  return std::isfinite(out) ? out : delta;
}

Point Polygon::inward_normal(std::size_t i) const {
  const Point& p = vertices[i];
  const Point& q = vertices[(i + 1) % vertices.size()];
  Point n{p[1] - q[1], q[0] - p[0]};
  double l = norm(n);
  return {n[0] / l, n[1] / l};
}

std::optional<Polygon> build_polygon(const SlopeSet& sl, double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) return std::nullopt;
  const std::size_t e = sl.e(), f = sl.f();
  std::vector<double> r, s;
  for (const auto& q : sl.r) r.push_back(to_double(q));
  for (const auto& q : sl.s) s.push_back(to_double(q));

  Polygon poly;
  auto add = [&](const Point& v, char chain, std::size_t idx, Corner corner, Side side) {
    poly.vertices.push_back(v);
    poly.labels.push_back(std::string(1, chain) + std::to_string(idx));
    poly.corners.push_back(corner);
    poly.sides.push_back(side);
  };
  auto step = [&](const Point& from, const Point& dir, double tau) { return hit_curve(from, dir, tau); };

  Point cur{alpha, std::pow(alpha, sl.r_frac[0])};
  for (std::size_t i = 0; i < e; ++i) {
    add(cur, 'A', i + 1, Corner::sw, {SideKind::sloped, r[i]});
    auto nxt = step(cur, {r[i], -1.0}, sl.r_frac[i + 1]);
    if (!nxt) return std::nullopt;
    cur = *nxt;
  }
  add(cur, 'A', e + 1, Corner::sw, {SideKind::horizontal});
  auto b = step(cur, {1.0, 0.0}, sl.s_frac[0]);
  if (!b) return std::nullopt;
  cur = *b;
  for (std::size_t j = 0; j < f; ++j) {
    add(cur, 'B', j + 1, Corner::se, {SideKind::sloped, s[j]});
    auto nxt = step(cur, {-s[j], 1.0}, sl.s_frac[j + 1]);
    if (!nxt) return std::nullopt;
    cur = *nxt;
  }
  add(cur, 'B', f + 1, Corner::se, {SideKind::vertical});
  auto c = step(cur, {0.0, 1.0}, sl.r_frac[0]);
  if (!c) return std::nullopt;
  cur = *c;
  for (std::size_t i = 0; i < e; ++i) {
    add(cur, 'C', i + 1, Corner::ne, {SideKind::sloped, r[i]});
    auto nxt = step(cur, {-r[i], 1.0}, sl.r_frac[i + 1]);
    if (!nxt) return std::nullopt;
    cur = *nxt;
  }
  add(cur, 'C', e + 1, Corner::ne, {SideKind::horizontal});
  auto d = step(cur, {-1.0, 0.0}, sl.s_frac[0]);
  if (!d) return std::nullopt;
  cur = *d;
  for (std::size_t j = 0; j < f; ++j) {
    add(cur, 'D', j + 1, Corner::nw, {SideKind::sloped, s[j]});
    auto nxt = step(cur, {s[j], -1.0}, sl.s_frac[j + 1]);
    if (!nxt) return std::nullopt;
    cur = *nxt;
  }
  add(cur, 'D', f + 1, Corner::nw, {SideKind::closure});
  // The segment D_{f+1}A_1 is replaced by a vertical side through the rightmost of the two,
  // which keeps the family nested.
  double w = std::max(poly.vertices.front()[0], cur[0]);
  return clip_halfplane(poly, {1.0, 0.0}, w);
}

bool is_strictly_convex(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.vertices[i];
    const Point& b = poly.vertices[(i + 1) % n];
    const Point& c = poly.vertices[(i + 2) % n];
    Point u{b[0] - a[0], b[1] - a[1]};
    Point v{c[0] - b[0], c[1] - b[1]};
    if (!(u[0] * v[1] - u[1] * v[0] > 0)) return false;
  }
  return true;
}

bool is_convex(const Polygon& poly, double rel_tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.vertices[i];
    const Point& b = poly.vertices[(i + 1) % n];
    const Point& c = poly.vertices[(i + 2) % n];
    Point u{b[0] - a[0], b[1] - a[1]};
    Point v{c[0] - b[0], c[1] - b[1]};
    if (u[0] * v[1] - u[1] * v[0] < -rel_tol * norm(u) * norm(v)) return false;
  }
  return true;
}

double boundary_margin(const Polygon& poly, const Point& p) {
  double m = inf;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point n = poly.inward_normal(i);
    const Point& v = poly.vertices[i];
    m = std::min(m, n[0] * (p[0] - v[0]) + n[1] * (p[1] - v[1]));
  }
  return m;
}

bool contains(const Polygon& poly, const Point& p, double tol) { return boundary_margin(poly, p) >= -tol; }

bool strictly_contains(const Polygon& poly, const Point& p) { return boundary_margin(poly, p) > 0; }

bool vertices_in_corners(const PolygonFamily& fam, const Polygon& poly) {
  const double xi = fam.xi, M = fam.M;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& [x, y] = poly.vertices[i];
    bool ok = false;
    switch (poly.corners[i]) {
      case Corner::sw: ok = x < xi && y < xi; break;
      case Corner::se: ok = x > M && y < xi; break;
      case Corner::ne: ok = x > M && y > M; break;
      case Corner::nw: ok = x < xi && y > M; break;
    }
    if (!ok) return false;
  }
  return true;
}

int count_curve_crossings(const Point& p, const Point& q, double a, double sigma) {
  Point d{q[0] - p[0], q[1] - p[1]};
  auto g = [&](double t) {
    return std::log(p[1] + t * d[1]) - std::log(a) - sigma * std::log(p[0] + t * d[0]);
  };
  std::vector<double> ts{0.0};
  double denom = d[0] * d[1] * (1.0 - sigma);
  if (denom != 0) {
    double tc = (sigma * d[0] * p[1] - d[1] * p[0]) / denom;
    if (tc > 0 && tc < 1) ts.push_back(tc);
  }
  ts.push_back(1.0);
  int count = 0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k)
    if (std::signbit(g(ts[k])) != std::signbit(g(ts[k + 1]))) ++count;
  return count;
}

PStarAudit audit_pstar(const PolygonFamily& fam, const Polygon& poly) {
  PStarAudit out;
  std::vector<double> sigmas;
  for (const auto& q : fam.slopes.r) sigmas.push_back(to_double(q));
  for (const auto& q : fam.slopes.s) sigmas.push_back(to_double(q));
  for (double sigma : sigmas)
    for (double a : {fam.delta_prime, 1.0 / fam.delta_prime}) {
      int total = 0, on_governed = 0;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        int c = count_curve_crossings(poly.vertices[i], poly.vertices[(i + 1) % poly.size()], a, sigma);
        total += c;
        if (poly.sides[i].kind == SideKind::sloped && poly.sides[i].sigma == sigma) on_governed += c;
      }
      if (total != 2 || on_governed != 2) {
        out.ok = false;
        out.failures.push_back("curve y=" + fmt(a) + "*x^" + fmt(sigma) + " crosses the boundary " +
                               std::to_string(total) + " times, " + std::to_string(on_governed) +
                               " on its own sides");
      }
    }
  return out;
}

ConditionAudit audit_conditions(const PolygonFamily& fam, const Point& c0) {
  ConditionAudit out;
  const double lxi = std::log(fam.xi), lM = std::log(fam.M);
  auto fail = [&](bool& flag, bool shrink, bool grow, std::string what) {
    flag = false;
    out.shrink_xi |= shrink;
    out.grow_M |= grow;
    out.failures.push_back(std::move(what));
  };
  if (!(fam.xi < 1 && fam.M > 1)) fail(out.p1, fam.xi >= 1, fam.M <= 1, "need xi < 1 < M");

  for (int k = 0; k < 2; ++k) {
    if (!(c0[k] > fam.xi)) fail(out.p1, true, false, "initial point below xi");
    if (!(c0[k] < fam.M)) fail(out.p1, false, true, "initial point above M");
  }

  auto curves = family_curves(fam);
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      const auto& a = curves[i];
      const auto& b = curves[j];
      if (a.tau == b.tau) continue;
      double lx = (b.log_a - a.log_a) / (a.tau - b.tau);
      double ly = a.log_a + a.tau * lx;
      bool low = lx <= lxi || ly <= lxi;
      bool high = lx >= lM || ly >= lM;
      if (low || high)
        fail(out.p2, low, high, "curves with exponents " + fmt(a.tau) + " and " + fmt(b.tau) + " meet at (" +
                                    fmt(std::exp(lx)) + "," + fmt(std::exp(ly)) + ")");
    }

  for (const auto& c : curves) {
    if (c.tau < 0) {
      // (0,xi)^2 below, (M,inf)^2 above the curve.
      if (!(c.log_a + c.tau * lxi >= lxi)) fail(out.p3, true, false, "SW square not below exponent " + fmt(c.tau));
      if (!(c.log_a + c.tau * lM <= lM)) fail(out.p3, false, true, "NE square not above exponent " + fmt(c.tau));
      // Crossings with (0,xi) x {M} and {M} x (0,xi).
      if (!((lM - c.log_a) / c.tau < lxi)) fail(out.p4, false, true, "top segment missed by exponent " + fmt(c.tau));
      if (!(c.log_a + c.tau * lM < lxi)) fail(out.p4, false, true, "right segment missed by exponent " + fmt(c.tau));
    } else {
      // (0,xi) x (M,inf) above, (M,inf) x (0,xi) below the curve.
      if (!(c.log_a + c.tau * lxi <= lM)) fail(out.p3, false, true, "NW box not above exponent " + fmt(c.tau));
      if (!(c.log_a + c.tau * lM >= lxi)) fail(out.p3, true, false, "SE box not below exponent " + fmt(c.tau));
    }
  }

  const auto& src = fam.sources;
  for (const auto& a : src)
    for (const auto& b : src)
      for (int k = 0; k < 2; ++k) {
        if (a[k] == b[k]) continue;
        double ex = 1.0 / (b[k] - a[k]);
        double lo = std::pow(fam.delta, ex);
        double hi = std::pow(1.0 / fam.delta, ex);
        if (!(fam.xi < lo)) fail(out.p5, true, false, "xi not below " + fmt(lo));
        if (!(fam.M > hi)) fail(out.p5, false, true, "M not above " + fmt(hi));
      }
  return out;
}

PolygonFamily build_family(const ReactionNetwork& net, double eta, const Point& c0, const FamilyOptions& opt) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
  if (!(c0[0] > 0 && c0[1] > 0)) throw std::invalid_argument("initial point must be strictly positive");
  auto verdict = is_endotactic(net);
  if (!verdict.endotactic) throw FamilyError("network is not endotactic; no invariant polygon family exists");

  PolygonFamily fam;
  fam.eta = eta;
  fam.c0 = c0;
  fam.slopes = slope_set(net);
  fam.delta = delta_bound(net, eta);
  fam.delta_prime = delta_prime(net, fam.delta);
  for (const auto& p : planar_sources(net)) fam.sources.push_back({to_double(p[0]), to_double(p[1])});

  double lo = 1.0, hi = 1.0;
  for (const auto& a : fam.sources)
    for (const auto& b : fam.sources)
      for (int k = 0; k < 2; ++k)
        if (a[k] != b[k]) {
          lo = std::min(lo, std::pow(fam.delta, 1.0 / (b[k] - a[k])));
          hi = std::max(hi, std::pow(1.0 / fam.delta, 1.0 / (b[k] - a[k])));
        }
  fam.xi = 0.5 * lo;
  fam.M = 2.0 * hi;

  ConditionAudit audit;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    audit = audit_conditions(fam, c0);
    if (audit.ok()) break;
    if (!audit.shrink_xi && !audit.grow_M) break;
    if (fam.xi < 1e-300 || fam.M > 1e300) break;
    if (audit.shrink_xi) fam.xi *= 0.5;
    if (audit.grow_M) fam.M *= 2.0;
  }
  fam.search_iterations = it;
  if (!audit.ok())
    throw FamilyError("no admissible (xi, M) after " + std::to_string(it) + " iterations: " + audit.failures.front());

  auto certified = [&](double alpha, bool need_pstar) {
    auto poly = build_polygon(fam.slopes, alpha);
    if (!poly || !is_strictly_convex(*poly) || !contains(*poly, c0)) return false;
    if (need_pstar && !audit_pstar(fam, *poly).ok) return false;
    if (opt.require_corner_boxes && !vertices_in_corners(fam, *poly)) return false;
    return subtangentiality_audit(net, eta, *poly, opt.audit_samples).pass;
  };
  double alpha = 0;
  for (bool need_pstar : {true, false}) {
    double a = fam.xi;
    for (int k = 0; k < opt.max_iterations && a > 1e-300; ++k, a *= 0.1)
      if (certified(a, need_pstar)) {
        alpha = a;
        break;
      }
    if (alpha > 0) {
      fam.pstar_holds = need_pstar;
      break;
    }
  }
  if (!(alpha > 0)) throw FamilyError("no certified polygon parameter found below xi");
  // Push alpha up towards the first failure; the result is re-certified.
  double bad = alpha * 10.0;
  for (int k = 0; k < 40; ++k) {
    double mid = std::sqrt(alpha * bad);
    if (certified(mid, fam.pstar_holds))
      alpha = mid;
    else
      bad = mid;
  }
  fam.alpha_max = alpha;
  fam.corners_placed = vertices_in_corners(fam, *build_polygon(fam.slopes, alpha));

  auto prev = build_polygon(fam.slopes, alpha);
  fam.alpha_min = alpha;
  for (int k = 1; k <= 300; ++k) {
    double a = fam.alpha_min * 0.1;
    if (a < 1e-280) break;
    auto poly = build_polygon(fam.slopes, a);
    if (!polygon_usable(poly) || !nested_inside(*poly, *prev)) break;
    fam.alpha_min = a;
    prev = poly;
  }
  prev = build_polygon(fam.slopes, alpha);
  fam.alpha_cap = alpha;
  for (int k = 1; k <= 40; ++k) {
    double a = fam.alpha_cap * 2.0;
    auto poly = build_polygon(fam.slopes, a);
    if (!polygon_usable(poly) || !nested_inside(*prev, *poly)) break;
    fam.alpha_cap = a;
    prev = poly;
  }
  return fam;
}

Polygon polygon_at(const PolygonFamily& fam, double alpha) {
  if (!(alpha > 0) || alpha > fam.alpha_cap)
    throw std::out_of_range("polygon parameter " + fmt(alpha) + " outside (0, " + fmt(fam.alpha_cap) + "]");
  auto poly = build_polygon(fam.slopes, alpha);
  if (!poly) throw std::out_of_range("vertices cannot be placed for parameter " + fmt(alpha));
  return *poly;
}

double phi(const PolygonFamily& fam, const Point& p) {
  if (!contains(polygon_at(fam, fam.alpha_min), p))
    throw std::out_of_range("point lies outside the lowest level of the family");
  if (contains(polygon_at(fam, fam.alpha_cap), p))
    throw std::out_of_range("point lies inside the highest level of the family");
  double lo = std::log(fam.alpha_min), hi = std::log(fam.alpha_cap);
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (contains(polygon_at(fam, std::exp(mid)), p))
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double phi_clamped(const PolygonFamily& fam, const Point& p) {
  if (!contains(polygon_at(fam, fam.alpha_min), p)) return fam.alpha_min;
  if (contains(polygon_at(fam, fam.alpha_cap), p)) return fam.alpha_cap;
  return phi(fam, p);
}

SubtangentialityReport subtangentiality_audit(const ReactionNetwork& net, double eta, const Polygon& poly,
                                              std::size_t samples, double tolerance) {
  std::vector<std::size_t> all(poly.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return subtangentiality_audit(net, eta, poly, all, samples, tolerance);
}

SubtangentialityReport subtangentiality_audit(const ReactionNetwork& net, double eta, const Polygon& poly,
                                              const std::vector<std::size_t>& sides, std::size_t samples,
                                              double tolerance) {
  if (net.species_count() != 2) throw DimensionError("sub-tangentiality audit needs 2 species");
  struct Term {
    Point source;
    Point vec;
  };
  std::vector<Term> terms;
  for (const auto& rx : net.reactions()) {
    auto s = to_doubles(rx.source);
    auto w = to_doubles(rx.vector());
    terms.push_back({{s[0], s[1]}, {w[0], w[1]}});
  }
  std::vector<double> ts;
  const std::size_t n = poly.size();
  const std::size_t m = std::max<std::size_t>(1, sides.size());
  const std::size_t per_side = std::max<std::size_t>(2, (samples + m - 1) / m);
  for (std::size_t k = 0; k < per_side; ++k) ts.push_back(double(k) / double(per_side - 1));
  for (int j = 1; j <= 12; ++j) {
    ts.push_back(std::pow(10.0, -j));
    ts.push_back(1.0 - std::pow(10.0, -j));
  }

  SubtangentialityReport rep;
  rep.tolerance = tolerance;
  rep.min_value = inf;
  for (std::size_t i : sides) {
    if (i >= n) throw std::out_of_range("side index out of range");
    const Point& p = poly.vertices[i];
    const Point& q = poly.vertices[(i + 1) % n];
    Point nrm = poly.inward_normal(i);
    for (double t : ts) {
      Point c = (t == 1.0) ? q : Point{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
      double lx = std::log(c[0]), ly = std::log(c[1]);
      double value = 0;
      for (const auto& term : terms) {
        double proj = term.vec[0] * nrm[0] + term.vec[1] * nrm[1];
        if (proj == 0) continue;
        double mono = std::exp(term.source[0] * lx + term.source[1] * ly);
        value += (proj > 0 ? eta : 1.0 / eta) * mono * proj;
      }
      ++rep.points_checked;
      if (value < rep.min_value) {
        rep.min_value = value;
        rep.worst_point = c;
        rep.worst_normal = nrm;
      }
    }
  }
  rep.pass = rep.min_value >= -tolerance;
  return rep;
}

SubtangentialityReport subtangentiality_audit(const ReactionNetwork& net, const PolygonFamily& fam, double alpha,
                                              std::size_t samples, double tolerance) {
  return subtangentiality_audit(net, fam.eta, polygon_at(fam, alpha), samples, tolerance);
}

Polygon clip_halfplane(const Polygon& poly, const Point& normal, double offset) {
  Polygon out;
  const std::size_t n = poly.size();
  auto val = [&](const Point& p) { return normal[0] * p[0] + normal[1] * p[1] - offset; };
  Side cut{SideKind::closure};
  if (normal[1] == 0) cut.kind = SideKind::vertical;
  if (normal[0] == 0) cut.kind = SideKind::horizontal;
  auto crossing = [&](const Point& p, const Point& q, double vp, double vq) {
    double t = vp / (vp - vq);
    Point x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
    // Pin the coordinate fixed by an axis-parallel cut exactly.
    if (cut.kind == SideKind::vertical) x[0] = offset / normal[0];
    if (cut.kind == SideKind::horizontal) x[1] = offset / normal[1];
    return x;
  };
  auto push = [&](const Point& v, std::string label, Corner corner, Side side) {
    out.vertices.push_back(v);
    out.labels.push_back(std::move(label));
    out.corners.push_back(corner);
    out.sides.push_back(side);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const Point& p = poly.vertices[i];
    const Point& q = poly.vertices[j];
    double vp = val(p), vq = val(q);
    if (vp >= 0) push(p, poly.labels[i], poly.corners[i], (vp == 0 && vq < 0) ? cut : poly.sides[i]);
    if (vp > 0 && vq < 0) push(crossing(p, q, vp, vq), poly.labels[j] + "'", poly.corners[j], cut);
    if (vp < 0 && vq > 0) push(crossing(p, q, vp, vq), poly.labels[i] + "'", poly.corners[i], poly.sides[i]);
  }
  return out;
}

}  // namespace crn
