#include "crn/endo.hpp"

#include <algorithm>
#include <set>

namespace crn {

namespace {

void require_planar(const ReactionNetwork& net) {
  if (net.species_count() != 2)
    throw DimensionError("planar geometry needs exactly 2 species, network has " +
                         std::to_string(net.species_count()));
}

Rational cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

const std::vector<Vec2> axis_vectors = {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}};

std::vector<Vec2> planar_sources(const ReactionNetwork& net) {
  std::vector<Vec2> pts;
  for (const auto& c : source_complexes(net)) pts.push_back(to_vec2(c));
  return pts;
}

// Inward normals of every hull side. For a segment both orientations are inward.
std::vector<Vec2> hull_normals(const std::vector<Vec2>& hull) {
  std::vector<Vec2> out;
  if (hull.size() < 2) return out;
  if (hull.size() == 2) {
    Vec2 d{hull[1][0] - hull[0][0], hull[1][1] - hull[0][1]};
    out.push_back(primitive(Vec2{-d[1], d[0]}));
    out.push_back(primitive(Vec2{d[1], -d[0]}));
    return out;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& p = hull[i];
    const Vec2& q = hull[(i + 1) % hull.size()];
    out.push_back(primitive(Vec2{p[1] - q[1], q[0] - p[0]}));
  }
  return out;
}

void sort_unique(std::vector<Vec2>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sweep_all(const ReactionNetwork& net, const std::vector<Vec2>& vectors, bool& pass,
               std::vector<SweepWitness>& witnesses) {
  pass = true;
  for (const auto& v : vectors) {
    auto res = sweep_test(net, v);
    if (res.pass) continue;
    pass = false;
    for (auto r : res.witnesses) witnesses.push_back({v, r, *res.support});
  }
}

}  // namespace

Vec2 to_vec2(const RationalVector& v) {
  if (v.size() != 2) throw DimensionError("expected a 2-vector");
  return {v[0], v[1]};
}

Vec2 primitive(const Vec2& v) {
  if (v[0] == 0 && v[1] == 0) throw std::invalid_argument("zero vector has no direction");
  Integer l = 1, g = 0;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  std::array<Integer, 2> n;
  for (int k = 0; k < 2; ++k) {
    n[k] = v[k].get_num() * (l / v[k].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n[k].get_mpz_t());
  }
  return {Rational(n[0] / g), Rational(n[1] / g)};
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  sort_unique(pts);
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

std::vector<std::size_t> essential_subnetwork(const ReactionNetwork& net, const Vec2& v) {
  require_planar(net);
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < net.reaction_count(); ++r)
    if (dot2(to_vec2(net.reactions()[r].vector()), v) != 0) out.push_back(r);
  return out;
}

std::optional<SupportLine> essential_support(const ReactionNetwork& net, const Vec2& v) {
  auto rv = essential_subnetwork(net, v);
  if (rv.empty()) return std::nullopt;
  std::optional<SupportLine> best;
  for (auto r : rv) {
    Vec2 p = to_vec2(net.reactions()[r].source);
    Rational val = dot2(p, v);
    if (!best || val < best->offset || (val == best->offset && p < best->point)) best = SupportLine{v, val, p};
  }
  return best;
}

SweepResult sweep_test(const ReactionNetwork& net, const Vec2& v) {
  if (v[0] == 0 && v[1] == 0) throw std::invalid_argument("sweep direction must be nonzero");
  SweepResult res;
  res.vector = v;
  res.support = essential_support(net, v);
  if (!res.support) return res;
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& rx = net.reactions()[r];
    if (dot2(to_vec2(rx.source), v) != res.support->offset) continue;
    if (dot2(to_vec2(rx.vector()), v) < 0) res.witnesses.push_back(r);
  }
  res.pass = res.witnesses.empty();
  return res;
}

TestVectorSet test_vector_set(const ReactionNetwork& net) {
  require_planar(net);
  auto hull = convex_hull(planar_sources(net));
  TestVectorSet out;
  out.degenerate = hull.size() == 1;
  out.vectors = hull_normals(hull);
  out.vectors.insert(out.vectors.end(), axis_vectors.begin(), axis_vectors.end());
  sort_unique(out.vectors);
  return out;
}

std::vector<Vec2> lower_test_vector_set(const ReactionNetwork& net) {
  require_planar(net);
  std::vector<Vec2> out{Vec2{1, 0}, Vec2{0, 1}};
  for (const auto& n : hull_normals(convex_hull(planar_sources(net)))) {
    // A side has strictly negative slope exactly when its normal has nonzero components of
    // equal sign; keep the orientation pointing into the positive quadrant.
    if (n[0] > 0 && n[1] > 0) out.push_back(n);
  }
  sort_unique(out);
  return out;
}

SweepVerdict is_endotactic(const ReactionNetwork& net) {
  auto set = test_vector_set(net);
  SweepVerdict verdict;
  verdict.degenerate = set.degenerate;
  verdict.tested_vectors = set.vectors;
  if (set.degenerate && net.reaction_count() > 0) {
    Vec2 w = to_vec2(net.reactions().front().vector());
    Vec2 v = primitive(Vec2{-w[0], -w[1]});
    verdict.tested_vectors.push_back(v);
    sort_unique(verdict.tested_vectors);
  }
  sweep_all(net, verdict.tested_vectors, verdict.endotactic, verdict.witnesses);
  if (verdict.endotactic) {
    verdict.lower_endotactic = true;
  } else {
    std::vector<SweepWitness> ignored;
    sweep_all(net, lower_test_vector_set(net), verdict.lower_endotactic, ignored);
  }
  return verdict;
}

SweepVerdict is_lower_endotactic(const ReactionNetwork& net) {
  SweepVerdict verdict;
  verdict.tested_vectors = lower_test_vector_set(net);
  verdict.degenerate = convex_hull(planar_sources(net)).size() == 1;
  sweep_all(net, verdict.tested_vectors, verdict.lower_endotactic, verdict.witnesses);
  std::vector<SweepWitness> ignored;
  bool endo = false;
  sweep_all(net, test_vector_set(net).vectors, endo, ignored);
  verdict.endotactic = endo && !verdict.degenerate;
  return verdict;
}

}  // namespace crn
