#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/endo.hpp"

namespace crn {

using Point = std::array<double, 2>;

class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Slopes of the source-pair lines, split by sign, and the interleaved exponents of the
/// curves hosting polygon vertices: r_frac[i] is r_{i+1/2}, s_frac[j] is s_{j+1/2}.
struct SlopeSet {
  std::vector<Rational> r;  // ascending, positive
  std::vector<Rational> s;  // ascending, negative
  std::vector<double> r_frac;
  std::vector<double> s_frac;

  bool empty() const { return r.empty() && s.empty(); }
  std::size_t e() const { return r.size(); }
  std::size_t f() const { return s.size(); }
};

SlopeSet slope_set(const ReactionNetwork& net);

struct DirectionDelta {
  Vec2 direction;
  std::size_t reaction;  // reaction maximizing (P'-P).n among sources on the support line
  double delta;
};

/// Per-direction constant eta^2 (P'-P).n / (|n| sum |P'-P|); nullopt when no reaction is
/// non-orthogonal to n. Throws FamilyError when the sweep fails along n.
std::optional<DirectionDelta> delta_for_direction(const ReactionNetwork& net, double eta, const Vec2& n);

/// Directions entering delta_bound: hull normals, +-i, +-j and +-(1, sigma) for every slope.
std::vector<Vec2> delta_directions(const ReactionNetwork& net);

/// Minimum of delta_for_direction over delta_directions.
double delta_bound(const ReactionNetwork& net, double eta);

/// min delta^(1/(n'-n)) over ordered source pairs with different second coordinate;
/// delta itself when no such pair exists.
double delta_prime(const ReactionNetwork& net, double delta);

enum class SideKind { sloped, horizontal, vertical, closure };

struct Side {
  SideKind kind;
  double sigma = 0.0;  // governing slope for sloped sides: the side is orthogonal to (1, sigma)
};

enum class Corner { sw, se, ne, nw };

struct Polygon {
  std::vector<Point> vertices;    // counterclockwise
  std::vector<std::string> labels;
  std::vector<Corner> corners;
  std::vector<Side> sides;        // sides[i] joins vertices[i] and vertices[i+1 mod n]

  std::size_t size() const { return vertices.size(); }
  /// Unit inward normal of side i, from the vertex coordinates.
  Point inward_normal(std::size_t i) const;
};

/// Vertex chains for parameter alpha; nullopt if some vertex cannot be placed.
std::optional<Polygon> build_polygon(const SlopeSet& slopes, double alpha);

struct PolygonFamily {
  SlopeSet slopes;
  double eta = 0;
  double delta = 0;
  double delta_prime = 0;
  double xi = 0;
  double M = 0;
  double alpha_max = 0;  // the largest certified parameter
  double alpha_min = 0;  // lower end of the range usable for level queries
  double alpha_cap = 0;  // upper end of the range usable for level queries (>= alpha_max)
  Point c0{1, 1};
  std::vector<Point> sources;
  int search_iterations = 0;
  bool corners_placed = false;  // every vertex of P(alpha_max) inside its corner box
  bool pstar_holds = false;     // the certified polygon also has the curve-crossing property
};

struct FamilyOptions {
  int max_iterations = 1000;
  /// Also demand that every vertex sits in its corner box outside (xi, M)^2. Off by default:
  /// the certified parameter is the one passing the sub-tangentiality audit.
  bool require_corner_boxes = false;
  std::size_t audit_samples = 2000;
};

/// Throws FamilyError when the network is not endotactic or the search does not converge.
PolygonFamily build_family(const ReactionNetwork& net, double eta, const Point& c0, const FamilyOptions& opt = {});

/// Throws std::out_of_range outside (0, alpha_cap] or when the vertices cannot be placed.
Polygon polygon_at(const PolygonFamily& family, double alpha);

/// Closed containment via inward half-planes; tol is an absolute slack on the signed distance.
bool contains(const Polygon& poly, const Point& p, double tol = 0.0);
/// Open containment: strictly inside every half-plane.
bool strictly_contains(const Polygon& poly, const Point& p);
/// Signed distance to the nearest side line (positive inside).
double boundary_margin(const Polygon& poly, const Point& p);

bool is_strictly_convex(const Polygon& poly);
/// Convex up to a relative tolerance on the turn of consecutive edges; nearly collinear edges
/// appear when a side is tiny next to its endpoints' coordinates.
bool is_convex(const Polygon& poly, double rel_tol = 1e-12);

/// Level of the polygon through p, by bisection in log(alpha). Throws std::out_of_range when p
/// is outside P(alpha_min) or strictly inside P(alpha_cap).
double phi(const PolygonFamily& family, const Point& p);
/// phi clamped to [alpha_min, alpha_cap] instead of throwing.
double phi_clamped(const PolygonFamily& family, const Point& p);

struct ConditionAudit {
  bool p1 = true, p2 = true, p3 = true, p4 = true, p5 = true;
  bool shrink_xi = false;
  bool grow_M = false;
  std::vector<std::string> failures;
  bool ok() const { return p1 && p2 && p3 && p4 && p5; }
};

/// Checks the five conditions on (xi, M) as explicit inequalities, independently of how the
/// family was built.
ConditionAudit audit_conditions(const PolygonFamily& family, const Point& c0);

struct PStarAudit {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Each curve y = a x^sigma, a in {delta', 1/delta'}, must cross the boundary exactly twice,
/// both times on sides orthogonal to (1, sigma).
PStarAudit audit_pstar(const PolygonFamily& family, const Polygon& poly);

/// Vertices inside their corner boxes relative to (xi, M).
bool vertices_in_corners(const PolygonFamily& family, const Polygon& poly);

struct SubtangentialityReport {
  double min_value = 0;
  Point worst_point{0, 0};
  Point worst_normal{0, 0};
  std::size_t points_checked = 0;
  double tolerance = 1e-9;
  bool pass = false;
};

/// Worst case over the rate box (eta, 1/eta) of the flow's inward normal component, sampled
/// over the boundary; vertices are checked against both adjacent normals.
SubtangentialityReport subtangentiality_audit(const ReactionNetwork& net, double eta, const Polygon& poly,
                                              std::size_t samples, double tolerance = 1e-9);
/// Same, restricted to the listed sides.
SubtangentialityReport subtangentiality_audit(const ReactionNetwork& net, double eta, const Polygon& poly,
                                              const std::vector<std::size_t>& sides, std::size_t samples,
                                              double tolerance = 1e-9);
SubtangentialityReport subtangentiality_audit(const ReactionNetwork& net, const PolygonFamily& family,
                                              double alpha, std::size_t samples, double tolerance = 1e-9);

/// Number of sign changes of log y - log a - sigma log x along the segment p -> q.
int count_curve_crossings(const Point& p, const Point& q, double a, double sigma);

/// Intersection of the convex polygon with the half-plane normal . x >= offset.
Polygon clip_halfplane(const Polygon& poly, const Point& normal, double offset);

}  // namespace crn
