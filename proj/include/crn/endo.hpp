#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "crn/network.hpp"

namespace crn {

using Vec2 = std::array<Rational, 2>;

inline Rational dot2(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
Vec2 to_vec2(const RationalVector& v);
/// Scales a nonzero rational vector to the primitive integer vector with the same direction.
Vec2 primitive(const Vec2& v);

/// The line {p : normal . p == offset}; `point` is one source lying on it.
struct SupportLine {
  Vec2 normal;
  Rational offset;
  Vec2 point;
};

/// Lexicographically sorted, counterclockwise hull vertices (monotone chain). Collinear
/// inputs give the two endpoints; a single point gives one vertex.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Indices of reactions whose reaction vector is not orthogonal to v.
std::vector<std::size_t> essential_subnetwork(const ReactionNetwork& net, const Vec2& v);

/// Support line orthogonal to v through the sources of the essential subnetwork minimizing P.v;
/// nullopt when no reaction qualifies.
std::optional<SupportLine> essential_support(const ReactionNetwork& net, const Vec2& v);

struct SweepResult {
  Vec2 vector;
  bool pass = true;
  std::optional<SupportLine> support;
  std::vector<std::size_t> witnesses;  // reactions with source on the support line and (P'-P).v < 0
};

SweepResult sweep_test(const ReactionNetwork& net, const Vec2& v);

struct TestVectorSet {
  std::vector<Vec2> vectors;  // sorted lexicographically, no duplicates
  bool degenerate = false;    // all sources coincide
};

/// Inward primitive normals of the hull sides (both normals for a segment) plus +-i, +-j.
TestVectorSet test_vector_set(const ReactionNetwork& net);

/// Inward normals of negative-slope hull sides that point into the positive quadrant, plus i, j.
std::vector<Vec2> lower_test_vector_set(const ReactionNetwork& net);

struct SweepWitness {
  Vec2 vector;
  std::size_t reaction;
  SupportLine support;
};

struct SweepVerdict {
  bool endotactic = false;
  bool lower_endotactic = false;
  bool degenerate = false;
  std::vector<Vec2> tested_vectors;
  std::vector<SweepWitness> witnesses;
};

/// Full sweep over test_vector_set; lower_endotactic is filled in as well.
SweepVerdict is_endotactic(const ReactionNetwork& net);
/// Sweep over lower_test_vector_set; the endotactic flag is filled in as well.
SweepVerdict is_lower_endotactic(const ReactionNetwork& net);

}  // namespace crn
