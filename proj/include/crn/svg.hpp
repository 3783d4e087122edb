#pragma once

#include <string>
#include <vector>

#include "crn/dynamics.hpp"
#include "crn/polygon.hpp"

namespace crn {

struct SvgOptions {
  double width = 640;
  double height = 640;
  bool log_axes = true;
};

/// Phase plane with the polygon, the curves y = a x^sigma for a in {delta', 1/delta'} and the
/// fractional-index curves y = x^tau, in log-log coordinates.
std::string polygon_svg(const PolygonFamily& family, const Polygon& poly, const SvgOptions& opt = {});

/// Phase portrait of planar trajectories, optionally with a polygon outline.
std::string trajectories_svg(const std::vector<Trajectory>& trajs, const Polygon* poly = nullptr,
                             const SvgOptions& opt = {});

}  // namespace crn
