#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "crn/endo.hpp"
#include "crn/gac3.hpp"
#include "crn/graph.hpp"
#include "crn/polygon.hpp"
#include "crn/verify.hpp"

namespace crn {

using Json = nlohmann::ordered_json;

/// Exact values are written as strings ("3/2"), floating values as numbers.
Json to_json(const ReactionNetwork& net);
Json to_json(const ReactionNetwork& net, const StructureReport& rep);
Json to_json(const ReactionNetwork& net, const SweepVerdict& verdict);
Json to_json(const SlopeSet& slopes);
Json to_json(const Polygon& poly);
Json to_json(const PolygonFamily& family);
Json to_json(const ConditionAudit& audit);
Json to_json(const PStarAudit& audit);
Json to_json(const SubtangentialityReport& rep);
Json to_json(const IntegratorConfig& cfg);
Json to_json(const StepDiagnostics& diag);
Json to_json(const CertificationReport& rep);
Json to_json(const GacConstruction& k);
Json to_json(const GacReport& rep);

/// t followed by one column per species.
void write_trajectory_csv(std::ostream& out, const ReactionNetwork& net, const Trajectory& traj);
/// label,x,y per vertex.
void write_polygon_csv(std::ostream& out, const Polygon& poly);

}  // namespace crn
