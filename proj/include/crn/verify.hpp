#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crn/dynamics.hpp"
#include "crn/polygon.hpp"
#include "crn/schedule.hpp"

namespace crn {

enum class Claim { persistence, permanence, containment, lower_endotactic_persistence, global_attractor };
enum class Verdict { pass, fail, inapplicable };

std::string to_string(Claim c);
std::string to_string(Verdict v);

struct Counterexample {
  std::size_t trajectory = 0;
  double time = 0;
  State state;
  std::string reason;
};

struct TrajectoryEvidence {
  State c0;
  State min_state;
  State max_state;
  State tail_min;
  State tail_max;
  double level = 0;      // polygon level the trajectory is checked against
  double phi_start = 0;
  double phi_end = 0;
  double phi_tail_min = 0;
  double reach_time = -1;  // first time inside the target polygon, -1 if never
  double final_distance = -1;  // distance to the equilibrium, when one is tracked
  bool ok = false;
};

struct VerifyConfig {
  IntegratorConfig integrator;
  double tolerance = 1e-7;      // boundary slack, scaled by max(1, |state|_inf)
  double tail_fraction = 0.2;
  std::size_t phi_samples = 50;   // states per trajectory where the level is evaluated
  std::uint64_t seed = 0;
  ScheduleKind schedule = ScheduleKind::piecewise;
  double schedule_interval = 1.0;
};

struct CertificationReport {
  Claim claim = Claim::containment;
  Verdict verdict = Verdict::fail;
  double eta = 0;
  double alpha0 = 0;
  double worst_subtangentiality = 0;
  std::vector<TrajectoryEvidence> trajectories;
  std::optional<Counterexample> counterexample;
  Box tail_box;     // union of the per-trajectory tail boxes
  Box fixed_box;    // compact box the tails must fall in, independent of the starts
  double threshold = 0;  // lower bound certified by the lower-endotactic chain
  VerifyConfig config;
  std::vector<std::string> notes;

  bool pass() const { return verdict == Verdict::pass; }
};

/// Starts spread log-uniformly over [lo, hi]^2, seeded.
std::vector<State> random_starts(std::size_t count, double lo, double hi, std::uint64_t seed, std::size_t dim = 2);

/// Integrates every start in parallel; the first integration error is rethrown.
std::vector<Trajectory> simulate_ensemble(const ReactionNetwork& net, const std::vector<State>& starts,
                                          const std::vector<RateSchedule>& schedules, const IntegratorConfig& cfg);

/// One schedule per start, seeded as seed + index.
std::vector<RateSchedule> ensemble_schedules(const ReactionNetwork& net, double eta, std::size_t count,
                                             const VerifyConfig& config);

/// Every recorded state stays inside P(min(phi(c0), alpha0)).
CertificationReport check_containment(const ReactionNetwork& net, const PolygonFamily& family,
                                      const std::vector<State>& starts, const std::vector<RateSchedule>& schedules,
                                      const VerifyConfig& config);

CertificationReport check_containment(const ReactionNetwork& net, const PolygonFamily& family,
                                      const std::vector<Trajectory>& runs, const VerifyConfig& config);

/// Each trajectory enters P(alpha0), stays there, and its tail lies in the bounding box of P(alpha0).
CertificationReport check_permanence(const ReactionNetwork& net, const PolygonFamily& family,
                                     const std::vector<State>& starts, const std::vector<RateSchedule>& schedules,
                                     const VerifyConfig& config);

CertificationReport check_permanence(const ReactionNetwork& net, const PolygonFamily& family,
                                     const std::vector<Trajectory>& runs, const VerifyConfig& config);

/// Permanence without a polygon family: tails of all trajectories must share a box bounded away
/// from zero. Used for networks whose family has no certified level covering the starts.
CertificationReport check_tail_box(const ReactionNetwork& net, const std::vector<State>& starts,
                                   const std::vector<RateSchedule>& schedules, const VerifyConfig& config);

/// Bounded trajectory of a lower-endotactic network: the tail must stay above the
/// south-west chain of a polygon audited on that chain only, over the trajectory's box.
CertificationReport check_bounded_persistence(const ReactionNetwork& net, const Trajectory& traj, double eta,
                                              const VerifyConfig& config = {});

/// Indices of the sides facing the origin (inward normal in the closed positive quadrant).
std::vector<std::size_t> southwest_sides(const Polygon& poly);

/// Containment with slack tol * max(1, |p|_inf).
bool contains_scaled(const Polygon& poly, const Point& p, double tol);

}  // namespace crn
