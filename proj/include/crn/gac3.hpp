#pragma once

#include <array>
#include <string>
#include <vector>

#include "crn/dynamics.hpp"
#include "crn/polygon.hpp"
#include "crn/verify.hpp"

namespace crn {

enum class Plane { xy, yz, zx };

std::string to_string(Plane p);
/// Coordinates kept by the plane, in order: xy -> (0,1), yz -> (1,2), zx -> (2,0).
std::array<std::size_t, 2> plane_axes(Plane p);

/// Drops the third species from every complex; reactions that become trivial are removed and
/// duplicates merged. Rate metadata is discarded.
ReactionNetwork project_network(const ReactionNetwork& net, Plane plane);

/// kappa_min * epsilon^s_max, with kappa_min = min over rates of min(k, 1/k).
double eta_for(const ReactionNetwork& net, const std::vector<double>& kappas, double epsilon);
/// Largest stoichiometric coefficient in any complex.
int max_coefficient(const ReactionNetwork& net);

struct PlanarConstraint {
  Plane plane;
  ReactionNetwork network;
  PolygonFamily family;
  double alpha = 0;
  Polygon polygon;  // P(alpha) clipped to x >= d, y >= d
  double subtangentiality = 0;
  bool square_included = false;  // [eps, 1/eps]^2 inside [xi, M]^2
};

struct GacConstruction {
  double epsilon = 0;
  double kappa_min = 0;
  int s_max = 0;
  double eta = 0;
  double d = 0;
  std::vector<PlanarConstraint> planes;

  /// Inside the box [0, 1/eps]^3 and every planar polygon, with slack tol * max(1, |c|_inf).
  bool contains(const State& c, double tol = 0.0) const;
};

/// Half the smaller of min(x+y+z)/3 and 1/max coordinate over the given trajectories.
double epsilon_from_trajectories(const std::vector<Trajectory>& trajs);

/// Builds the three planar families and clips them at a common distance d from the axes.
/// Throws std::invalid_argument for input that is not weakly reversible with 3 species, and
/// FamilyError when no audited polygon contains the starts.
GacConstruction build_K(const ReactionNetwork& net, const std::vector<double>& kappas, double epsilon,
                        const std::vector<State>& starts);

/// Per complex: inflow minus outflow.
std::vector<double> complex_balance_residual(const ReactionNetwork& net, const std::vector<double>& kappas,
                                             const State& c);

struct Equilibrium {
  State state;
  double residual = 0;
  int newton_iterations = 0;
};

/// Long integration, then damped Newton inside c0 + S. Throws std::runtime_error when the
/// residual does not drop below 1e-10.
Equilibrium find_equilibrium(const ReactionNetwork& net, const std::vector<double>& kappas, const State& c0,
                             double horizon = 200.0);

struct GacConfig {
  IntegratorConfig integrator;
  double tolerance = 1e-7;
  double target_distance = 1e-6;
  double monotone_fraction = 0.3;
};

struct GacReport {
  CertificationReport certification;
  GacConstruction construction;
  std::vector<Equilibrium> equilibria;
  std::vector<std::vector<double>> distance_times;  // per trajectory, recorded sample times
  std::vector<std::vector<double>> distances;
  double max_complex_balance_residual = 0;
  double min_coordinate_sum = 0;
};

/// Every trajectory stays in K, its distance to the equilibrium of its class decreases over the
/// final part of the run and ends below the target.
GacReport check_gac(const ReactionNetwork& net, const std::vector<double>& kappas, const std::vector<State>& starts,
                    const GacConfig& config = {});

}  // namespace crn
