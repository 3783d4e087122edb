#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crn/network.hpp"
#include "crn/schedule.hpp"

namespace crn {

using State = std::vector<double>;

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time, State state)
      : std::runtime_error(what), time_(time), state_(std::move(state)) {}
  double time() const { return time_; }
  const State& state() const { return state_; }

 private:
  double time_;
  State state_;
};

/// Network compiled for fast right-hand-side evaluation.
class MassActionSystem {
 public:
  explicit MassActionSystem(const ReactionNetwork& net);

  std::size_t dimension() const { return dim_; }
  std::size_t reaction_count() const { return sources_.size(); }

  /// c^P for reaction r, with 0^0 = 1. Throws std::domain_error for a nonpositive
  /// coordinate raised to a negative or fractional power.
  double monomial(std::size_t r, const State& c) const;
  void rhs(const std::vector<double>& kappa, const State& c, State& out) const;

 private:
  std::size_t dim_;
  std::vector<std::vector<double>> sources_;
  std::vector<std::vector<double>> vectors_;
  std::vector<bool> integral_;
};

/// Sum over reactions of kappa_r(t) c^P (P' - P).
State rhs(const ReactionNetwork& net, const RateSchedule& schedule, double t, const State& c);

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double horizon = 100.0;
  double record_stride = 0.0;  // 0 records every accepted step
  double initial_step = 1e-4;
  std::size_t max_steps = 20'000'000;
  double fixed_step = 0.0;     // > 0 switches off error control
};

struct StepDiagnostics {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t positivity_rejections = 0;
  double max_error_estimate = 0.0;
  double min_step = std::numeric_limits<double>::infinity();
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  StepDiagnostics diagnostics;
  State min_state;  // coordinate-wise extremes over every accepted step
  State max_state;

  bool empty() const { return times.empty(); }
  const State& final_state() const { return states.back(); }
};

/// Dormand-Prince 5(4) with step rejection whenever a stage or the new state leaves the open
/// positive orthant; steps never straddle a schedule breakpoint.
Trajectory integrate(const ReactionNetwork& net, const RateSchedule& schedule, const State& c0,
                     const IntegratorConfig& config);

struct Box {
  State lo;
  State hi;
};

/// Coordinate-wise min/max over the samples with time in the trailing fraction of the run.
Box omega_limit_estimate(const Trajectory& traj, double tail_fraction);

/// Runs body(i) for i in [0, n) on a small thread pool; results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace crn
