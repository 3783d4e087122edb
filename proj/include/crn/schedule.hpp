#pragma once

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "crn/network.hpp"

namespace crn {

struct ConstantRate {
  double value;
};

/// values[k] holds on [breakpoints[k-1], breakpoints[k]); values.size() == breakpoints.size() + 1.
struct PiecewiseRate {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

struct SinusoidalRate {
  double mean;
  double amplitude;  // relative: mean * (1 + amplitude * sin(...))
  double period;
  double phase;
};

using RateFunction = std::variant<ConstantRate, PiecewiseRate, SinusoidalRate>;

enum class ScheduleKind { constant, piecewise, sinusoidal };

/// Time-dependent rate constants, one function per reaction, confined to the open
/// interval (eta, 1/eta).
class RateSchedule {
 public:
  RateSchedule(double eta, std::vector<RateFunction> functions);

  static RateSchedule constant(std::size_t reactions, double eta, double value);
  /// Fixed per-reaction constants; eta is chosen below every constant and its inverse.
  static RateSchedule fixed(const std::vector<double>& kappas);
  /// Log-uniform values redrawn every `interval` time units up to `horizon`.
  static RateSchedule random_piecewise(std::size_t reactions, double eta, double interval, double horizon,
                                       std::uint64_t seed);
  static RateSchedule random_sinusoidal(std::size_t reactions, double eta, double amplitude, double period,
                                        std::uint64_t seed);
  /// Builds a schedule of the requested kind; reactions with "k=VALUE" metadata keep that
  /// value as constant (or mean), "k in (LO,HI)" narrows the sampled range.
  static RateSchedule for_network(const ReactionNetwork& net, double eta, ScheduleKind kind, std::uint64_t seed,
                                  double horizon, double interval = 1.0);

  double eta() const { return eta_; }
  std::size_t size() const { return functions_.size(); }
  const std::vector<RateFunction>& functions() const { return functions_; }

  double rate(std::size_t reaction, double t) const;
  void rates(double t, std::vector<double>& out) const;
  /// Smallest breakpoint strictly greater than t, or +inf.
  double next_breakpoint(double t) const;

 private:
  double clamp(double v) const;

  double eta_;
  double lo_;
  double hi_;
  std::vector<RateFunction> functions_;
};

}  // namespace crn
