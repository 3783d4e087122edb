#include "crn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace crn {

MassActionSystem::MassActionSystem(const ReactionNetwork& net) : dim_(net.species_count()) {
  for (const auto& rx : net.reactions()) {
    sources_.push_back(to_doubles(rx.source));
    vectors_.push_back(to_doubles(rx.vector()));
    bool integral = true;
    for (const auto& q : rx.source) integral = integral && is_integer(q) && q >= 0;
    integral_.push_back(integral);
  }
}

double MassActionSystem::monomial(std::size_t r, const State& c) const {
  const auto& p = sources_[r];
  double m = 1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double e = p[k];
    if (e == 0) continue;
    double x = c[k];
    if (integral_[r]) {
      double f = x;
      for (int j = 1; j < static_cast<int>(e); ++j) f *= x;
      m *= f;
    } else {
      if (x <= 0) {
        if (x == 0 && e > 0) return 0.0;
        throw std::domain_error("nonpositive concentration raised to a negative or fractional power");
      }
      m *= std::pow(x, e);
    }
  }
  return m;
}

void MassActionSystem::rhs(const std::vector<double>& kappa, const State& c, State& out) const {
  out.assign(dim_, 0.0);
  for (std::size_t r = 0; r < sources_.size(); ++r) {
    double rate = kappa[r] * monomial(r, c);
    if (rate == 0) continue;
    const auto& v = vectors_[r];
    for (std::size_t k = 0; k < dim_; ++k) out[k] += rate * v[k];
  }
}

State rhs(const ReactionNetwork& net, const RateSchedule& schedule, double t, const State& c) {
  if (c.size() != net.species_count()) throw DimensionError("state dimension does not match species count");
  MassActionSystem sys(net);
  std::vector<double> kappa;
  schedule.rates(t, kappa);
  State out;
  sys.rhs(kappa, c, out);
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c_[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
constexpr double a_[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double e_[7] = {71.0 / 57600,   0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200,
                          22.0 / 525, -1.0 / 40};

bool positive(const State& x) {
  for (double v : x)
    if (!(v > 0) || !std::isfinite(v)) return false;
  return true;
}

}  // namespace

Trajectory integrate(const ReactionNetwork& net, const RateSchedule& schedule, const State& c0,
                     const IntegratorConfig& cfg) {
  if (c0.size() != net.species_count()) throw DimensionError("initial state dimension does not match species count");
  if (schedule.size() != net.reaction_count()) throw std::invalid_argument("schedule size does not match reactions");
  if (!(cfg.horizon > 0)) throw std::invalid_argument("horizon must be positive");
  if (!(cfg.rel_tol > 0 && cfg.abs_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!positive(c0)) throw std::invalid_argument("initial state must be strictly positive");

  const MassActionSystem sys(net);
  const std::size_t n = c0.size();
  const bool fixed = cfg.fixed_step > 0;

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(c0);
  traj.min_state = c0;
  traj.max_state = c0;

  State y = c0, ynew(n), stage(n), err(n);
  std::vector<State> k(7, State(n));
  std::vector<double> kappa;
  double t = 0.0;
  double h = fixed ? cfg.fixed_step : std::min(cfg.initial_step, cfg.horizon);
  double last_record = 0.0;
  std::size_t steps = 0;

  while (t < cfg.horizon) {
    if (++steps > cfg.max_steps) throw IntegrationError("step budget exhausted before the horizon", t, y);
    double bp = std::min(schedule.next_breakpoint(t), cfg.horizon);
    h = std::min(h, cfg.max_step);
    bool clipped = false;
    // Also absorb a sliver left over by rounding.
    if (t + h >= bp - 1e-12 * std::max(1.0, std::abs(bp))) {
      h = bp - t;
      clipped = true;
    }
    if (!(h > 1e-14 * std::max(1.0, std::abs(t)))) throw IntegrationError("step size underflow", t, y);
    // Rates are sampled on the current piece even for stages sitting at the step end.
    const double piece_end = std::nextafter(bp, -std::numeric_limits<double>::infinity());

    bool ok = true;
    for (int s = 0; s < 7 && ok; ++s) {
      stage = y;
      for (int j = 0; j < s; ++j)
        for (std::size_t i = 0; i < n; ++i) stage[i] += h * a_[s][j] * k[j][i];
      if (s == 6) ynew = stage;
      if (!positive(stage)) {
        ok = false;
        break;
      }
      schedule.rates(std::min(t + c_[s] * h, piece_end), kappa);
      sys.rhs(kappa, stage, k[s]);
    }
    if (!ok) {
      ++traj.diagnostics.rejected;
      ++traj.diagnostics.positivity_rejections;
      h *= 0.5;
      continue;
    }

    double factor = 1.0;
    if (!fixed) {
      double sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double e = 0;
        for (int s = 0; s < 7; ++s) e += e_[s] * k[s][i];
        e *= h;
        double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        sum += (e / scale) * (e / scale);
      }
      double enorm = std::sqrt(sum / double(n));
      if (!std::isfinite(enorm) || enorm > 1.0) {
        ++traj.diagnostics.rejected;
        h *= std::isfinite(enorm) ? std::max(0.2, 0.9 * std::pow(enorm, -0.2)) : 0.5;
        continue;
      }
      traj.diagnostics.max_error_estimate = std::max(traj.diagnostics.max_error_estimate, enorm);
      factor = enorm == 0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
    }

    ++traj.diagnostics.accepted;
    traj.diagnostics.min_step = std::min(traj.diagnostics.min_step, h);
    double taken = h;
    t = clipped ? bp : t + h;
    y = ynew;
    for (std::size_t i = 0; i < n; ++i) {
      traj.min_state[i] = std::min(traj.min_state[i], y[i]);
      traj.max_state[i] = std::max(traj.max_state[i], y[i]);
    }
    if (cfg.record_stride <= 0 || t - last_record >= cfg.record_stride || t >= cfg.horizon) {
      traj.times.push_back(t);
      traj.states.push_back(y);
      last_record = t;
    }
    h = fixed ? cfg.fixed_step : taken * factor;
    // A step cut short by a breakpoint should not shrink the next proposal.
    if (clipped && !fixed) h = std::max(h, taken);
  }
  return traj;
}

Box omega_limit_estimate(const Trajectory& traj, double tail_fraction) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw std::invalid_argument("tail fraction must lie in (0,1]");
  double t0 = traj.times.front(), t1 = traj.times.back();
  double start = t1 - tail_fraction * (t1 - t0);
  Box box{traj.states.back(), traj.states.back()};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < start) continue;
    for (std::size_t k = 0; k < box.lo.size(); ++k) {
      box.lo[k] = std::min(box.lo[k], traj.states[i][k]);
      box.hi[k] = std::max(box.hi[k], traj.states[i][k]);
    }
  }
  return box;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace crn
