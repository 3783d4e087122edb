#include "crn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crn/endo.hpp"

namespace crn {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Point as_point(const State& s) { return {s[0], s[1]}; }

double inf_norm(const Point& p) { return std::max(std::abs(p[0]), std::abs(p[1])); }

Box empty_box(std::size_t dim) { return {State(dim, inf), State(dim, -inf)}; }

void absorb(Box& into, const Box& b) {
  for (std::size_t k = 0; k < into.lo.size(); ++k) {
    into.lo[k] = std::min(into.lo[k], b.lo[k]);
    into.hi[k] = std::max(into.hi[k], b.hi[k]);
  }
}

Box polygon_box(const Polygon& poly) {
  Box b = empty_box(2);
  for (const auto& v : poly.vertices)
    for (int k = 0; k < 2; ++k) {
      b.lo[k] = std::min(b.lo[k], v[k]);
      b.hi[k] = std::max(b.hi[k], v[k]);
    }
  return b;
}

// Indices of at most `count` recorded states, spread evenly and always including the ends.
std::vector<std::size_t> spread(std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  if (count < 2 || n <= count) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t k = 0; k < count; ++k) idx.push_back(k * (n - 1) / (count - 1));
  return idx;
}

std::size_t tail_begin(const Trajectory& traj, double fraction) {
  double t0 = traj.times.back() - fraction * (traj.times.back() - traj.times.front());
  return std::lower_bound(traj.times.begin(), traj.times.end(), t0) - traj.times.begin();
}

void fill_extremes(TrajectoryEvidence& ev, const Trajectory& traj, double tail_fraction) {
  ev.min_state = traj.min_state;
  ev.max_state = traj.max_state;
  Box tail = omega_limit_estimate(traj, tail_fraction);
  ev.tail_min = tail.lo;
  ev.tail_max = tail.hi;
}

// The first failing trajectory, in index order, becomes the counterexample.
void record_failure(CertificationReport& rep, std::size_t i, double t, const State& s, std::string reason) {
  if (rep.counterexample && rep.counterexample->trajectory <= i) return;
  rep.counterexample = Counterexample{i, t, s, std::move(reason)};
}

CertificationReport start_report(Claim claim, const PolygonFamily* fam, const VerifyConfig& config) {
  CertificationReport rep;
  rep.claim = claim;
  rep.config = config;
  if (fam) {
    rep.eta = fam->eta;
    rep.alpha0 = fam->alpha_max;
  }
  return rep;
}

}  // namespace

std::string to_string(Claim c) {
  switch (c) {
    case Claim::persistence: return "persistence";
    case Claim::permanence: return "permanence";
    case Claim::containment: return "containment";
    case Claim::lower_endotactic_persistence: return "lower-endotactic-persistence";
    case Claim::global_attractor: return "global-attractor";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inapplicable: return "INAPPLICABLE";
  }
  return "?";
}

bool contains_scaled(const Polygon& poly, const Point& p, double tol) {
  return contains(poly, p, tol * std::max(1.0, inf_norm(p)));
}

std::vector<State> random_starts(std::size_t count, double lo, double hi, std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<State> out(count, State(dim));
  for (auto& s : out)
    for (auto& x : s) x = std::exp(u(rng));
  return out;
}

std::vector<Trajectory> simulate_ensemble(const ReactionNetwork& net, const std::vector<State>& starts,
                                          const std::vector<RateSchedule>& schedules, const IntegratorConfig& cfg) {
  if (starts.size() != schedules.size()) throw std::invalid_argument("one schedule per start is required");
  std::vector<Trajectory> out(starts.size());
  std::vector<std::optional<IntegrationError>> errors(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    try {
      out[i] = integrate(net, schedules[i], starts[i], cfg);
    } catch (const IntegrationError& e) {
      errors[i] = e;
    }
  });
  for (auto& e : errors)
    if (e) throw *e;
  return out;
}

std::vector<RateSchedule> ensemble_schedules(const ReactionNetwork& net, double eta, std::size_t count,
                                             const VerifyConfig& config) {
  std::vector<RateSchedule> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(RateSchedule::for_network(net, eta, config.schedule, config.seed + i, config.integrator.horizon,
                                            config.schedule_interval));
  return out;
}

CertificationReport check_containment(const ReactionNetwork& net, const PolygonFamily& fam,
                                      const std::vector<State>& starts, const std::vector<RateSchedule>& schedules,
                                      const VerifyConfig& config) {
  return check_containment(net, fam, simulate_ensemble(net, starts, schedules, config.integrator), config);
}

CertificationReport check_containment(const ReactionNetwork& net, const PolygonFamily& fam,
                                      const std::vector<Trajectory>& runs, const VerifyConfig& config) {
  auto rep = start_report(Claim::containment, &fam, config);
  rep.worst_subtangentiality = subtangentiality_audit(net, fam, fam.alpha_max, 2000).min_value;
  rep.tail_box = empty_box(2);
  rep.trajectories.resize(runs.size());
  bool all = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto& ev = rep.trajectories[i];
    ev.c0 = runs[i].states.front();
    const auto& traj = runs[i];
    fill_extremes(ev, traj, config.tail_fraction);
    absorb(rep.tail_box, {ev.tail_min, ev.tail_max});
    ev.phi_start = phi_clamped(fam, as_point(traj.states.front()));
    ev.level = std::min(ev.phi_start, fam.alpha_max);
    ev.phi_end = phi_clamped(fam, as_point(traj.final_state()));
    Polygon poly = polygon_at(fam, ev.level);
    ev.ok = true;
    for (std::size_t k = 0; k < traj.states.size(); ++k)
      if (!contains_scaled(poly, as_point(traj.states[k]), config.tolerance)) {
        ev.ok = false;
        record_failure(rep, i, traj.times[k], traj.states[k], "state leaves its starting polygon level");
        break;
      }
    ev.phi_tail_min = inf;
    for (std::size_t k : spread(traj.states.size(), config.phi_samples))
      ev.phi_tail_min = std::min(ev.phi_tail_min, phi_clamped(fam, as_point(traj.states[k])));
    all = all && ev.ok;
  }
  rep.fixed_box = polygon_box(polygon_at(fam, fam.alpha_min));
  rep.verdict = all ? Verdict::pass : Verdict::fail;
  return rep;
}

CertificationReport check_permanence(const ReactionNetwork& net, const PolygonFamily& fam,
                                     const std::vector<State>& starts, const std::vector<RateSchedule>& schedules,
                                     const VerifyConfig& config) {
  return check_permanence(net, fam, simulate_ensemble(net, starts, schedules, config.integrator), config);
}

CertificationReport check_permanence(const ReactionNetwork& net, const PolygonFamily& fam,
                                     const std::vector<Trajectory>& runs, const VerifyConfig& config) {
  auto rep = start_report(Claim::permanence, &fam, config);
  rep.worst_subtangentiality = subtangentiality_audit(net, fam, fam.alpha_max, 2000).min_value;
  const Polygon target = polygon_at(fam, fam.alpha_max);
  const Polygon relaxed = polygon_at(fam, fam.alpha_max * (1 - 1e-6));
  rep.fixed_box = polygon_box(relaxed);
  rep.tail_box = empty_box(2);
  rep.trajectories.resize(runs.size());
  bool all = true;
  bool horizon_short = false;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto& ev = rep.trajectories[i];
    ev.c0 = runs[i].states.front();
    ev.level = fam.alpha_max;
    const auto& traj = runs[i];
    fill_extremes(ev, traj, config.tail_fraction);
    absorb(rep.tail_box, {ev.tail_min, ev.tail_max});
    ev.phi_start = phi_clamped(fam, as_point(traj.states.front()));
    ev.phi_end = phi_clamped(fam, as_point(traj.final_state()));

    std::size_t entry = traj.states.size();
    for (std::size_t k = 0; k < traj.states.size(); ++k)
      if (contains_scaled(target, as_point(traj.states[k]), config.tolerance)) {
        entry = k;
        break;
      }
    ev.ok = true;
    if (entry == traj.states.size()) {
      ev.ok = false;
      horizon_short = true;
      record_failure(rep, i, traj.times.back(), traj.final_state(),
                     "level of the target polygon not reached by the horizon");
    } else {
      ev.reach_time = traj.times[entry];
      for (std::size_t k = entry; k < traj.states.size(); ++k)
        if (!contains_scaled(relaxed, as_point(traj.states[k]), config.tolerance)) {
          ev.ok = false;
          record_failure(rep, i, traj.times[k], traj.states[k], "state leaves the target polygon after entering it");
          break;
        }
      if (entry > tail_begin(traj, config.tail_fraction)) {
        ev.ok = false;
        record_failure(rep, i, traj.times[entry], traj.states[entry], "target polygon entered only in the tail");
      }
    }
    ev.phi_tail_min = inf;
    auto tb = tail_begin(traj, config.tail_fraction);
    auto idx = spread(traj.states.size() - tb, config.phi_samples);
    for (std::size_t k : idx) ev.phi_tail_min = std::min(ev.phi_tail_min, phi_clamped(fam, as_point(traj.states[tb + k])));
    all = all && ev.ok;
  }
  for (int k = 0; k < 2; ++k)
    if (!(rep.tail_box.lo[k] >= rep.fixed_box.lo[k] && rep.tail_box.hi[k] <= rep.fixed_box.hi[k]) ||
        !(rep.tail_box.lo[k] > 0))
      all = false;
  if (horizon_short) rep.notes.push_back("horizon too short: some trajectory is still outside the target polygon");
  rep.verdict = all ? Verdict::pass : Verdict::fail;
  return rep;
}

CertificationReport check_tail_box(const ReactionNetwork& net, const std::vector<State>& starts,
                                   const std::vector<RateSchedule>& schedules, const VerifyConfig& config) {
  auto rep = start_report(Claim::permanence, nullptr, config);
  const std::size_t dim = net.species_count();
  if (!schedules.empty()) rep.eta = schedules.front().eta();
  auto runs = simulate_ensemble(net, starts, schedules, config.integrator);
  rep.tail_box = empty_box(dim);
  rep.trajectories.resize(runs.size());
  bool all = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto& ev = rep.trajectories[i];
    ev.c0 = runs[i].states.front();
    fill_extremes(ev, runs[i], config.tail_fraction);
    absorb(rep.tail_box, {ev.tail_min, ev.tail_max});
    ev.ok = true;
    for (std::size_t k = 0; k < dim; ++k)
      if (!(ev.tail_min[k] > 0) || !std::isfinite(ev.tail_max[k])) ev.ok = false;
    if (!ev.ok) record_failure(rep, i, runs[i].times.back(), runs[i].final_state(), "tail touches the boundary");
    all = all && ev.ok;
  }
  // The reported fixed box widens the common tail box by a factor of two on each side.
  rep.fixed_box = rep.tail_box;
  for (std::size_t k = 0; k < dim; ++k) {
    rep.fixed_box.lo[k] *= 0.5;
    rep.fixed_box.hi[k] *= 2.0;
  }
  if (all)
    for (std::size_t i = 0; i < runs.size(); ++i)
      for (std::size_t k = 0; k < dim; ++k)
        if (rep.trajectories[i].tail_min[k] < rep.fixed_box.lo[k] || rep.trajectories[i].tail_max[k] > rep.fixed_box.hi[k])
          all = false;
  rep.verdict = all && !runs.empty() ? Verdict::pass : Verdict::fail;
  return rep;
}

std::vector<std::size_t> southwest_sides(const Polygon& poly) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point n = poly.inward_normal(i);
    if (n[0] >= -1e-12 && n[1] >= -1e-12) out.push_back(i);
  }
  return out;
}

CertificationReport check_bounded_persistence(const ReactionNetwork& net, const Trajectory& traj, double eta,
                                              const VerifyConfig& config) {
  auto rep = start_report(Claim::lower_endotactic_persistence, nullptr, config);
  rep.eta = eta;
  if (net.species_count() != 2) throw DimensionError("bounded persistence check needs 2 species");
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  if (!is_lower_endotactic(net).lower_endotactic) {
    rep.verdict = Verdict::inapplicable;
    rep.notes.push_back("network is not lower-endotactic");
    return rep;
  }
  for (int k = 0; k < 2; ++k)
    if (!std::isfinite(traj.max_state[k])) {
      rep.verdict = Verdict::inapplicable;
      rep.notes.push_back("trajectory is not bounded");
      return rep;
    }
  TrajectoryEvidence ev;
  ev.c0 = traj.states.front();
  fill_extremes(ev, traj, config.tail_fraction);
  rep.tail_box = {ev.tail_min, ev.tail_max};

  const double top = 2.0 * std::max({traj.max_state[0], traj.max_state[1], 1.0});
  const SlopeSet slopes = slope_set(net);
  double alpha = 0.1 * std::min({traj.min_state[0], traj.min_state[1], 1.0});
  std::optional<Polygon> chain;
  for (int it = 0; it < 300 && alpha > 1e-280; ++it, alpha *= 0.1) {
    auto poly = build_polygon(slopes, alpha);
    if (!poly || !is_convex(*poly)) continue;
    Polygon clipped = clip_halfplane(clip_halfplane(*poly, {-1, 0}, -top), {0, -1}, -top);
    auto sides = southwest_sides(clipped);
    bool below = true;
    for (const auto& s : traj.states)
      if (!contains_scaled(clipped, as_point(s), 0.0)) {
        below = false;
        break;
      }
    if (!below) continue;
    auto audit = subtangentiality_audit(net, eta, clipped, sides, 2000);
    if (!audit.pass) continue;
    rep.worst_subtangentiality = audit.min_value;
    rep.alpha0 = alpha;
    chain = clipped;
    break;
  }
  if (!chain) {
    rep.verdict = Verdict::fail;
    rep.notes.push_back("no audited south-west chain below the trajectory");
    return rep;
  }
  Box b = polygon_box(*chain);
  rep.fixed_box = b;
  rep.threshold = std::min(b.lo[0], b.lo[1]);
  ev.ok = ev.tail_min[0] > b.lo[0] && ev.tail_min[1] > b.lo[1] && b.lo[0] > 0 && b.lo[1] > 0;
  if (!ev.ok) rep.counterexample = Counterexample{0, traj.times.back(), traj.final_state(), "tail falls below the chain"};
  rep.trajectories.push_back(ev);
  rep.verdict = ev.ok ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace crn
