#include "crn/gac3.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "crn/endo.hpp"
#include "crn/graph.hpp"

namespace crn {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double inf_norm(const State& c) {
  double m = 0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

Point project_point(const State& c, Plane plane) {
  auto ax = plane_axes(plane);
  return {c[ax[0]], c[ax[1]]};
}

void require_gac_input(const ReactionNetwork& net) {
  if (net.species_count() != 3) throw std::invalid_argument("network must have exactly 3 species");
  if (!is_weakly_reversible(net)) throw std::invalid_argument("network is not weakly reversible");
}

// Orthonormal basis of the stoichiometric subspace, one column per direction.
Eigen::MatrixXd subspace_basis(const ReactionNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.species_count());
  Eigen::MatrixXd N(n, static_cast<Eigen::Index>(net.reaction_count()));
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    auto v = to_doubles(net.reactions()[r].vector());
    for (Eigen::Index k = 0; k < n; ++k) N(k, static_cast<Eigen::Index>(r)) = v[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(N, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-10 * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

State field(const MassActionSystem& sys, const std::vector<double>& kappas, const State& c) {
  State out;
  sys.rhs(kappas, c, out);
  return out;
}

Equilibrium polish(const ReactionNetwork& net, const std::vector<double>& kappas, const State& c0, const State& guess) {
  MassActionSystem sys(net);
  const auto n = static_cast<Eigen::Index>(net.species_count());
  Eigen::MatrixXd B = subspace_basis(net);
  Eigen::Map<const Eigen::VectorXd> a(c0.data(), n), g(guess.data(), n);
  // Start from the guess moved back into c0 + S.
  Eigen::VectorXd c = a + B * (B.transpose() * (g - a));
  auto to_state = [&](const Eigen::VectorXd& v) { return State(v.data(), v.data() + n); };
  auto residual = [&](const Eigen::VectorXd& v) { return inf_norm(field(sys, kappas, to_state(v))); };

  Equilibrium eq;
  for (Eigen::Index k = 0; k < n; ++k)
    if (!(c(k) > 0)) c(k) = std::max(guess[k], 1e-300);
  double res = residual(c);
  int it = 0;
  for (; it < 100 && res >= 1e-13; ++it) {
    State s = to_state(c);
    State f = field(sys, kappas, s);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < net.reaction_count(); ++r) {
      auto p = to_doubles(net.reactions()[r].source);
      auto v = to_doubles(net.reactions()[r].vector());
      double m = kappas[r] * sys.monomial(r, s);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (p[j] == 0) continue;
        double dm = m * p[j] / s[j];
        for (Eigen::Index i = 0; i < n; ++i) J(i, j) += v[i] * dm;
      }
    }
    Eigen::MatrixXd Jr = B.transpose() * J * B;
    Eigen::VectorXd Fr = B.transpose() * Eigen::Map<Eigen::VectorXd>(f.data(), n);
    Eigen::VectorXd du = Jr.fullPivLu().solve(-Fr);
    double lambda = 1.0;
    bool moved = false;
    for (int h = 0; h < 60; ++h, lambda *= 0.5) {
      Eigen::VectorXd trial = c + lambda * (B * du);
      if ((trial.array() <= 0).any()) continue;
      double rt = residual(trial);
      if (rt < res) {
        c = trial;
        res = rt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  eq.state = to_state(c);
  eq.residual = res;
  eq.newton_iterations = it;
  if (!(res < 1e-10)) throw std::runtime_error("equilibrium search did not converge, residual " + std::to_string(res));
  return eq;
}

}  // namespace

std::string to_string(Plane p) {
  switch (p) {
    case Plane::xy: return "xy";
    case Plane::yz: return "yz";
    case Plane::zx: return "zx";
  }
  return "?";
}

std::array<std::size_t, 2> plane_axes(Plane p) {
  switch (p) {
    case Plane::xy: return {0, 1};
    case Plane::yz: return {1, 2};
    case Plane::zx: return {2, 0};
  }
  return {0, 1};
}

ReactionNetwork project_network(const ReactionNetwork& net, Plane plane) {
  if (net.species_count() != 3) throw DimensionError("projection needs a 3-species network");
  auto ax = plane_axes(plane);
  auto drop = [&](const Complex& c) { return Complex{c[ax[0]], c[ax[1]]}; };
  std::vector<Reaction> out;
  for (const auto& rx : net.reactions()) {
    Reaction p{drop(rx.source), drop(rx.target), std::nullopt};
    if (p.source == p.target) continue;
    if (std::find(out.begin(), out.end(), p) != out.end()) continue;
    out.push_back(std::move(p));
  }
  return ReactionNetwork({net.species()[ax[0]], net.species()[ax[1]]}, std::move(out), net.mode());
}

int max_coefficient(const ReactionNetwork& net) {
  Rational m = 0;
  for (const auto& c : net.complexes())
    for (const auto& q : c) m = std::max(m, q);
  return static_cast<int>(std::ceil(to_double(m)));
}

double eta_for(const ReactionNetwork& net, const std::vector<double>& kappas, double epsilon) {
  if (kappas.size() != net.reaction_count()) throw std::invalid_argument("one rate constant per reaction is required");
  double kmin = inf;
  for (double k : kappas) {
    if (!(k > 0)) throw std::invalid_argument("rate constants must be positive");
    kmin = std::min({kmin, k, 1.0 / k});
  }
  return kmin * std::pow(epsilon, max_coefficient(net));
}

bool GacConstruction::contains(const State& c, double tol) const {
  double slack = tol * std::max(1.0, inf_norm(c));
  for (double x : c)
    if (x < -slack || x > 1.0 / epsilon + slack) return false;
  for (const auto& pc : planes)
    if (!crn::contains(pc.polygon, project_point(c, pc.plane), slack)) return false;
  return true;
}

double epsilon_from_trajectories(const std::vector<Trajectory>& trajs) {
  double min_sum = inf, max_coord = 0;
  for (const auto& t : trajs)
    for (const auto& s : t.states) {
      double sum = 0;
      for (double x : s) {
        sum += x;
        max_coord = std::max(max_coord, x);
      }
      min_sum = std::min(min_sum, sum);
    }
  if (!(min_sum < inf) || !(max_coord > 0)) throw std::invalid_argument("no recorded states");
  return 0.5 * std::min({min_sum / 3.0, 1.0 / max_coord, 1.0});
}

GacConstruction build_K(const ReactionNetwork& net, const std::vector<double>& kappas, double epsilon,
                        const std::vector<State>& starts) {
  require_gac_input(net);
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  GacConstruction K;
  K.epsilon = epsilon;
  K.s_max = max_coefficient(net);
  K.kappa_min = eta_for(net, kappas, 1.0);
  K.eta = eta_for(net, kappas, epsilon);
  for (const auto& s : starts)
    for (double x : s)
      if (!(x > 0) || x > 1.0 / epsilon) throw std::invalid_argument("start lies outside the box (0, 1/epsilon]^3");

  for (Plane plane : {Plane::xy, Plane::yz, Plane::zx}) {
    auto proj = project_network(net, plane);
    if (!is_endotactic(proj).endotactic)
      throw std::logic_error("projection of a weakly reversible network is not endotactic");
    Point center{0, 0};
    for (const auto& s : starts) {
      Point p = project_point(s, plane);
      center[0] += std::log(p[0]) / double(starts.size());
      center[1] += std::log(p[1]) / double(starts.size());
    }
    Point c0 = starts.empty() ? Point{1, 1} : Point{std::exp(center[0]), std::exp(center[1])};
    PlanarConstraint pc{plane, proj, build_family(proj, K.eta, c0), 0, {}, 0, false};
    pc.square_included = pc.family.xi <= epsilon && pc.family.M >= 1.0 / epsilon;
    K.planes.push_back(std::move(pc));
  }

  // Lower every plane's level together until the clipped polygons hold all starts and pass
  // their audits.
  for (int k = 0; k < 300; ++k) {
    const double scale = std::pow(0.1, k);
    std::vector<Polygon> raw;
    bool placed = true;
    for (const auto& pc : K.planes) {
      double a = pc.family.alpha_max * scale;
      auto poly = build_polygon(pc.family.slopes, a);
      if (!(a > 1e-280) || !poly) {
        placed = false;
        break;
      }
      raw.push_back(*poly);
    }
    if (!placed) break;
    // d is the farthest of the vertical and horizontal south-west sides from the axes.
    double d = 0;
    for (const auto& poly : raw) {
      double left = inf, bottom = inf;
      for (const auto& v : poly.vertices) {
        left = std::min(left, v[0]);
        bottom = std::min(bottom, v[1]);
      }
      d = std::max({d, left, bottom});
    }
    bool ok = true;
    std::vector<Polygon> clipped;
    std::vector<double> audits;
    for (std::size_t i = 0; i < raw.size() && ok; ++i) {
      Polygon p = clip_halfplane(clip_halfplane(raw[i], {1, 0}, d), {0, 1}, d);
      if (p.size() < 3 || !is_convex(p)) {
        ok = false;
        break;
      }
      for (const auto& s : starts)
        if (!crn::contains(p, project_point(s, K.planes[i].plane))) ok = false;
      if (!ok) break;
      auto audit = subtangentiality_audit(K.planes[i].network, K.eta, p, 2000);
      if (!audit.pass) ok = false;
      audits.push_back(audit.min_value);
      clipped.push_back(std::move(p));
    }
    if (!ok) continue;
    K.d = d;
    for (std::size_t i = 0; i < K.planes.size(); ++i) {
      K.planes[i].alpha = K.planes[i].family.alpha_max * scale;
      K.planes[i].polygon = std::move(clipped[i]);
      K.planes[i].subtangentiality = audits[i];
    }
    return K;
  }
  throw FamilyError("no audited clipped polygons contain the starts");
}

std::vector<double> complex_balance_residual(const ReactionNetwork& net, const std::vector<double>& kappas,
                                             const State& c) {
  for (double x : c)
    if (!(x > 0)) throw std::invalid_argument("state must be strictly positive");
  MassActionSystem sys(net);
  std::vector<double> res(net.complexes().size(), 0.0);
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    double flow = kappas[r] * sys.monomial(r, c);
    res[net.target_index(r)] += flow;
    res[net.source_index(r)] -= flow;
  }
  return res;
}

Equilibrium find_equilibrium(const ReactionNetwork& net, const std::vector<double>& kappas, const State& c0,
                             double horizon) {
  IntegratorConfig cfg;
  cfg.horizon = horizon;
  cfg.record_stride = horizon;
  auto traj = integrate(net, RateSchedule::fixed(kappas), c0, cfg);
  return polish(net, kappas, c0, traj.final_state());
}

GacReport check_gac(const ReactionNetwork& net, const std::vector<double>& kappas, const std::vector<State>& starts,
                    const GacConfig& config) {
  require_gac_input(net);
  GacReport out;
  auto& rep = out.certification;
  rep.claim = Claim::global_attractor;
  rep.config.integrator = config.integrator;
  rep.config.tolerance = config.tolerance;
  rep.config.tail_fraction = config.monotone_fraction;

  const auto schedule = RateSchedule::fixed(kappas);
  std::vector<Trajectory> trajs(starts.size());
  std::vector<std::string> errors(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    try {
      trajs[i] = integrate(net, schedule, starts[i], config.integrator);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (!errors[i].empty()) {
      rep.verdict = Verdict::fail;
      rep.counterexample = Counterexample{i, 0, starts[i], errors[i]};
      return out;
    }

  out.construction = build_K(net, kappas, epsilon_from_trajectories(trajs), starts);
  rep.eta = out.construction.eta;
  rep.worst_subtangentiality = inf;
  for (const auto& pc : out.construction.planes)
    rep.worst_subtangentiality = std::min(rep.worst_subtangentiality, pc.subtangentiality);

  out.min_coordinate_sum = inf;
  out.equilibria.resize(starts.size());
  out.distances.resize(starts.size());
  out.distance_times.resize(starts.size());
  rep.trajectories.resize(starts.size());
  bool all = true;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto& traj = trajs[i];
    auto& ev = rep.trajectories[i];
    ev.c0 = starts[i];
    ev.min_state = traj.min_state;
    ev.max_state = traj.max_state;
    Box tail = omega_limit_estimate(traj, config.monotone_fraction);
    ev.tail_min = tail.lo;
    ev.tail_max = tail.hi;
    ev.ok = true;
    auto fail = [&](double t, const State& s, const std::string& why) {
      if (ev.ok && (!rep.counterexample || rep.counterexample->trajectory > i))
        rep.counterexample = Counterexample{i, t, s, why};
      ev.ok = false;
    };
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      double sum = 0;
      for (double x : traj.states[k]) sum += x;
      out.min_coordinate_sum = std::min(out.min_coordinate_sum, sum);
      if (ev.ok && !out.construction.contains(traj.states[k], config.tolerance))
        fail(traj.times[k], traj.states[k], "state leaves K");
    }
    try {
      out.equilibria[i] = polish(net, kappas, starts[i], traj.final_state());
    } catch (const std::exception& e) {
      fail(traj.times.back(), traj.final_state(), e.what());
      all = false;
      continue;
    }
    const State& eq = out.equilibria[i].state;
    auto cb = complex_balance_residual(net, kappas, eq);
    for (double r : cb) out.max_complex_balance_residual = std::max(out.max_complex_balance_residual, std::abs(r));
    auto& dist = out.distances[i];
    auto& times = out.distance_times[i];
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      double s = 0;
      for (std::size_t j = 0; j < eq.size(); ++j) s += (traj.states[k][j] - eq[j]) * (traj.states[k][j] - eq[j]);
      dist.push_back(std::sqrt(s));
      times.push_back(traj.times[k]);
    }
    ev.final_distance = dist.back();
    if (!(ev.final_distance < config.target_distance))
      fail(traj.times.back(), traj.final_state(), "distance to the equilibrium stays above the target");
    // Increases below the integrator's resolution are ignored.
    const double jitter = 10 * config.integrator.rel_tol * std::max(1.0, inf_norm(eq)) + config.integrator.abs_tol;
    double t0 = traj.times.back() - config.monotone_fraction * (traj.times.back() - traj.times.front());
    for (std::size_t k = 1; k < dist.size(); ++k)
      if (traj.times[k - 1] >= t0 && dist[k] > dist[k - 1] + jitter) {
        fail(traj.times[k], traj.states[k], "distance to the equilibrium increases in the final part of the run");
        break;
      }
    all = all && ev.ok;
  }
  rep.verdict = all ? Verdict::pass : Verdict::fail;
  return out;
}

}  // namespace crn
