// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "crn/gac3.hpp"
#include "crn/graph.hpp"
#include "crn/verify.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace crn;
using namespace crn::testgen;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < limit_s;
  bool pass = o.ok && in_time;
  failures += !pass;
  std::ostringstream line;
  line << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << title << " [" << std::fixed
       << std::setprecision(2) << secs << " s / limit " << limit_s << " s]";
  if (!in_time) line << " too slow;";
  if (!o.detail.empty()) line << " " << o.detail;
  std::cout << line.str() << std::endl;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << x;
  return s.str();
}

Outcome classifications() {
  auto eq31 = is_endotactic(bundled("eq31.crn"));
  auto lv = is_endotactic(bundled("lotka.crn"));
  auto ss = is_endotactic(bundled("ssystem.gcrn"));
  auto th = is_endotactic(bundled("thomas.crn"));
  bool ok = is_weakly_reversible(bundled("eq31.crn")) && eq31.endotactic && !lv.endotactic && !lv.lower_endotactic &&
            ss.endotactic && th.endotactic;
  return {ok, "eq31 " + std::string(eq31.endotactic ? "endotactic" : "not endotactic") + ", lotka " +
                  (lv.endotactic || lv.lower_endotactic ? "misclassified" : "neither") + ", ssystem " +
                  (ss.endotactic ? "endotactic" : "not endotactic") + ", thomas " +
                  (th.endotactic ? "endotactic" : "not endotactic")};
}

Outcome oracle_equivalence() {
  Rng rng(4242);
  auto dirs = brute_force_directions(1000);
  int disagree = 0, endo = 0;
  const int n = 500;
  for (int k = 0; k < n; ++k) {
    auto net = random_network(rng);
    bool oracle = oracle_endotactic(net, dirs);
    endo += oracle;
    disagree += is_endotactic(net).endotactic != oracle;
  }
  return {disagree == 0, std::to_string(n) + " networks x " + std::to_string(dirs.size()) + " directions, " +
                             std::to_string(endo) + " endotactic, " + std::to_string(disagree) + " disagreements"};
}

Outcome weakly_reversible_fuzz() {
  Rng rng(99);
  int bad = 0;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    auto net = random_weakly_reversible(rng);
    if (!is_weakly_reversible(net) || !is_endotactic(net).endotactic) ++bad;
  }
  return {bad == 0, std::to_string(n) + " weakly reversible networks, " + std::to_string(bad) + " not endotactic"};
}

Outcome polygon_audits() {
  auto net = bundled("eq31.crn");
  auto f = build_family(net, 0.5, {1, 1});
  auto top = polygon_at(f, f.alpha_max);
  bool conditions = audit_conditions(f, {1, 1}).ok();
  bool pstar = audit_pstar(f, top).ok;
  bool convex = true, nested = true;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(std::log(f.alpha_max) - 12, std::log(f.alpha_max));
  for (int k = 0; k < 100; ++k) {
    double a = std::exp(u(rng)), b = std::exp(u(rng));
    if (a > b) std::swap(a, b);
    auto outer = polygon_at(f, a), inner = polygon_at(f, b);
    convex = convex && is_convex(outer) && is_convex(inner);
    if (b > a * (1 + 1e-9))
      for (const auto& v : inner.vertices) nested = nested && strictly_contains(outer, v);
  }
  auto st = subtangentiality_audit(net, f, f.alpha_max, 10000);
  bool ok = conditions && pstar && convex && nested && st.pass && st.min_value >= -1e-9;
  return {ok, std::string("P1-P5 ") + (conditions ? "ok" : "fail") + ", (P*) " + (pstar ? "ok" : "fail") +
                  ", convex " + (convex ? "ok" : "fail") + ", nesting " + (nested ? "ok" : "fail") +
                  ", alpha0 " + fmt(f.alpha_max) + ", min inward flow " + fmt(st.min_value) + " over " +
                  std::to_string(st.points_checked) + " points"};
}

Outcome containment_permanence() {
  auto net = bundled("eq31.crn");
  auto f = build_family(net, 0.5, {1, 1});
  VerifyConfig cfg;
  cfg.integrator.horizon = 1000;
  cfg.integrator.rel_tol = 1e-8;
  cfg.integrator.abs_tol = 1e-12;
  cfg.tolerance = 1e-7;
  cfg.seed = 31;
  auto starts = random_starts(96, 1e-2, 1e2, 31);
  starts.push_back({1e3, 1e3});
  starts.push_back({1e-3, 1e-3});
  // Outside P(alpha0): these have to enter it.
  starts.push_back({1e-7, 1e-7});
  starts.push_back({1e-7, 1.0});
  auto runs = simulate_ensemble(net, starts, ensemble_schedules(net, 0.5, starts.size(), cfg), cfg.integrator);
  auto c = check_containment(net, f, runs, cfg);
  auto p = check_permanence(net, f, runs, cfg);
  double latest = 0;
  int outside = 0;
  for (const auto& t : p.trajectories) {
    latest = std::max(latest, t.reach_time);
    outside += t.reach_time > 0;
  }
  return {c.pass() && p.pass() && outside >= 2,
          std::to_string(runs.size()) + " trajectories, containment " + to_string(c.verdict) + ", permanence " +
              to_string(p.verdict) + ", " + std::to_string(outside) + " started outside P(alpha0), latest entry at t=" +
              fmt(latest)};
}

Outcome ssystem_permanence() {
  auto net = bundled("ssystem.gcrn");
  auto f = build_family(net, 0.5, {1, 1});
  VerifyConfig cfg;
  cfg.integrator.horizon = 500;
  cfg.integrator.rel_tol = 1e-8;
  cfg.integrator.abs_tol = 1e-12;
  cfg.seed = 8;
  auto starts = random_starts(50, 1e-2, 1e2, 8);
  starts[0] = {1e-2, 1e-2};
  starts[1] = {1e2, 1e2};
  starts[2] = {1e-2, 1e2};
  starts[3] = {1e2, 1e-2};
  auto rep = check_permanence(net, f, starts, ensemble_schedules(net, 0.5, starts.size(), cfg), cfg);
  const auto& fb = rep.fixed_box;
  const auto& tb = rep.tail_box;
  bool ok = rep.pass() && tb.lo[0] > 0 && tb.lo[1] > 0 && std::isfinite(tb.hi[0]) && std::isfinite(tb.hi[1]);
  return {ok, "50 trajectories, tail box [" + fmt(tb.lo[0]) + "," + fmt(tb.hi[0]) + "]x[" + fmt(tb.lo[1]) + "," +
                  fmt(tb.hi[1]) + "] inside fixed box [" + fmt(fb.lo[0]) + "," + fmt(fb.hi[0]) + "]x[" +
                  fmt(fb.lo[1]) + "," + fmt(fb.hi[1]) + "]"};
}

Outcome gac_examples() {
  std::string detail;
  bool ok = true;
  for (auto name : {"gac-a.crn", "gac-b.crn"}) {
    auto net = bundled(name);
    auto rep = analyze_structure(net);
    auto starts = random_starts(49, 1e-2, 1e2, 12, 3);
    starts.push_back({1e-4, 1e-4, 1});
    std::vector<double> kappas(net.reaction_count(), 1.0);
    GacConfig cfg;
    cfg.integrator.horizon = 200;
    auto g = check_gac(net, kappas, starts, cfg);
    bool here = rep.deficiency == 0 && rep.weakly_reversible && g.certification.pass() &&
                g.min_coordinate_sum > 3 * g.construction.epsilon;
    double worst = 0;
    for (const auto& d : g.distances) worst = std::max(worst, d.back());
    ok = ok && here;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": deficiency " + std::to_string(rep.deficiency) +
              (rep.weakly_reversible ? ", weakly reversible" : ", not weakly reversible") + ", epsilon " +
              fmt(g.construction.epsilon) + ", " + to_string(g.certification.verdict) + ", worst final distance " +
              fmt(worst) + ", min x+y+z " + fmt(g.min_coordinate_sum);
  }
  return {ok, detail};
}

Outcome integrator_validation() {
  auto decay = parse_network("A -> 0");
  auto err = [&](double h) {
    IntegratorConfig c;
    c.fixed_step = h;
    c.horizon = 1;
    auto tr = integrate(decay, RateSchedule::constant(1, 0.5, 1.0), {1.0}, c);
    return std::abs(tr.final_state()[0] - std::exp(-1.0));
  };
  double order = std::log2(err(0.05) / err(0.025));

  IntegratorConfig lc;
  lc.rel_tol = 1e-11;
  lc.abs_tol = 1e-13;
  lc.horizon = 12;
  auto lv = integrate(bundled("lotka.crn"), RateSchedule::constant(3, 0.5, 1.0), {0.5, 0.5}, lc);
  auto h = [](const State& c) { return c[0] + c[1] - std::log(c[0]) - std::log(c[1]); };
  double drift = 0;
  for (const auto& s : lv.states) drift = std::max(drift, std::abs(h(s) - h(lv.states.front())));

  // Two conservation laws: x + y for figure1, and A + B + C for a closed chain.
  double confine = 0;
  IntegratorConfig cc;
  cc.horizon = 50;
  auto fig = bundled("figure1.crn");
  auto t1 = integrate(fig, RateSchedule::for_network(fig, 0.5, ScheduleKind::piecewise, 2, 50), {0.3, 2.0}, cc);
  for (const auto& s : t1.states) confine = std::max(confine, std::abs(s[0] + s[1] - 2.3) / std::sqrt(2.0));
  auto chain = parse_network("A <-> B\nB + C <-> 2A\nC <-> A");
  auto t2 = integrate(chain, RateSchedule::for_network(chain, 0.5, ScheduleKind::sinusoidal, 2, 50), {1, 0.2, 3}, cc);
  for (const auto& s : t2.states)
    confine = std::max(confine, std::abs(s[0] + s[1] + s[2] - 4.2) / std::sqrt(3.0));

  bool ok = std::abs(order - 5) < 0.2 && drift < 1e-6 && confine < 1e-7;
  return {ok, "order " + fmt(order) + " (nominal 5), first-integral drift " + fmt(drift) +
                  ", class residual " + fmt(confine)};
}

Outcome determinism() {
  auto once = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = crn::cli::run(args, out, err);
    return std::to_string(code) + out.str();
  };
  std::vector<std::vector<std::string>> cmds{
      {"verify", "--claim", "permanence", network_path("eq31.crn"), "--eta", "0.5", "--seed", "7"},
      {"simulate", network_path("eq31.crn"), "--c0", "0.5,2", "--seed", "3", "--format", "csv"},
      {"gac3", network_path("gac-b.crn"), "--seed", "5"},
      {"polygon", network_path("ssystem.gcrn"), "--format", "svg"}};
  int differ = 0;
  for (const auto& c : cmds) differ += once(c) != once(c);
  int trips = 0, bad = 0;
  for (auto name : {"eq31.crn", "lotka.crn", "thomas.crn", "ssystem.gcrn", "gac-a.crn", "gac-b.crn", "figure1.crn"}) {
    auto net = bundled(name);
    auto text = format_network(net);
    auto back = parse_network(text, net.mode());
    ++trips;
    bad += !(equivalent(net, back) && format_network(back) == text);
  }
  return {differ == 0 && bad == 0, std::to_string(cmds.size()) + " repeated CLI runs, " + std::to_string(differ) +
                                       " differ; " + std::to_string(trips) + " round-trips, " +
                                       std::to_string(bad) + " broken"};
}

}  // namespace

int main() {
  criterion(1, "endotactic classification of the bundled networks", 1, classifications);
  criterion(2, "finite test vectors match a brute-force sweep", 30, oracle_equivalence);
  criterion(3, "weakly reversible networks are endotactic", 30, weakly_reversible_fuzz);
  criterion(4, "polygon family audits for eq31", 10, polygon_audits);
  criterion(5, "eq31 containment and permanence", 60, containment_permanence);
  criterion(6, "S-system permanence", 60, ssystem_permanence);
  criterion(7, "three-species global attractor examples", 120, gac_examples);
  criterion(8, "integrator validation", 60, integrator_validation);
  criterion(9, "determinism and round-trip", 60, determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
