#include "crn/report.hpp"

#include <cmath>
#include <iomanip>

namespace crn {

namespace {

Json vec2(const Vec2& v) { return Json::array({format_rational(v[0]), format_rational(v[1])}); }

Json exact(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(format_rational(q));
  return a;
}

Json point(const Point& p) { return Json::array({p[0], p[1]}); }

Json state(const State& s) { return Json(s); }

Json box(const Box& b) { return {{"lo", state(b.lo)}, {"hi", state(b.hi)}}; }

std::string side_kind(SideKind k) {
  switch (k) {
    case SideKind::sloped: return "sloped";
    case SideKind::horizontal: return "horizontal";
    case SideKind::vertical: return "vertical";
    case SideKind::closure: return "closure";
  }
  return "?";
}

std::string corner_name(Corner c) {
  switch (c) {
    case Corner::sw: return "sw";
    case Corner::se: return "se";
    case Corner::ne: return "ne";
    case Corner::nw: return "nw";
  }
  return "?";
}

Json support(const SupportLine& s) {
  return {{"normal", vec2(s.normal)}, {"offset", format_rational(s.offset)}, {"point", vec2(s.point)}};
}

}  // namespace

Json to_json(const ReactionNetwork& net) {
  Json rx = Json::array();
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& reaction = net.reactions()[r];
    rx.push_back({{"label", net.reaction_label(r)},
                  {"source", exact(reaction.source)},
                  {"target", exact(reaction.target)}});
  }
  return {{"species", net.species()},
          {"mode", net.mode() == NetworkMode::chemical ? "chemical" : "generalized"},
          {"reactions", rx}};
}

Json to_json(const ReactionNetwork& net, const StructureReport& rep) {
  Json classes = Json::array();
  for (const auto& cls : rep.linkage_classes) {
    Json c = Json::array();
    for (auto i : cls) c.push_back(net.complex_label(net.complexes()[i]));
    classes.push_back(c);
  }
  Json complexes = Json::array();
  for (const auto& c : net.complexes()) complexes.push_back(net.complex_label(c));
  return {{"complexes", complexes},
          {"num_complexes", rep.num_complexes},
          {"linkage_classes", classes},
          {"num_linkage_classes", rep.linkage_classes.size()},
          {"reversible", rep.reversible},
          {"weakly_reversible", rep.weakly_reversible},
          {"stoichiometric_rank", rep.stoich_rank},
          {"deficiency", rep.deficiency}};
}

Json to_json(const ReactionNetwork& net, const SweepVerdict& v) {
  Json tested = Json::array();
  for (const auto& t : v.tested_vectors) tested.push_back(vec2(t));
  Json wit = Json::array();
  for (const auto& w : v.witnesses)
    wit.push_back({{"vector", vec2(w.vector)},
                   {"reaction", net.reaction_label(w.reaction)},
                   {"support", support(w.support)}});
  return {{"endotactic", v.endotactic},
          {"lower_endotactic", v.lower_endotactic},
          {"degenerate", v.degenerate},
          {"tested_vectors", tested},
          {"witnesses", wit}};
}

Json to_json(const SlopeSet& s) {
  Json r = Json::array(), sn = Json::array();
  for (const auto& q : s.r) r.push_back(format_rational(q));
  for (const auto& q : s.s) sn.push_back(format_rational(q));
  return {{"r", r}, {"s", sn}, {"r_frac", s.r_frac}, {"s_frac", s.s_frac}};
}

Json to_json(const Polygon& poly) {
  Json v = Json::array();
  for (std::size_t i = 0; i < poly.size(); ++i)
    v.push_back({{"label", poly.labels[i]},
                 {"x", poly.vertices[i][0]},
                 {"y", poly.vertices[i][1]},
                 {"corner", corner_name(poly.corners[i])},
                 {"side", side_kind(poly.sides[i].kind)}});
  return {{"vertices", v}};
}

Json to_json(const PolygonFamily& f) {
  return {{"eta", f.eta},
          {"delta", f.delta},
          {"delta_prime", f.delta_prime},
          {"xi", f.xi},
          {"M", f.M},
          {"alpha0", f.alpha_max},
          {"alpha_min", f.alpha_min},
          {"alpha_cap", f.alpha_cap},
          {"c0", point(f.c0)},
          {"slopes", to_json(f.slopes)},
          {"search_iterations", f.search_iterations},
          {"corners_placed", f.corners_placed},
          {"pstar_holds", f.pstar_holds}};
}

Json to_json(const ConditionAudit& a) {
  return {{"p1", a.p1}, {"p2", a.p2}, {"p3", a.p3}, {"p4", a.p4}, {"p5", a.p5}, {"ok", a.ok()}, {"failures", a.failures}};
}

Json to_json(const PStarAudit& a) { return {{"ok", a.ok}, {"failures", a.failures}}; }

Json to_json(const SubtangentialityReport& r) {
  return {{"min_value", r.min_value},
          {"worst_point", point(r.worst_point)},
          {"worst_normal", point(r.worst_normal)},
          {"points_checked", r.points_checked},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

Json to_json(const IntegratorConfig& c) {
  return {{"method", "dormand-prince-5(4)"},
          {"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"horizon", c.horizon},
          {"max_step", std::isfinite(c.max_step) ? Json(c.max_step) : Json(nullptr)},
          {"record_stride", c.record_stride},
          {"initial_step", c.initial_step},
          {"fixed_step", c.fixed_step}};
}

Json to_json(const StepDiagnostics& d) {
  return {{"accepted", d.accepted},
          {"rejected", d.rejected},
          {"positivity_rejections", d.positivity_rejections},
          {"max_error_estimate", d.max_error_estimate},
          {"min_step", d.min_step}};
}

Json to_json(const CertificationReport& rep) {
  Json trajs = Json::array();
  for (const auto& ev : rep.trajectories) {
    Json t = {{"c0", state(ev.c0)},
              {"min", state(ev.min_state)},
              {"max", state(ev.max_state)},
              {"tail_min", state(ev.tail_min)},
              {"tail_max", state(ev.tail_max)},
              {"ok", ev.ok}};
    if (rep.claim == Claim::containment || rep.claim == Claim::permanence) {
      t["level"] = ev.level;
      t["phi"] = {{"start", ev.phi_start}, {"end", ev.phi_end}, {"min", ev.phi_tail_min}};
      t["reach_time"] = ev.reach_time;
    }
    if (rep.claim == Claim::global_attractor) t["final_distance"] = ev.final_distance;
    trajs.push_back(t);
  }
  Json j = {{"claim", to_string(rep.claim)},
            {"verdict", to_string(rep.verdict)},
            {"eta", rep.eta},
            {"alpha0", rep.alpha0},
            {"worst_subtangentiality", rep.worst_subtangentiality}};
  if (!rep.tail_box.lo.empty()) j["tail_box"] = box(rep.tail_box);
  if (!rep.fixed_box.lo.empty()) j["fixed_box"] = box(rep.fixed_box);
  if (rep.claim == Claim::lower_endotactic_persistence) j["threshold"] = rep.threshold;
  if (rep.counterexample)
    j["counterexample"] = {{"trajectory", rep.counterexample->trajectory},
                           {"time", rep.counterexample->time},
                           {"state", state(rep.counterexample->state)},
                           {"reason", rep.counterexample->reason}};
  else
    j["counterexample"] = nullptr;
  j["config"] = {{"seed", rep.config.seed},
                 {"tolerance", rep.config.tolerance},
                 {"tail_fraction", rep.config.tail_fraction},
                 {"integrator", to_json(rep.config.integrator)}};
  j["notes"] = rep.notes;
  j["trajectories"] = trajs;
  return j;
}

Json to_json(const GacConstruction& k) {
  Json planes = Json::array();
  for (const auto& pc : k.planes)
    planes.push_back({{"plane", to_string(pc.plane)},
                      {"network", to_json(pc.network)},
                      {"family", to_json(pc.family)},
                      {"alpha", pc.alpha},
                      {"polygon", to_json(pc.polygon)},
                      {"subtangentiality", pc.subtangentiality},
                      {"square_included", pc.square_included}});
  return {{"epsilon", k.epsilon}, {"kappa_min", k.kappa_min}, {"s_max", k.s_max},
          {"eta", k.eta},         {"d", k.d},                 {"planes", planes}};
}

Json to_json(const GacReport& rep) {
  Json eq = Json::array();
  for (const auto& e : rep.equilibria)
    eq.push_back({{"state", state(e.state)}, {"residual", e.residual}, {"newton_iterations", e.newton_iterations}});
  return {{"certification", to_json(rep.certification)},
          {"construction", to_json(rep.construction)},
          {"equilibria", eq},
          {"max_complex_balance_residual", rep.max_complex_balance_residual},
          {"min_coordinate_sum", rep.min_coordinate_sum}};
}

void write_trajectory_csv(std::ostream& out, const ReactionNetwork& net, const Trajectory& traj) {
  out << "t";
  for (const auto& s : net.species()) out << ',' << s;
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (double x : traj.states[k]) out << ',' << x;
    out << '\n';
  }
}

void write_polygon_csv(std::ostream& out, const Polygon& poly) {
  out << "label,x,y\n" << std::setprecision(17);
  for (std::size_t i = 0; i < poly.size(); ++i)
    out << poly.labels[i] << ',' << poly.vertices[i][0] << ',' << poly.vertices[i][1] << '\n';
}

}  // namespace crn
