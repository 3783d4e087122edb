#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "crn/endo.hpp"
#include "crn/gac3.hpp"
#include "crn/graph.hpp"
#include "crn/polygon.hpp"
#include "crn/report.hpp"
#include "crn/svg.hpp"
#include "crn/verify.hpp"

namespace crn::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  double eta = 0.5;
  std::uint64_t seed = 1;
  double horizon = 100;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t ensemble = 20;
  std::string schedule = "piecewise";
  std::string out_dir;
  std::string format = "json";
  double alpha = 0;
  std::vector<double> c0;
  double record_stride = 0;
  std::string claim = "permanence";
  double start_lo = 1e-2;
  double start_hi = 1e2;
  std::vector<double> kappas;
  std::string csv;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScheduleKind schedule_kind(const std::string& name) {
  if (name == "constant") return ScheduleKind::constant;
  if (name == "piecewise") return ScheduleKind::piecewise;
  if (name == "sin") return ScheduleKind::sinusoidal;
  throw InputError("unknown schedule " + name);
}

IntegratorConfig integrator(const Options& o) {
  IntegratorConfig c;
  c.horizon = o.horizon;
  c.rel_tol = o.rel_tol;
  c.abs_tol = o.abs_tol;
  c.record_stride = o.record_stride;
  return c;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json manifest(const std::string& sub, const Options& o, const Json& config) {
  return {{"subcommand", sub},
          {"input", std::filesystem::path(o.file).filename().string()},
          {"input_hash", "fnv1a64:" + hex64(fnv1a(read_file(o.file)))},
          {"seed", o.seed},
          {"config", config},
          {"version", version}};
}

// Writes to out-dir/name when an output directory is set, otherwise to out.
void emit(const Options& o, const std::string& name, const std::string& text, std::ostream& out) {
  if (o.out_dir.empty()) {
    out << text;
    return;
  }
  std::filesystem::create_directories(o.out_dir);
  std::ofstream f(std::filesystem::path(o.out_dir) / name, std::ios::binary);
  if (!f) throw InputError("cannot write " + name);
  f << text;
}

void emit_manifest(const Options& o, const Json& m) {
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream(std::filesystem::path(o.out_dir) / "manifest.json") << m.dump(2) << '\n';
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_analyze(const Options& o, std::ostream& out) {
  auto net = load_network(o.file);
  Json j = {{"manifest", manifest("analyze", o, Json::object())},
            {"network", to_json(net)},
            {"structure", to_json(net, analyze_structure(net))}};
  emit(o, "analyze.json", dump(j), out);
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  auto net = load_network(o.file);
  Json j = {{"manifest", manifest("sweep-test", o, Json::object())}, {"verdict", to_json(net, is_endotactic(net))}};
  emit(o, "sweep.json", dump(j), out);
  return 0;
}

int cmd_polygon(const Options& o, std::ostream& out) {
  auto net = load_network(o.file);
  auto fam = build_family(net, o.eta, {1, 1});
  double alpha = o.alpha > 0 ? o.alpha : fam.alpha_max;
  auto poly = polygon_at(fam, alpha);
  Json config = {{"eta", o.eta}, {"alpha", alpha}};
  auto m = manifest("polygon", o, config);
  auto sub = subtangentiality_audit(net, fam, alpha, 10000);
  Json j = {{"manifest", m},
            {"family", to_json(fam)},
            {"alpha", alpha},
            {"polygon", to_json(poly)},
            {"audit",
             {{"conditions", to_json(audit_conditions(fam, fam.c0))},
              {"pstar", to_json(audit_pstar(fam, poly))},
              {"strictly_convex", is_strictly_convex(poly)},
              {"convex", is_convex(poly)},
              {"vertices_in_corners", vertices_in_corners(fam, poly)},
              {"subtangentiality", to_json(sub)}}}};
  std::ostringstream csv;
  write_polygon_csv(csv, poly);
  std::string svg = polygon_svg(fam, poly);
  if (!o.out_dir.empty()) {
    emit(o, "polygon.json", dump(j), out);
    emit(o, "polygon.csv", csv.str(), out);
    emit(o, "polygon.svg", svg, out);
    emit_manifest(o, m);
  } else if (o.format == "csv") {
    out << csv.str();
  } else if (o.format == "svg") {
    out << svg;
  } else {
    out << dump(j);
  }
  return sub.pass ? 0 : 1;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  auto net = load_network(o.file);
  State c0 = o.c0.empty() ? State(net.species_count(), 1.0) : State(o.c0);
  if (c0.size() != net.species_count()) throw InputError("--c0 needs one value per species");
  auto sched = RateSchedule::for_network(net, o.eta, schedule_kind(o.schedule), o.seed, o.horizon);
  auto cfg = integrator(o);
  auto traj = integrate(net, sched, c0, cfg);
  Json config = {{"eta", o.eta}, {"schedule", o.schedule}, {"c0", c0}, {"integrator", to_json(cfg)}};
  auto m = manifest("simulate", o, config);
  std::ostringstream csv;
  write_trajectory_csv(csv, net, traj);
  Json j = {{"manifest", m},
            {"diagnostics", to_json(traj.diagnostics)},
            {"final_state", traj.final_state()},
            {"min_state", traj.min_state},
            {"max_state", traj.max_state},
            {"samples", traj.times.size()}};
  std::string svg = net.species_count() == 2 ? trajectories_svg({traj}) : std::string();
  if (!o.out_dir.empty()) {
    emit(o, "trajectory.csv", csv.str(), out);
    emit(o, "simulate.json", dump(j), out);
    if (!svg.empty()) emit(o, "trajectory.svg", svg, out);
    emit_manifest(o, m);
  } else if (o.format == "json") {
    out << dump(j);
  } else if (o.format == "svg") {
    if (svg.empty()) throw InputError("phase portraits need 2 species");
    out << svg;
  } else {
    out << csv.str();
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  auto net = load_network(o.file);
  VerifyConfig cfg;
  cfg.integrator = integrator(o);
  cfg.seed = o.seed;
  cfg.schedule = schedule_kind(o.schedule);
  Json config = {{"claim", o.claim}, {"eta", o.eta}, {"ensemble", o.ensemble}, {"schedule", o.schedule},
                 {"starts", {o.start_lo, o.start_hi}}, {"integrator", to_json(cfg.integrator)}};
  auto m = manifest("verify", o, config);
  auto starts = random_starts(o.ensemble, o.start_lo, o.start_hi, o.seed, net.species_count());
  CertificationReport rep;
  if (o.claim == "lower-endotactic-persistence") {
    auto sched = RateSchedule::for_network(net, o.eta, cfg.schedule, o.seed, o.horizon);
    auto traj = integrate(net, sched, starts.front(), cfg.integrator);
    rep = check_bounded_persistence(net, traj, o.eta, cfg);
  } else if (o.claim == "containment" || o.claim == "permanence" || o.claim == "persistence") {
    try {
      auto fam = build_family(net, o.eta, {1, 1});
      auto schedules = ensemble_schedules(net, o.eta, o.ensemble, cfg);
      if (o.claim == "containment") {
        rep = check_containment(net, fam, starts, schedules, cfg);
      } else {
        rep = check_permanence(net, fam, starts, schedules, cfg);
        if (o.claim == "persistence") rep.claim = Claim::persistence;
      }
    } catch (const FamilyError& e) {
      rep.claim = o.claim == "containment" ? Claim::containment : Claim::permanence;
      rep.verdict = Verdict::inapplicable;
      rep.eta = o.eta;
      rep.config = cfg;
      rep.notes.push_back(std::string("no polygon family: ") + e.what());
    }
  } else {
    throw InputError("unknown claim " + o.claim);
  }
  Json j = to_json(rep);
  j["manifest"] = m;
  emit(o, "verify.json", dump(j), out);
  emit_manifest(o, m);
  return rep.pass() ? 0 : 1;
}

int cmd_gac3(const Options& o, std::ostream& out) {
  auto net = load_network(o.file);
  std::vector<double> kappas = o.kappas;
  if (kappas.empty()) kappas.assign(net.reaction_count(), 1.0);
  if (kappas.size() == 1) kappas.assign(net.reaction_count(), kappas.front());
  if (kappas.size() != net.reaction_count()) throw InputError("--kappa needs one value or one per reaction");
  GacConfig cfg;
  cfg.integrator = integrator(o);
  auto starts = random_starts(o.ensemble, o.start_lo, o.start_hi, o.seed, 3);
  Json config = {{"kappas", kappas}, {"ensemble", o.ensemble}, {"starts", {o.start_lo, o.start_hi}},
                 {"integrator", to_json(cfg.integrator)}};
  auto m = manifest("gac3", o, config);
  GacReport rep;
  try {
    rep = check_gac(net, kappas, starts, cfg);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  Json j = to_json(rep);
  j["manifest"] = m;
  emit(o, "gac3.json", dump(j), out);
  emit_manifest(o, m);
  if (!o.csv.empty()) {
    std::ofstream f(o.out_dir.empty() ? std::filesystem::path(o.csv) : std::filesystem::path(o.out_dir) / o.csv);
    f << "trajectory,t,distance\n" << std::setprecision(17);
    for (std::size_t i = 0; i < rep.distances.size(); ++i)
      for (std::size_t k = 0; k < rep.distances[i].size(); ++k)
        f << i << ',' << rep.distance_times[i][k] << ',' << rep.distances[i][k] << '\n';
  }
  return rep.certification.pass() ? 0 : 1;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Analysis of two- and three-species reaction networks", "crntool"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  auto file = [&](CLI::App* s) { s->add_option("file", o.file, "network file (.crn, or .gcrn for real exponents)")->required(); };
  auto eta = [&](CLI::App* s) { s->add_option("--eta", o.eta, "rate bound: rates lie in (eta, 1/eta)")->check(CLI::Range(1e-12, 0.999999)); };
  auto seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "random seed"); };
  auto integ = [&](CLI::App* s) {
    s->add_option("--horizon", o.horizon, "integration horizon")->check(CLI::PositiveNumber);
    s->add_option("--rel-tol", o.rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
    s->add_option("--abs-tol", o.abs_tol, "absolute tolerance")->check(CLI::PositiveNumber);
    s->add_option("--record-stride", o.record_stride, "minimum time between recorded samples");
  };
  auto outdir = [&](CLI::App* s) { s->add_option("--out-dir", o.out_dir, "write output files and manifest.json here"); };
  auto schedule = [&](CLI::App* s) {
    s->add_option("--schedule", o.schedule, "rate schedule")->check(CLI::IsMember({"constant", "piecewise", "sin"}));
  };
  auto starts = [&](CLI::App* s) {
    s->add_option("--ensemble", o.ensemble, "number of trajectories")->check(CLI::Range(1, 100000));
    s->add_option("--start-lo", o.start_lo, "smallest start coordinate")->check(CLI::PositiveNumber);
    s->add_option("--start-hi", o.start_hi, "largest start coordinate")->check(CLI::PositiveNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "complexes, linkage classes, reversibility, rank, deficiency");
  file(analyze);
  outdir(analyze);

  auto* sweep = app.add_subcommand("sweep-test", "endotactic and lower-endotactic classification");
  file(sweep);
  outdir(sweep);

  auto* polygon = app.add_subcommand("polygon", "invariant polygon family with audits");
  file(polygon);
  eta(polygon);
  polygon->add_option("--alpha", o.alpha, "polygon parameter (default: the certified one)");
  polygon->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "csv", "svg"}));
  outdir(polygon);

  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  file(simulate);
  eta(simulate);
  seed(simulate);
  integ(simulate);
  schedule(simulate);
  simulate->add_option("--c0", o.c0, "initial state, comma separated")->delimiter(',');
  simulate->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "csv", "svg"}));
  outdir(simulate);

  auto* verify = app.add_subcommand("verify", "certify a dynamical claim on an ensemble");
  file(verify);
  verify->add_option("--claim", o.claim, "claim to check")
      ->check(CLI::IsMember({"containment", "permanence", "persistence", "lower-endotactic-persistence"}));
  eta(verify);
  seed(verify);
  integ(verify);
  schedule(verify);
  starts(verify);
  outdir(verify);

  auto* gac = app.add_subcommand("gac3", "compact set K and convergence for a three-species network");
  file(gac);
  gac->add_option("--kappa", o.kappas, "rate constants: one value or one per reaction")->delimiter(',');
  seed(gac);
  integ(gac);
  starts(gac);
  gac->add_option("--csv", o.csv, "write distances to the equilibrium to this CSV file");
  outdir(gac);

  std::vector<std::string> argv_store{"crntool"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return cmd_analyze(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*polygon) return cmd_polygon(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*gac) return cmd_gac3(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << o.file << ": " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid network: " << e.what() << '\n';
    return 2;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const FamilyError& e) {
    err << "no polygon family: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace crn::cli
