#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "crn/gac3.hpp"
#include "crn/graph.hpp"
#include "support.hpp"

using namespace crn;

namespace {

std::vector<double> ones(const ReactionNetwork& net) { return std::vector<double>(net.reaction_count(), 1.0); }

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("planes") {
  CHECK(plane_axes(Plane::xy) == std::array<std::size_t, 2>{0, 1});
  CHECK(plane_axes(Plane::yz) == std::array<std::size_t, 2>{1, 2});
  CHECK(plane_axes(Plane::zx) == std::array<std::size_t, 2>{2, 0});
  CHECK(to_string(Plane::zx) == "zx");
}

TEST_CASE("projection") {
  auto net = parse_network("A + B <-> A + C");
  auto xy = project_network(net, Plane::xy);
  CHECK(xy.species() == std::vector<std::string>{"A", "B"});
  CHECK(format_network(xy) == "A + B <-> A\n");

  // A vector parallel to the dropped axis vanishes.
  auto z = parse_network("A <-> B\nA <-> A + C");
  CHECK(project_network(z, Plane::xy).reaction_count() == 2);
  CHECK(project_network(z, Plane::yz).reaction_count() == 4);

  for (auto name : {"gac-a.crn", "gac-b.crn"})
    for (auto p : {Plane::xy, Plane::yz, Plane::zx}) {
      CAPTURE(name);
      auto net = bundled(name);
      auto proj = project_network(net, p);
      CHECK(is_weakly_reversible(proj));
      CHECK(is_endotactic(proj).endotactic);
      CHECK(equivalent(project_network(reversed(net), p), reversed(proj)));
    }

  CHECK_THROWS_AS(project_network(bundled("eq31.crn"), Plane::xy), DimensionError);
}

TEST_CASE("eta from the rate constants") {
  auto two = parse_network("A + B -> 2C\n2C -> A + B");
  CHECK(max_coefficient(two) == 2);
  CHECK(eta_for(two, {1, 1}, 0.1) == doctest::Approx(0.01));
  auto one = parse_network("A <-> B\nB <-> C");
  CHECK(max_coefficient(one) == 1);
  CHECK(eta_for(one, {2, 0.5, 1, 1}, 0.5) == doctest::Approx(0.25));
  CHECK(eta_for(two, {100, 3}, 0.9) < 1);
}

TEST_CASE("complex-balance residual") {
  auto ab = parse_network("A <-> B");
  auto r = complex_balance_residual(ab, {1, 1}, {1, 1});
  CHECK(r == std::vector<double>{0, 0});

  // Summing residual(P) P over complexes reproduces the right-hand side.
  auto net = bundled("gac-b.crn");
  State c{0.3, 1.7, 2.2};
  auto res = complex_balance_residual(net, ones(net), c);
  REQUIRE(res.size() == net.complexes().size());
  CHECK(max_abs(res) > 1e-3);
  State sum(3, 0.0);
  for (std::size_t i = 0; i < res.size(); ++i)
    for (int k = 0; k < 3; ++k) sum[k] += res[i] * to_double(net.complexes()[i][k]);
  auto f = rhs(net, RateSchedule::constant(net.reaction_count(), 0.5, 1.0), 0.0, c);
  for (int k = 0; k < 3; ++k) CHECK(sum[k] == doctest::Approx(f[k]).epsilon(1e-12));
}

TEST_CASE("equilibria") {
  auto lv = bundled("lotka.crn");
  auto e0 = find_equilibrium(lv, ones(lv), {1, 1});
  CHECK(e0.state[0] == doctest::Approx(1.0));
  CHECK(e0.state[1] == doctest::Approx(1.0));

  for (auto name : {"gac-a.crn", "gac-b.crn"}) {
    CAPTURE(name);
    auto net = bundled(name);
    auto eq = find_equilibrium(net, ones(net), {1, 1, 1});
    CHECK(eq.residual < 1e-10);
    for (double x : eq.state) CHECK(x > 1e-3);
    CHECK(max_abs(complex_balance_residual(net, ones(net), eq.state)) < 1e-8);
    auto f = rhs(net, RateSchedule::constant(net.reaction_count(), 0.5, 1.0), 0.0, eq.state);
    CHECK(max_abs(f) < 1e-10);
  }
}

TEST_CASE("the set K") {
  for (auto name : {"gac-a.crn", "gac-b.crn"}) {
    CAPTURE(name);
    auto net = bundled(name);
    std::vector<State> starts{{1, 1, 1}, {0.2, 3, 1}};
    auto k = build_K(net, ones(net), 0.1, starts);
    CHECK(k.planes.size() == 3);
    CHECK(k.eta == doctest::Approx(eta_for(net, ones(net), 0.1)));
    CHECK(k.d > 0);
    for (const auto& s : starts) CHECK(k.contains(s));
    for (const auto& pc : k.planes) {
      CHECK(pc.subtangentiality >= -1e-9);
      for (const auto& v : pc.polygon.vertices) {
        CHECK(v[0] >= k.d * (1 - 1e-12));
        CHECK(v[1] >= k.d * (1 - 1e-12));
      }
    }
    CHECK_FALSE(k.contains({1, 1, 20}));
    CHECK_FALSE(k.contains({k.d / 2, k.d / 2, k.d / 2}));
  }
  CHECK_THROWS_AS(build_K(parse_network("A -> B\nB -> C"), {1, 1}, 0.1, {{1, 1, 1}}), std::invalid_argument);
}

TEST_CASE("epsilon from trajectories") {
  Trajectory t;
  t.times = {0, 1};
  t.states = {{1, 1, 1}, {0.3, 0.3, 0.3}};
  t.min_state = {0.3, 0.3, 0.3};
  t.max_state = {4, 1, 1};
  t.states.push_back({4, 1, 1});
  t.times.push_back(2);
  CHECK(epsilon_from_trajectories({t}) == doctest::Approx(0.125));
}

TEST_CASE("convergence to the equilibrium") {
  for (auto name : {"gac-a.crn", "gac-b.crn"}) {
    CAPTURE(name);
    auto net = bundled(name);
    std::vector<State> starts{{1, 1, 1}, {1e-4, 1e-4, 1}, {5, 0.1, 2}};
    GacConfig cfg;
    cfg.integrator.horizon = 200;
    auto rep = check_gac(net, ones(net), starts, cfg);
    CHECK(rep.certification.pass());
    CHECK(rep.max_complex_balance_residual < 1e-8);
    CHECK(rep.min_coordinate_sum > 3 * rep.construction.epsilon);
    for (const auto& d : rep.distances) CHECK(d.back() < 1e-6);
  }
}
