#include "doctest.h"

#include <cmath>
#include <random>

#include "crn/gac3.hpp"
#include "crn/graph.hpp"
#include "crn/schedule.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace crn;
using namespace crn::testgen;

TEST_CASE("finite test vectors agree with a brute-force sweep") {
  Rng rng(2024);
  auto dirs = brute_force_directions(1000);
  int endo = 0, lower = 0, lower_disagree = 0;
  for (int k = 0; k < 500; ++k) {
    auto net = random_network(rng);
    auto verdict = is_endotactic(net);
    bool oracle = oracle_endotactic(net, dirs);
    CAPTURE(format_network(net));
    REQUIRE(verdict.endotactic == oracle);
    endo += oracle;
    bool lo = oracle_lower_endotactic(net, dirs);
    lower += lo;
    if (!verdict.degenerate) CHECK(verdict.lower_endotactic == lo);
    else lower_disagree += verdict.lower_endotactic != lo;
  }
  // The sample must exercise both outcomes.
  CHECK(endo > 25);
  CHECK(endo < 475);
  CHECK(lower > endo);
  MESSAGE("endotactic " << endo << "/500, lower-endotactic " << lower << "/500, single-source lower mismatches "
                         << lower_disagree);
}

TEST_CASE("weakly reversible networks are endotactic") {
  Rng rng(77);
  for (int k = 0; k < 1000; ++k) {
    auto net = random_weakly_reversible(rng);
    CAPTURE(format_network(net));
    REQUIRE(is_weakly_reversible(net));
    REQUIRE(is_endotactic(net).endotactic);
  }
}

TEST_CASE("witnesses really fail the sweep") {
  Rng rng(5);
  for (int k = 0; k < 300; ++k) {
    auto net = random_network(rng);
    auto in = to_int(net);
    for (const auto& w : is_endotactic(net).witnesses) {
      CHECK_FALSE(oracle_sweep(in, as_int(w.vector[0]), as_int(w.vector[1])));
      const auto& rx = net.reactions()[w.reaction];
      CHECK(dot2(w.vector, to_vec2(rx.source)) == w.support.offset);
    }
  }
}

TEST_CASE("classification is invariant under translation, scaling and species swap") {
  Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    auto net = random_network(rng, 6, 3);
    bool endo = is_endotactic(net).endotactic;
    auto shifted = map_complexes(net, [](Complex c) {
      c[0] += 2;
      c[1] += 1;
      return c;
    });
    auto scaled = map_complexes(net, [](Complex c) {
      c[0] *= 2;
      c[1] *= 2;
      return c;
    });
    auto swapped = map_complexes(net, [](Complex c) { return Complex{c[1], c[0]}; });
    CHECK(is_endotactic(shifted).endotactic == endo);
    CHECK(is_endotactic(scaled).endotactic == endo);
    CHECK(is_endotactic(swapped).endotactic == endo);
    CHECK(is_lower_endotactic(swapped).lower_endotactic == is_lower_endotactic(net).lower_endotactic);
  }
}

TEST_CASE("rank and deficiency bounds") {
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    auto net = k % 2 ? random_network(rng) : random_weakly_reversible(rng, 3, 3);
    auto rep = analyze_structure(net);
    CHECK(rep.stoich_rank <= net.species_count());
    CHECK(rep.stoich_rank <= net.reaction_count());
    CHECK(rep.stoich_rank <= rep.num_complexes - rep.linkage_classes.size());
    CHECK(rep.deficiency >= 0);
    CHECK(rep.deficiency == deficiency_via_condensation(net));
    CHECK(stoich_rank(reversed(net)) == rep.stoich_rank);
  }
}

TEST_CASE("format and parse round-trip") {
  Rng rng(8);
  for (int k = 0; k < 500; ++k) {
    auto net = k % 2 ? random_network(rng) : random_weakly_reversible(rng, 3, 4);
    auto text = format_network(net);
    auto back = parse_network(text);
    CAPTURE(text);
    CHECK(equivalent(net, back));
    CHECK(format_network(back) == text);
  }
}

TEST_CASE("schedules respect their bound") {
  Rng rng(1);
  std::uniform_real_distribution<double> t(0.0, 500.0);
  std::uniform_real_distribution<double> e(0.01, 0.95);
  long samples = 0;
  for (auto kind : {ScheduleKind::constant, ScheduleKind::piecewise, ScheduleKind::sinusoidal})
    for (int s = 0; s < 10; ++s) {
      double eta = e(rng);
      auto sched = RateSchedule::for_network(bundled("eq31.crn"), eta, kind, s, 500.0, 0.7);
      for (int k = 0; k < 600; ++k) {
        double tt = t(rng);
        for (std::size_t r = 0; r < sched.size(); ++r, ++samples) {
          double v = sched.rate(r, tt);
          REQUIRE(v > eta);
          REQUIRE(v < 1 / eta);
        }
      }
    }
  CHECK(samples >= 100000);
}

TEST_CASE("projection commutes with reversal and keeps weak reversibility") {
  Rng rng(19);
  for (int k = 0; k < 200; ++k) {
    auto net = random_weakly_reversible(rng, 3, 3);
    for (auto p : {Plane::xy, Plane::yz, Plane::zx}) {
      ReactionNetwork proj = net;
      try {
        proj = project_network(net, p);
      } catch (const ValidationError&) {
        continue;  // every reaction moved along the dropped axis, or a species vanished
      }
      CHECK(equivalent(project_network(reversed(net), p), reversed(proj)));
      CHECK(is_weakly_reversible(proj));
      CHECK(is_endotactic(proj).endotactic);
    }
  }
}

TEST_CASE("eta decreases with epsilon and with the largest coefficient") {
  auto small = parse_network("A + B <-> C");
  auto big = parse_network("3A + B <-> C");
  std::vector<double> k{2.0, 0.7};
  double prev = 1;
  for (double eps : {0.9, 0.5, 0.2, 0.05, 0.01}) {
    double e = eta_for(small, k, eps);
    CHECK(e < prev);
    CHECK(eta_for(big, k, eps) < e);
    prev = e;
  }
}
