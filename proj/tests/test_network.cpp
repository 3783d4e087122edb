#include "doctest.h"

#include <random>

#include "crn/network.hpp"
#include "crn/schedule.hpp"
#include "support.hpp"

using namespace crn;

namespace {

Complex cx(std::initializer_list<int> v) {
  Complex c;
  for (int x : v) c.push_back(Rational(x));
  return c;
}

NetworkCondition violated(const std::string& text) {
  try {
    parse_network(text);
  } catch (const ValidationError& e) {
    return e.condition();
  }
  FAIL("expected a validation error for: " << text);
  return NetworkCondition::no_self_reaction;
}

}  // namespace

TEST_CASE("rationals parse decimals exactly and print back") {
  CHECK(parse_rational("1.5") == Rational(3, 2));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  for (auto q : {Rational(1, 3), Rational(-7, 8), Rational(5), Rational(2, 7), Rational(-1, 1000)})
    CHECK(parse_rational(format_rational(q)) == q);
  CHECK(format_rational(Rational(3, 2)) == "1.5");
  CHECK(format_rational(Rational(1, 3)) == "1/3");
}

TEST_CASE("reversible arrows expand and complexes are collected") {
  auto net = parse_network("2X <-> Y\nX <-> Y\nX <-> 2X + Y");
  CHECK(net.species() == std::vector<std::string>{"X", "Y"});
  CHECK(net.reaction_count() == 6);
  REQUIRE(net.complexes().size() == 4);
  CHECK(net.complexes()[0] == cx({2, 0}));
  CHECK(net.complexes()[1] == cx({0, 1}));
  CHECK(net.complexes()[2] == cx({1, 0}));
  CHECK(net.complexes()[3] == cx({2, 1}));
}

TEST_CASE("predator-prey network") {
  auto net = parse_network("A -> 2A\nA + B -> 2B\nB -> 0");
  CHECK(net.reaction_count() == 3);
  CHECK(net.complexes().size() == 6);
  auto src = source_complexes(net);
  REQUIRE(src.size() == 3);
  CHECK(src[0] == cx({0, 1}));
  CHECK(src[1] == cx({1, 0}));
  CHECK(src[2] == cx({1, 1}));
  CHECK(net.reaction_label(1) == "A + B -> 2B");
}

TEST_CASE("source complexes") {
  auto eq31 = bundled("eq31.crn");
  auto src = source_complexes(eq31);
  CHECK(src == std::vector<Complex>{cx({0, 1}), cx({1, 0}), cx({2, 0}), cx({2, 1})});
  auto single = parse_network("A -> B");
  CHECK(source_complexes(single) == std::vector<Complex>{cx({1, 0})});
  for (const auto& s : src) CHECK_NOTHROW(eq31.complex_index(s));
}

TEST_CASE("validation names the violated condition") {
  CHECK(violated("A -> A") == NetworkCondition::no_self_reaction);
  CHECK(violated("A -> B\nA -> B") == NetworkCondition::no_duplicate_reactions);
  CHECK(violated("species: A, B, C\nA -> B") == NetworkCondition::species_supported);
  CHECK_THROWS_AS(ReactionNetwork({"A"}, {{cx({1}), cx({1, 0}), std::nullopt}}), ValidationError);
  CHECK_THROWS_AS(ReactionNetwork({"A"}, {{Complex{Rational(1, 2)}, cx({1}), std::nullopt}}), ValidationError);
  // Generalized mode accepts rational and negative exponents.
  CHECK_NOTHROW(ReactionNetwork({"x"}, {{Complex{Rational(-1, 2)}, cx({1}), std::nullopt}}, NetworkMode::generalized));
}

TEST_CASE("syntax errors report line and column") {
  try {
    parse_network("A -> B\nA + -> C");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 4);
  }
  CHECK_THROWS_AS(parse_network("A => B"), ParseError);
  CHECK_THROWS_AS(parse_network("A -> B -> C"), ParseError);
  CHECK_THROWS_AS(parse_network("A -> B | k=-1"), ParseError);
  CHECK_THROWS_AS(parse_network("A -> B | k in (2,1)"), ParseError);
  CHECK_THROWS_AS(parse_network("source: (1,2) vector: (1)", NetworkMode::generalized), ParseError);
}

TEST_CASE("rate metadata and comments") {
  auto net = parse_network("# comment\n0 -> U | k=13\nU + V -> V | k in (0.01,100)  # trailing\n");
  REQUIRE(net.reaction_count() == 2);
  CHECK(std::get<FixedRate>(*net.reactions()[0].rate).value == 13.0);
  auto iv = std::get<RateInterval>(*net.reactions()[1].rate);
  CHECK(iv.lo == 0.01);
  CHECK(iv.hi == 100.0);
}

TEST_CASE("generalized networks keep decimal exponents exactly") {
  auto s = bundled("ssystem.gcrn");
  CHECK(s.mode() == NetworkMode::generalized);
  REQUIRE(s.reaction_count() == 3);
  CHECK(s.reactions()[0].source == Complex{Rational(-1), Rational(3, 2)});
  CHECK(s.reactions()[1].source == Complex{Rational(0), Rational(4, 5)});
  CHECK(s.reactions()[2].source == Complex{Rational(0), Rational(-2)});
  CHECK(to_double(s.reactions()[0].vector()[1]) == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("format and parse round-trip on bundled networks") {
  for (auto name : {"eq31.crn", "lotka.crn", "thomas.crn", "ssystem.gcrn", "gac-a.crn", "gac-b.crn", "figure1.crn"}) {
    CAPTURE(name);
    auto net = bundled(name);
    auto text = format_network(net);
    auto back = parse_network(text, net.mode());
    CHECK(equivalent(net, back));
    CHECK(format_network(back) == text);
  }
  CHECK(format_network(bundled("eq31.crn")) == "2X <-> Y\nX <-> Y\nX <-> 2X + Y\n");
  CHECK(format_network(parse_network("A -> 2A\nA + B -> 2B\nB -> 0")) == "A -> 2A\nA + B -> 2B\nB -> 0\n");
}

TEST_CASE("species header fixes the order") {
  auto net = parse_network("species: V, U\nU -> V");
  CHECK(net.species() == std::vector<std::string>{"V", "U"});
  CHECK(net.reactions()[0].source == cx({0, 1}));
  auto back = parse_network(format_network(net));
  CHECK(equivalent(net, back));
  CHECK_THROWS_AS(parse_network("species: A\nA -> B"), ParseError);
}

TEST_CASE("reversal swaps every reaction") {
  auto lv = bundled("lotka.crn");
  auto r = reversed(lv);
  for (std::size_t i = 0; i < lv.reaction_count(); ++i) {
    CHECK(r.reactions()[i].source == lv.reactions()[i].target);
    CHECK(r.reactions()[i].target == lv.reactions()[i].source);
  }
  CHECK(equivalent(reversed(r), lv));
}

TEST_CASE("rate schedules stay inside (eta, 1/eta)") {
  const double eta = 0.25;
  for (auto kind : {ScheduleKind::constant, ScheduleKind::piecewise, ScheduleKind::sinusoidal}) {
    auto s = RateSchedule::for_network(bundled("eq31.crn"), eta, kind, 11, 50.0, 0.5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(0.0, 60.0);
    for (int k = 0; k < 2000; ++k) {
      double tt = t(rng);
      for (std::size_t r = 0; r < s.size(); ++r) {
        double v = s.rate(r, tt);
        REQUIRE(v > eta);
        REQUIRE(v < 1 / eta);
      }
    }
  }
}

TEST_CASE("schedule construction") {
  CHECK_THROWS(RateSchedule(1.5, {ConstantRate{1.0}}));
  auto c = RateSchedule::constant(3, 0.5, 1.0);
  CHECK(c.rate(2, 7.0) == 1.0);
  CHECK(c.next_breakpoint(0.0) == std::numeric_limits<double>::infinity());

  auto f = RateSchedule::fixed({13.0, 0.1});
  CHECK(f.rate(0, 0.0) == 13.0);
  CHECK(f.rate(1, 3.0) == 0.1);
  CHECK(f.eta() < 0.1);

  auto p = RateSchedule::random_piecewise(2, 0.5, 1.0, 10.0, 5);
  CHECK(p.next_breakpoint(0.0) == doctest::Approx(1.0));
  CHECK(p.next_breakpoint(1.0) == doctest::Approx(2.0));
  CHECK(p.rate(0, 0.5) == p.rate(0, 0.9));

  // The same seed gives the same schedule.
  auto p2 = RateSchedule::random_piecewise(2, 0.5, 1.0, 10.0, 5);
  for (double t = 0; t < 10; t += 0.37) CHECK(p.rate(1, t) == p2.rate(1, t));

  // Fixed metadata outside the bound is rejected, intervals narrow the sampled range.
  auto thomas = bundled("thomas.crn");
  CHECK_THROWS_AS(RateSchedule::for_network(thomas, 0.5, ScheduleKind::piecewise, 1, 10), std::invalid_argument);
  auto ts = RateSchedule::for_network(thomas, 0.01, ScheduleKind::piecewise, 1, 10);
  CHECK(ts.rate(0, 3.0) == 13.0);
  for (double t = 0; t < 10; t += 0.1) {
    CHECK(ts.rate(4, t) > 0.01);
    CHECK(ts.rate(4, t) < 100);
  }
}
