#include "doctest.h"
#include "helpers.hpp"

using namespace pnta;
using namespace pnta_tests;

TEST_SUITE_BEGIN("model");

TEST_CASE("validate_network accepts the reduced Fischer template") {
    ModelDocument doc = load_model("fischer_reduced.pnta");
    CHECK(validate_network(doc.spec).empty());
}

TEST_CASE("validate_network flags an allowed set missing the initial state") {
    ModelDocument doc = load_model("fischer_reduced.pnta");
    // Drop Init_Diff from the first transition's when-set.
    auto& guard = doc.spec.templates[0].transitions[0].sync_guard;
    guard.allowed["P"].erase("Init_Diff");
    auto diags = validate_network(doc.spec);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("initial state") != std::string::npos);
}

TEST_CASE("validate_network flags a non-trivial initial invariant") {
    ModelDocument doc = load_model("fischer_reduced.pnta");
    Template& t = doc.spec.templates[0];
    t.invariants[static_cast<std::size_t>(t.initial)] =
        ClockConstraint::make_atom({0, -1, RelOp::Le, Rational(2)});
    auto diags = validate_network(doc.spec);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("initial invariant") != std::string::npos);
}

TEST_CASE("validate_network flags an empty allowed set") {
    ModelDocument doc = load_model("fischer_reduced.pnta");
    doc.spec.templates[0].transitions[0].sync_guard.allowed["P"].clear();
    CHECK(!validate_network(doc.spec).empty());
}

TEST_CASE("scale_to_integers uses the denominator LCM") {
    ModelDocument doc = parse_model(R"(
const a = 3/2;
const b = 1;
template T { init s; state s; }
system { T: param; }
)");
    NetworkSpec scaled = scale_to_integers(doc.spec);
    CHECK(scaled.scale == 2);
    CHECK(scaled.constants.at("a") == Rational(3));
    CHECK(scaled.constants.at("b") == Rational(2));
}

TEST_CASE("scale_to_integers is the identity on integer specs") {
    ModelDocument doc = load_model("fischer_reduced.pnta");
    NetworkSpec scaled = scale_to_integers(doc.spec);
    CHECK(scaled.scale == 1);
    CHECK(scaled.templates == doc.spec.templates);
}

TEST_CASE("scale_to_integers example {1/3, 1/2} -> L=6, {2, 3}") {
    ModelDocument doc = parse_model(R"(
const a = 1/3;
const b = 1/2;
template T { init s; state s; }
system { T: param; }
)");
    NetworkSpec scaled = scale_to_integers(doc.spec);
    CHECK(scaled.scale == 6);
    CHECK(scaled.constants.at("a") == Rational(2));
    CHECK(scaled.constants.at("b") == Rational(3));
}

TEST_CASE("normalize_constraints splits a disjunctive guard") {
    ModelDocument doc = parse_model(R"(
template T {
  clocks c;
  init s;
  state s;
  state t;
  trans s -> t { guard c <= 2 | c >= 5; }
}
system { T: param; }
)");
    NetworkSpec n = normalize_constraints(doc.spec);
    REQUIRE(n.templates[0].transitions.size() == 2);
    auto g0 = convex_atoms(n.templates[0].transitions[0].guard, "t0");
    auto g1 = convex_atoms(n.templates[0].transitions[1].guard, "t1");
    REQUIRE(g0.size() == 1);
    REQUIRE(g1.size() == 1);
    CHECK(g0[0].op == RelOp::Le);
    CHECK(g0[0].bound == Rational(2));
    CHECK(g1[0].op == RelOp::Ge);
    CHECK(g1[0].bound == Rational(5));
}

TEST_CASE("normalize_constraints pushes negation to atoms") {
    ModelDocument doc = parse_model(R"(
template T {
  clocks c;
  init s;
  state s;
  state t;
  trans s -> t { guard !(c < 1); }
}
system { T: param; }
)");
    NetworkSpec n = normalize_constraints(doc.spec);
    auto atoms = convex_atoms(n.templates[0].transitions[0].guard, "t");
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].op == RelOp::Ge);
    CHECK(atoms[0].bound == Rational(1));
}

TEST_CASE("normalize_constraints rejects a disjunctive invariant") {
    ModelDocument doc = parse_model(R"(
template T {
  clocks c, d;
  init s;
  state s;
  state t inv c <= 1 | d <= 1;
  trans s -> t { }
}
system { T: param; }
)");
    CHECK_THROWS_WITH_AS(normalize_constraints(doc.spec),
                         doctest::Contains("not a convex conjunction"), Error);
    try {
        normalize_constraints(doc.spec);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvexInvariant);
    }
}

TEST_CASE("max_constants on reduced Fischer with k=2") {
    ModelDocument doc = load_model("fischer_reduced.pnta");
    auto mc = max_constants(scale_to_integers(doc.spec));
    REQUIRE(mc.size() == 1);
    REQUIRE(mc[0].size() == 1);
    CHECK(mc[0][0] == 2);
}

TEST_CASE("max_constants: unused clock is 0, multiple comparisons take max") {
    ModelDocument doc = parse_model(R"(
template T {
  clocks c, d;
  init s;
  state s;
  state t;
  trans s -> t { guard c > 3; }
  trans t -> s { guard c <= 7; }
}
system { T: param; }
)");
    auto mc = max_constants(scale_to_integers(doc.spec));
    CHECK(mc[0][0] == 7);
    CHECK(mc[0][1] == 0);
}

TEST_CASE("normalization preserves digitized successor sets") {
    // The DNF split only rearranges guards; the reachable digitized graph
    // must be identical before and after.
    ModelDocument doc = parse_model(R"(
template T {
  clocks c;
  init s;
  state s;
  state t;
  state u;
  trans s -> t { guard c <= 1 | c >= 3; }
  trans t -> u { guard c >= 2; }
  trans u -> s { reset c; }
}
system { T: param; }
)");
    NetworkSpec plain = scale_to_integers(doc.spec);
    NetworkSpec norm = normalize_constraints(plain);
    for (int state = 0; state < 3; ++state) {
        GroundFormula goal = ground_atom(0, 1, state);
        CHECK(discrete_reach(normalize_constraints(plain), {1}, goal).reachable ==
              discrete_reach(norm, {1}, goal).reachable);
    }
}

TEST_SUITE_END();
