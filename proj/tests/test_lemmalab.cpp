#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "pnta/lemmalab.hpp"

using namespace pnta;
using namespace pnta_tests;

TEST_SUITE_BEGIN("lemmalab");

TEST_CASE("random_spec is deterministic in the seed") {
    GenParams p;
    p.seed = 77;
    ModelDocument a, b;
    a.spec = random_spec(p);
    b.spec = random_spec(p);
    CHECK(print_model(a) == print_model(b));

    p.seed = 78;
    ModelDocument c;
    c.spec = random_spec(p);
    CHECK(print_model(a) != print_model(c));
}

TEST_CASE("zero transition density yields transition-free templates") {
    GenParams p;
    p.seed = 5;
    p.transition_density = 0.0;
    NetworkSpec spec = random_spec(p);
    for (const auto& t : spec.templates) CHECK(t.transitions.empty());
}

TEST_CASE("generated specs always validate and stay closed") {
    GenParams p;
    for (int trial = 0; trial < 200; ++trial) {
        p.seed = 10000 + static_cast<std::uint64_t>(trial);
        NetworkSpec spec = random_spec(p);
        CHECK(validate_network(spec).empty());
        CHECK(spec.templates.size() >= 1);
        CHECK(spec.templates.size() <= 2);
        for (const auto& t : spec.templates) {
            CHECK(static_cast<int>(t.states.size()) <= p.max_states);
            CHECK(static_cast<int>(t.clocks.size()) <= p.max_clocks);
            for (const auto& tr : t.transitions)
                CHECK(!constraint_has_strict_atom(tr.guard));
            for (const auto& inv : t.invariants)
                CHECK(!constraint_has_strict_atom(inv));
        }
    }
}

TEST_CASE("short suite runs are violation-free") {
    GenParams p;
    p.seed = 42;
    for (const char* suite : {"mono", "bound", "trunc"}) {
        LemmaReport r = run_suite(suite, p, 5);
        CHECK(r.suite == suite);
        CHECK(r.trials == 5);
        CHECK_MESSAGE(r.violations.empty(), r.text());
    }
}

TEST_CASE("report ends with the machine-readable summary line") {
    GenParams p;
    p.seed = 9;
    LemmaReport r = run_suite("mono", p, 3);
    std::string text = r.text();
    std::string tail = "violations=0 trials=3 seed=9\n";
    REQUIRE(text.size() >= tail.size());
    CHECK(text.substr(text.size() - tail.size()) == tail);
}

TEST_CASE("truncation instance: Fischer verdicts agree past the cutoff") {
    // |U| = 4 gives cutoff 9 for the plain quantifiers; size 10 must agree
    // with size 9. The cheap reachability form is checked at the cutoff
    // itself; the heavier forms at smaller truncation pairs.
    NetworkSpec spec = load_model("fischer_reduced.pnta").spec;
    Property reach = parse_property("forall i:P . E F[>=0] CS_mypid(i)", spec);
    CHECK(check(spec, {9}, reach).truth == check(spec, {10}, reach).truth);

    Property mutex = parse_property(
        "forall i:P, j:P with i != j . A G[>=0] !(CS_mypid(i) & CS_mypid(j))",
        spec);
    CHECK(check(spec, {3}, mutex).truth == check(spec, {4}, mutex).truth);

    Property starve = parse_property("forall i:P . A F[>=0] CS_mypid(i)", spec);
    CHECK(check(spec, {3}, starve).truth == check(spec, {4}, starve).truth);
}

TEST_SUITE_END();
