#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

using namespace pnta;
using namespace pnta_tests;

namespace {

// A k-template spec where template l has state_counts[l] states, with enough
// transitions that every state is syntactically meaningful.
NetworkSpec chain_spec(const std::vector<int>& state_counts) {
    std::string text;
    for (std::size_t l = 0; l < state_counts.size(); ++l) {
        text += "template T" + std::to_string(l) + " {\n  init s0;\n";
        for (int s = 0; s < state_counts[l]; ++s)
            text += "  state s" + std::to_string(s) + ";\n";
        for (int s = 0; s + 1 < state_counts[l]; ++s)
            text += "  trans s" + std::to_string(s) + " -> s" +
                    std::to_string(s + 1) + " { }\n";
        text += "}\n";
    }
    text += "system {\n";
    for (std::size_t l = 0; l < state_counts.size(); ++l)
        text += "  T" + std::to_string(l) + ": param;\n";
    text += "}\n";
    return parse_model(text).spec;
}

Property binder_prop(PathQuantifier q, const std::vector<int>& indexed) {
    Property p;
    p.quantifier = q;
    p.op = PathOp::G;  // valid for every quantifier, including *_fin
    char var = 'i';
    for (int t : indexed) {
        p.binders.push_back({std::string(1, var++), t});
        p.phi = StateFormula::make_and(
            p.phi, StateFormula::make_atom(
                       static_cast<int>(p.binders.size()) - 1, 0));
    }
    return p;
}

int expected_cutoff(PathQuantifier q, int num_states, bool indexed) {
    switch (q) {
        case PathQuantifier::Ainf:
        case PathQuantifier::Einf:
            return indexed ? 2 : 1;
        case PathQuantifier::Afin:
        case PathQuantifier::Efin:
            return 1;
        case PathQuantifier::A:
        case PathQuantifier::E:
            return indexed ? 2 * num_states + 1 : 2 * num_states;
    }
    return -1;
}

}  // namespace

TEST_SUITE_BEGIN("cutoff");

TEST_CASE("cutoff table, exhaustive over quantifier x arity x state count") {
    const PathQuantifier quants[] = {PathQuantifier::A,    PathQuantifier::E,
                                     PathQuantifier::Ainf, PathQuantifier::Einf,
                                     PathQuantifier::Afin, PathQuantifier::Efin};
    for (int k = 1; k <= 3; ++k) {
        for (int u = 1; u <= 10; ++u) {
            std::vector<int> counts(static_cast<std::size_t>(k), u);
            NetworkSpec spec = chain_spec(counts);
            for (PathQuantifier q : quants) {
                // Index template 0 only; the rest are unreferenced.
                Property prop = binder_prop(q, {0});
                CutoffVector cv = compute_cutoff(spec, prop);
                REQUIRE(cv.sizes.size() == static_cast<std::size_t>(k));
                for (int l = 0; l < k; ++l)
                    CHECK_MESSAGE(
                        cv.sizes[static_cast<std::size_t>(l)] ==
                            expected_cutoff(q, u, l == 0),
                        "k=" << k << " |U|=" << u << " l=" << l
                             << " q=" << quantifier_str(q));
            }
        }
    }
}

TEST_CASE("cutoff of the 4-state template under A is 9") {
    NetworkSpec spec = load_model("fischer_reduced.pnta").spec;
    Property prop = parse_property("forall i:P . A G[>=0] !CS_mypid(i)", spec);
    CutoffVector cv = compute_cutoff(spec, prop);
    REQUIRE(cv.sizes.size() == 1);
    CHECK(cv.sizes[0] == 9);
    CHECK(cv.reasons[0] == "2*4+1 (indexed template)");
}

TEST_CASE("mixed arities: (|U1|=4, |U2|=3), A, template 1 indexed -> (9, 6)") {
    NetworkSpec spec = chain_spec({4, 3});
    CutoffVector cv = compute_cutoff(spec, binder_prop(PathQuantifier::A, {0}));
    CHECK(cv.sizes == SizeVector{9, 6});
}

TEST_CASE("Efin collapses to all-ones") {
    NetworkSpec spec = chain_spec({4, 3, 10});
    CutoffVector cv =
        compute_cutoff(spec, binder_prop(PathQuantifier::Efin, {1}));
    CHECK(cv.sizes == SizeVector{1, 1, 1});
}

TEST_CASE("Einf: (|U1|=5, |U2|=7), template 2 indexed -> (1, 2)") {
    NetworkSpec spec = chain_spec({5, 7});
    CutoffVector cv =
        compute_cutoff(spec, binder_prop(PathQuantifier::Einf, {1}));
    CHECK(cv.sizes == SizeVector{1, 2});
}

TEST_CASE("minimum_sizes counts distinct binders per template") {
    NetworkSpec spec = load_model("fischer_reduced.pnta").spec;
    Property one = parse_property("forall i:P . E F[>=0] CS_mypid(i)", spec);
    CHECK(minimum_sizes(spec, one) == SizeVector{1});
    Property two = parse_property(
        "forall i:P, j:P with i != j . A G[>=0] !(CS_mypid(i) & CS_mypid(j))",
        spec);
    CHECK(minimum_sizes(spec, two) == SizeVector{2});
}

TEST_CASE("enumerate_sizes spans the instantiable subrange") {
    CHECK(enumerate_sizes({1}, {2}) ==
          std::vector<SizeVector>{{1}, {2}});
    auto pair = enumerate_sizes({2}, {9});
    REQUIRE(pair.size() == 8);
    CHECK(pair.front() == SizeVector{2});
    CHECK(pair.back() == SizeVector{9});
    CHECK(enumerate_sizes({1, 0}, {2, 1}) ==
          std::vector<SizeVector>{{1, 0}, {1, 1}, {2, 0}, {2, 1}});
}

TEST_CASE("parameterized mutex sweep on a thinned cutoff range") {
    // Full 2..9 sweep is the acceptance run; here sizes 2..4 via the checker
    // plus a sanity check that the driver reports the cutoff and per-size
    // table consistently.
    NetworkSpec spec = load_model("fischer_reduced.pnta").spec;
    Property mutex = parse_property(
        "forall i:P, j:P with i != j . A G[>=0] !(CS_mypid(i) & CS_mypid(j))",
        spec);
    for (int n = 2; n <= 4; ++n) CHECK(check(spec, {n}, mutex).truth);

    Property starve =
        parse_property("forall i:P . A F[>=0] CS_mypid(i)", spec);
    ParamVerdict pv = parameterized_check(spec, starve, true);
    CHECK(!pv.truth);
    REQUIRE(!pv.failures.empty());
    CHECK(pv.failures.front() == pv.checked.back());  // fail-fast stops there
    CHECK(pv.cutoff.sizes == SizeVector{9});
}

TEST_CASE("parameterized Efin sweep checks exactly the all-ones sizes") {
    NetworkSpec spec = load_model("fischer_reduced.pnta").spec;
    Property p = parse_property("forall i:P . Efin G[>=0] Init_Diff(i)", spec);
    ParamVerdict pv = parameterized_check(spec, p);
    CHECK(pv.checked == std::vector<SizeVector>{{1}});
}

TEST_SUITE_END();
