#include <algorithm>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "pnta/abstraction.hpp"
#include "pnta/errors.hpp"

using namespace pnta;
using namespace pnta_tests;

namespace {

struct FischerFull {
    ModelDocument doc;
    const Template& tmpl() const { return doc.spec.templates[0]; }
    const VarBinding& binding() const { return doc.bindings.at("P"); }
};

FischerFull fischer_full() { return {load_model("fischer_full.pnta")}; }

// Wraps one template as a single-template parameterized network, inheriting
// the source spec's constants.
NetworkSpec wrap(const Template& t, const NetworkSpec& like) {
    NetworkSpec spec;
    spec.templates = {t};
    spec.constants = like.constants;
    return spec;
}

// exists two distinct instances both inside the tag set
GroundFormula both_tagged(const Template& t, const std::set<std::string>& tags) {
    auto one = [&](int instance) {
        GroundFormula f;
        f.kind = StateFormula::Kind::Or;
        for (const auto& tag : tags) {
            f.children.push_back(ground_atom(0, instance, t.state_index(tag)));
        }
        return f;
    };
    GroundFormula pairf;
    pairf.kind = StateFormula::Kind::And;
    pairf.children = {one(1), one(2)};
    return pairf;
}

}  // namespace

TEST_SUITE_BEGIN("abstraction");

TEST_CASE("pid_view_template is the 2-state diffpid/mypid view") {
    Template w = pid_view_template();
    REQUIRE(w.states.size() == 2);
    CHECK(w.initial_name() == "diffpid");
    for (int s = 0; s < 2; ++s) {
        bool self_loop = false;
        for (const auto& tr : w.transitions)
            self_loop = self_loop || (tr.source == s && tr.target == s);
        CHECK(self_loop);
    }
    // moves in both directions
    bool up = false, down = false;
    for (const auto& tr : w.transitions) {
        up = up || (tr.source == 0 && tr.target == 1);
        down = down || (tr.source == 1 && tr.target == 0);
    }
    CHECK(up);
    CHECK(down);
}

TEST_CASE("product of the 4-state template has 8 states, 4 tagged") {
    FischerFull f = fischer_full();
    TaggedTemplate prod = product(f.tmpl(), f.binding());
    CHECK(prod.tmpl.states.size() == 8);
    CHECK(prod.tags.size() == 4);
    for (const auto& tag : prod.tags)
        CHECK(tag.find("_Mypid") != std::string::npos);
    // A v=pid test never fires from a diffpid-component state.
    int b2_diff = prod.tmpl.state_index("b2_Diff");
    int cs_mypid = prod.tmpl.state_index("CS_Mypid");
    REQUIRE(b2_diff >= 0);
    for (const auto& tr : prod.tmpl.transitions)
        CHECK(!(tr.source == b2_diff && tr.target == cs_mypid));
}

TEST_CASE("product without variable uses stays in the diffpid layer") {
    FischerFull f = fischer_full();
    VarBinding none;
    none.variable = "v";
    TaggedTemplate prod = product(f.tmpl(), none);
    // No write ever forces mypid, so only _Diff states are reachable.
    Template pruned = prune_unreachable(add_mutex_guards(prod));
    CHECK(pruned.states.size() == f.tmpl().states.size());
    for (const auto& s : pruned.states)
        CHECK(s.find("_Diff") != std::string::npos);
}

TEST_CASE("product rejects an unannotated variable use") {
    FischerFull f = fischer_full();
    VarBinding b = f.binding();
    b.actions.erase(1);
    CHECK_THROWS_WITH_AS(product(f.tmpl(), b),
                         doctest::Contains("IncompleteBinding"), Error);
}

TEST_CASE("add_mutex_guards excludes tagged states for entering transitions") {
    FischerFull f = fischer_full();
    TaggedTemplate prod = product(f.tmpl(), f.binding());
    Template guarded = add_mutex_guards(prod);

    int b1_diff = guarded.state_index("b1_Diff");
    int b2_mypid = guarded.state_index("b2_Mypid");
    bool found = false;
    for (const auto& tr : guarded.transitions) {
        if (tr.source == b1_diff && tr.target == b2_mypid) {
            found = true;
            const auto& allowed = tr.sync_guard.allowed.at("P");
            for (const auto& tag : prod.tags) CHECK(!allowed.count(tag));
            CHECK(allowed.count("Init_Diff"));
        }
        if (!prod.tags.count(guarded.states[static_cast<std::size_t>(tr.target)]))
            CHECK(tr.sync_guard.is_trivial());
    }
    CHECK(found);

    NetworkSpec abs = wrap(guarded, f.doc.spec);
    CHECK(validate_network(abs).empty());
}

TEST_CASE("add_mutex_guards edge cases") {
    FischerFull f = fischer_full();
    TaggedTemplate untagged{f.tmpl(), {}};
    CHECK(add_mutex_guards(untagged) == f.tmpl());

    TaggedTemplate bad{f.tmpl(), {"Init"}};
    CHECK_THROWS_WITH_AS(add_mutex_guards(bad),
                         doctest::Contains("InitialTagged"), Error);
}

TEST_CASE("prune_unreachable on the Fischer product keeps 6 states") {
    FischerFull f = fischer_full();
    Template guarded = add_mutex_guards(product(f.tmpl(), f.binding()));
    Template pruned = prune_unreachable(guarded);
    CHECK(pruned.states.size() == 6);
    CHECK(pruned.state_index("Init_Mypid") == -1);
    CHECK(pruned.state_index("b1_Mypid") == -1);
    CHECK(prune_unreachable(pruned) == pruned);  // fully connected: identity
}

TEST_CASE("prune_unreachable drops an isolated non-initial state") {
    ModelDocument doc = parse_model(R"(
template T {
  init s;
  state s;
  state island;
  trans s -> s { }
}
system { T: param; }
)");
    Template pruned = prune_unreachable(doc.spec.templates[0]);
    CHECK(pruned.states == std::vector<std::string>{"s"});
}

TEST_CASE("pruning preserves reachability of the surviving states") {
    FischerFull f = fischer_full();
    Template guarded = add_mutex_guards(product(f.tmpl(), f.binding()));
    Template pruned = prune_unreachable(guarded);
    NetworkSpec before =
        close_strict_atoms(prepared(wrap(guarded, f.doc.spec)));
    NetworkSpec after =
        close_strict_atoms(prepared(wrap(pruned, f.doc.spec)));
    for (int n : {1, 2}) {
        SizeVector sizes{n};
        for (const auto& name : pruned.states) {
            GroundFormula ga = ground_atom(
                0, 1, before.templates[0].state_index(name));
            GroundFormula gb =
                ground_atom(0, 1, after.templates[0].state_index(name));
            CHECK(digital_reach(before, sizes, ga) ==
                  digital_reach(after, sizes, gb));
        }
    }
}

TEST_CASE("simulation holds at n = 2 and n = 3") {
    FischerFull f = fischer_full();
    TaggedTemplate prod = product(f.tmpl(), f.binding());
    NetworkSpec abs = wrap(add_mutex_guards(prod), f.doc.spec);
    for (int n : {2, 3}) {
        std::string failure;
        CHECK_MESSAGE(simulation_check(f.tmpl(), f.binding(), abs, n, &failure),
                      failure);
    }
}

TEST_CASE("a broken abstraction is refused with a witness step") {
    FischerFull f = fischer_full();
    TaggedTemplate prod = product(f.tmpl(), f.binding());
    Template guarded = add_mutex_guards(prod);
    // Over-restrict the mutex guard: also exclude b1_Diff, so a concrete
    // write with a peer waiting in b1 has no abstract match.
    for (auto& tr : guarded.transitions)
        if (!tr.sync_guard.is_trivial())
            tr.sync_guard.allowed.at("P").erase("b1_Diff");
    NetworkSpec abs = wrap(guarded, f.doc.spec);
    std::string failure;
    CHECK(!simulation_check(f.tmpl(), f.binding(), abs, 2, &failure));
    CHECK(!failure.empty());
}

TEST_CASE("tag exclusion: at most one instance in the mypid group") {
    FischerFull f = fischer_full();
    TaggedTemplate prod = product(f.tmpl(), f.binding());
    Template guarded = add_mutex_guards(prod);
    NetworkSpec abs = close_strict_atoms(prepared(wrap(guarded, f.doc.spec)));
    for (int n : {2, 3}) {
        CHECK(!digital_reach(abs, {n},
                             both_tagged(abs.templates[0], prod.tags), true));
    }

    // Same invariant on the shipped manually reduced 4-state model.
    NetworkSpec red =
        close_strict_atoms(prepared(load_model("fischer_reduced.pnta").spec));
    std::set<std::string> red_tags{"b2_Mypid", "CS_mypid"};
    for (int n : {2, 3}) {
        CHECK(!digital_reach(red, {n},
                             both_tagged(red.templates[0], red_tags), true));
    }
}

TEST_SUITE_END();
