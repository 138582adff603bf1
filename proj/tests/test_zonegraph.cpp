#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pnta/lemmalab.hpp"
#include "pnta/zonegraph.hpp"

using namespace pnta;
using namespace pnta_tests;

namespace {

NetworkSpec fischer() {
    return prepared(load_model("fischer_reduced.pnta").spec);
}

}  // namespace

TEST_SUITE_BEGIN("zonegraph");

TEST_CASE("initial symbolic state matches the concrete initial config") {
    NetworkSpec spec = fischer();
    ZoneContext ctx(spec, {2});
    SymState init = ctx.initial();
    CHECK(ctx.state_of(init, 0, 1) == 0);
    CHECK(ctx.state_of(init, 0, 2) == 0);
    CHECK(!init.zone.is_empty());

    // Both zero valuations belong to the delay-closed initial zone, and the
    // clocks stay synchronized (never reset independently yet).
    CHECK(init.zone.contains({Rational(0), Rational(0), Rational(0)}));
    CHECK(init.zone.at(1, 2) == kLeZero);
    CHECK(init.zone.at(2, 1) == kLeZero);
}

TEST_CASE("initial successors mirror the concrete sync successors") {
    NetworkSpec spec = fischer();
    ZoneContext ctx(spec, {2});
    auto edges = ctx.successors(ctx.initial());
    auto concrete = sync_successors(initial_configuration(spec, {2}), spec);
    CHECK(edges.size() == concrete.size());
    CHECK(edges.size() == 2);  // each instance can start Init -> b1
    for (const auto& e : edges) {
        CHECK(e.template_index == 0);
        CHECK(e.transition == 0);
        CHECK(!e.target.zone.is_empty());
    }
}

TEST_CASE("canonicalize is idempotent on explored states") {
    NetworkSpec spec = fischer();
    ZoneContext ctx(spec, {3});
    std::vector<SymState> frontier{ctx.initial()};
    for (int depth = 0; depth < 3; ++depth) {
        std::vector<SymState> next;
        for (const auto& s : frontier)
            for (auto& e : ctx.successors(s)) next.push_back(std::move(e.target));
        frontier = std::move(next);
    }
    REQUIRE(!frontier.empty());
    for (SymState s : frontier) {
        ctx.canonicalize(s);
        SymState again = s;
        ctx.canonicalize(again);
        CHECK(again == s);
    }
}

TEST_CASE("instance permutation induces a successor bijection") {
    NetworkSpec spec = fischer();
    ZoneContext ctx(spec, {2});
    // Walk one asymmetric step so the instances genuinely differ.
    SymState s = ctx.successors(ctx.initial())[0].target;

    SymState swapped;
    swapped.states = {s.states[1], s.states[0]};
    swapped.zone = s.zone.permuted({0, 2, 1});

    auto canon_targets = [&](const SymState& from) {
        std::vector<std::string> out;
        for (auto& e : ctx.successors(from)) {
            SymState t = e.target;
            ctx.canonicalize(t);
            out.push_back(ctx.state_str(t));
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(canon_targets(s) == canon_targets(swapped));
}

TEST_CASE("divergent_idle tracks invariant upper bounds") {
    NetworkSpec spec = fischer();
    ZoneContext ctx(spec, {2});
    SymState init = ctx.initial();
    CHECK(ctx.divergent_idle(init));  // Init_Diff has no invariant

    SymState in_b1 = ctx.successors(init)[0].target;
    REQUIRE(ctx.state_of(in_b1, 0, 1) + ctx.state_of(in_b1, 0, 2) == 1);
    CHECK(!ctx.divergent_idle(in_b1));  // b1_Diff caps its clock at k
}

TEST_CASE("deadlocked_piece finds the stuck valuations") {
    ModelDocument doc = parse_model(R"(
template T {
  clocks c;
  init s;
  state s;
  state t inv c <= 1;
  trans s -> t { reset c; }
}
system { T: param; }
)");
    NetworkSpec spec = prepared(doc.spec);
    ZoneContext ctx(spec, {1});
    SymState init = ctx.initial();
    CHECK(!ctx.deadlocked_piece(init).has_value());  // transition enabled

    SymState stuck = ctx.successors(init)[0].target;
    auto piece = ctx.deadlocked_piece(stuck);
    REQUIRE(piece.has_value());
    // Only c = 1 blocks both delay and (absent) transitions.
    CHECK(piece->contains({Rational(0), Rational(1)}));
    CHECK(!piece->contains({Rational(0), Rational(1, 2)}));

    NetworkSpec fsp = fischer();
    ZoneContext fctx(fsp, {2});
    CHECK(!fctx.deadlocked_piece(fctx.initial()).has_value());
}

TEST_CASE("property: zone reachability agrees with the digitized oracle") {
    GenParams p;
    p.seed = 4242;
    for (int trial = 0; trial < 30; ++trial) {
        p.seed = 4242 + static_cast<std::uint64_t>(trial);
        NetworkSpec spec = prepared(random_spec(p));
        SizeVector sizes(spec.templates.size(), 1);
        sizes[0] = 2;
        int states = static_cast<int>(spec.templates[0].states.size());
        for (int st = 0; st < states; ++st) {
            GroundProperty gp;
            gp.quantifier = PathQuantifier::E;
            gp.op = PathOp::F;
            gp.phi = ground_atom(0, 1, st);
            gp.assignment = {1};
            bool zone = check_ground(spec, sizes, gp).truth;
            bool oracle = digital_check(spec, sizes, gp, true);
            CHECK_MESSAGE(zone == oracle,
                          "seed " << p.seed << " state " << st);
        }
    }
}

TEST_SUITE_END();
