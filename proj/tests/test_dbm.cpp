#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pnta/dbm.hpp"

using namespace pnta;

namespace {

DBM random_zone(std::mt19937_64& rng, int clocks) {
    DBM d = DBM::universal(clocks);
    int atoms = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < atoms; ++k) {
        int row = 1 + static_cast<int>(rng() % clocks);
        std::int64_t v = static_cast<std::int64_t>(rng() % 5);
        switch (rng() % 3) {
            case 0: d.constrain_atom(row, RelOp::Le, v); break;
            case 1: d.constrain_atom(row, RelOp::Ge, v); break;
            default: d.constrain_atom(row, RelOp::Lt, v + 1); break;
        }
    }
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("zones");

TEST_CASE("canonicalize derives transitive bounds") {
    // x <= 2 and y - x <= 1 imply y <= 3.
    DBM d = DBM::universal(2);
    d.set(1, 0, make_bound(2, false));   // x <= 2
    d.set(2, 1, make_bound(1, false));   // y - x <= 1
    d.canonicalize();
    CHECK(d.at(2, 0) == make_bound(3, false));
    CHECK(!d.is_empty());
}

TEST_CASE("canonicalize is idempotent") {
    DBM d = DBM::universal(2);
    d.set(1, 0, make_bound(2, false));
    d.set(2, 1, make_bound(1, false));
    d.canonicalize();
    DBM again = d;
    again.canonicalize();
    CHECK(d == again);
}

TEST_CASE("contradictory bounds empty the zone") {
    DBM d = DBM::universal(1);
    d.constrain_atom(1, RelOp::Le, 1);
    d.constrain_atom(1, RelOp::Ge, 2);
    CHECK(d.is_empty());
}

TEST_CASE("up from the origin keeps clocks equal") {
    DBM d = DBM::zero(2);
    d.up();
    CHECK(d.at(1, 2) == kLeZero);  // x - y <= 0
    CHECK(d.at(2, 1) == kLeZero);  // y - x <= 0
    CHECK(d.at(1, 0) == kBoundInf);
    CHECK(d.at(0, 1) == kLeZero);  // x >= 0
}

TEST_CASE("up preserves differences: {x=1, y=0}") {
    DBM d = DBM::universal(2);
    d.constrain_atom(1, RelOp::Eq, 1);
    d.constrain_atom(2, RelOp::Eq, 0);
    REQUIRE(!d.is_empty());
    d.up();
    CHECK(d.at(1, 2) == make_bound(1, false));
    CHECK(d.at(2, 1) == make_bound(-1, false));
    CHECK(d.at(0, 2) == kLeZero);  // y >= 0
    DBM twice = d;
    twice.up();
    CHECK(twice == d);  // idempotent
}

TEST_CASE("reset zeroes listed clocks and keeps the rest") {
    // {x - y = 1, y >= 0}: reset y -> {y = 0, x >= 1}.
    DBM d = DBM::universal(2);
    d.constrain_atom(1, RelOp::Eq, 1);
    d.constrain_atom(2, RelOp::Eq, 0);
    d.up();
    d.reset({2});
    CHECK(d.at(2, 0) == kLeZero);
    CHECK(d.at(0, 2) == kLeZero);
    CHECK(d.at(0, 1) == make_bound(-1, false));  // x >= 1
    CHECK(d.at(1, 0) == kBoundInf);

    DBM untouched = d;
    untouched.reset({});
    CHECK(untouched == d);

    DBM all = d;
    all.reset({1, 2});
    CHECK(all == DBM::zero(2));
}

TEST_CASE("constrain keeps strictness and detects emptiness") {
    DBM d = DBM::universal(1);
    d.constrain_atom(1, RelOp::Gt, 2);
    CHECK(d.at(0, 1) == make_bound(-2, true));
    DBM e = d;
    e.constrain_atom(1, RelOp::Le, 1);
    CHECK(e.is_empty());
}

TEST_CASE("extrapolate relaxes bounds past the max constant") {
    DBM d = DBM::universal(1);
    d.constrain_atom(1, RelOp::Le, 7);
    d.extrapolate({2});
    CHECK(d.at(1, 0) == kBoundInf);

    DBM small = DBM::universal(1);
    small.constrain_atom(1, RelOp::Le, 2);
    DBM before = small;
    small.extrapolate({2});
    CHECK(small == before);

    DBM lower = DBM::universal(1);
    lower.constrain_atom(1, RelOp::Ge, 5);
    lower.extrapolate({2});
    CHECK(lower.at(0, 1) == make_bound(-2, true));  // x > 2
}

TEST_CASE("permuted relabels rows consistently") {
    DBM d = DBM::universal(2);
    d.constrain_atom(1, RelOp::Le, 1);
    d.constrain_atom(2, RelOp::Le, 3);
    DBM p = d.permuted({0, 2, 1});
    CHECK(p.at(2, 0) == make_bound(1, false));
    CHECK(p.at(1, 0) == make_bound(3, false));
    CHECK(p.permuted({0, 2, 1}) == d);  // involution
}

TEST_CASE("property: membership agrees with sampled points") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        DBM d = random_zone(rng, 3);
        if (d.is_empty()) continue;
        auto pt = d.sample_point();
        CHECK(d.contains(pt));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("property: canonicalization is order-independent") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        // Same atoms in two different orders must land on the same canonical
        // matrix (constrain re-canonicalizes incrementally).
        int row_a = 1 + static_cast<int>(rng() % 2);
        int row_b = 1 + static_cast<int>(rng() % 2);
        std::int64_t va = static_cast<std::int64_t>(rng() % 4);
        std::int64_t vb = static_cast<std::int64_t>(rng() % 4);
        DBM d1 = DBM::universal(2);
        d1.constrain_atom(row_a, RelOp::Le, va);
        d1.constrain_atom(row_b, RelOp::Ge, vb);
        DBM d2 = DBM::universal(2);
        d2.constrain_atom(row_b, RelOp::Ge, vb);
        d2.constrain_atom(row_a, RelOp::Le, va);
        CHECK(d1.is_empty() == d2.is_empty());
        if (!d1.is_empty()) CHECK(d1 == d2);
    }
}

TEST_CASE("property: inclusion is consistent with point membership") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        DBM a = random_zone(rng, 2);
        DBM b = random_zone(rng, 2);
        if (a.is_empty() || b.is_empty()) continue;
        if (a.includes(b)) CHECK(a.contains(b.sample_point()));
        if (b.includes(a)) CHECK(b.contains(a.sample_point()));
    }
}

TEST_CASE("covered_by_union and uncovered_part are exact") {
    DBM whole = DBM::universal(1);
    whole.constrain_atom(1, RelOp::Le, 4);

    DBM left = DBM::universal(1);
    left.constrain_atom(1, RelOp::Le, 2);
    DBM right = DBM::universal(1);
    right.constrain_atom(1, RelOp::Ge, 2);
    right.constrain_atom(1, RelOp::Le, 4);
    CHECK(covered_by_union(whole, {left, right}));

    DBM gap = DBM::universal(1);
    gap.constrain_atom(1, RelOp::Le, 1);
    auto leftover = uncovered_part(whole, {gap});
    REQUIRE(leftover.has_value());
    CHECK(!gap.contains(leftover->sample_point()));
    CHECK(whole.contains(leftover->sample_point()));
}

TEST_SUITE_END();
