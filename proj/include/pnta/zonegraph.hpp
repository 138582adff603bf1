#ifndef PNTA_ZONEGRAPH_HPP
#define PNTA_ZONEGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnta/dbm.hpp"
#include "pnta/model.hpp"
#include "pnta/property.hpp"

namespace pnta {

// Discrete state vector plus one global zone over the disjoint union of all
// instances' clocks (delay is global, so a single matrix captures it exactly).
struct SymState {
    std::vector<std::uint8_t> states;
    DBM zone;

    bool operator==(const SymState& o) const {
        return states == o.states && zone == o.zone;
    }
    std::size_t hash() const;
};

struct ZoneEdge {
    int template_index = -1;
    int instance = -1;  // 1-based
    int transition = -1;
    DBM entry_zone;  // post-reset, pre-delay-closure (the moment of entry)
    SymState target;
};

// Symbolic engine context for one concrete instantiation. Requires a
// validated, integer-scaled, normalized spec; rejects diagonal constraints
// up front (max-constant extrapolation is unsound with them).
class ZoneContext {
public:
    // formula_clock_bound: when set, one extra never-reset clock z is tracked
    // for the property bound; its max constant is the bound value.
    ZoneContext(const NetworkSpec& spec, const SizeVector& sizes,
                std::optional<std::int64_t> formula_clock_bound = std::nullopt);

    const NetworkSpec& spec() const { return *spec_; }
    const SizeVector& sizes() const { return sizes_; }
    int num_clocks() const { return num_clocks_; }
    bool has_formula_clock() const { return z_row_ > 0; }
    int formula_clock_row() const { return z_row_; }

    SymState initial() const;
    std::vector<ZoneEdge> successors(const SymState& s) const;

    // 1-based DBM row of clock c of instance i (1-based) of template t.
    int clock_row(int t, int instance, int clock) const;

    int state_of(const SymState& s, int t, int instance) const;
    const ConvexConstraint& invariant_atoms(int t, int state) const {
        return resolved_[static_cast<std::size_t>(t)]
            .invariants[static_cast<std::size_t>(state)];
    }
    const ConvexConstraint& guard_atoms(int t, int transition) const {
        return resolved_[static_cast<std::size_t>(t)]
            .transitions[static_cast<std::size_t>(transition)].guard;
    }
    bool eval(const GroundFormula& f, const std::vector<std::uint8_t>& states) const;

    // zone ∩ (z ~ q) non-empty; trivially true without a formula clock.
    bool bound_satisfiable(const DBM& zone, const TimeBound& bound) const;
    void constrain_bound(DBM& zone, const TimeBound& bound) const;

    // Reorders each template's instances (and their DBM rows) into a
    // canonical order. Instances of a template are interchangeable, so the
    // result is reachability-equivalent up to an instance permutation;
    // callers quotienting by this must treat ground formulas accordingly.
    void canonicalize(SymState& s) const;

    // No invariant of any occupied state upper-bounds a clock: time can
    // diverge while idling here.
    bool divergent_idle(const SymState& s) const;

    // A convex set of deadlocked valuations inside s (no admissible delay,
    // no enabled transition), or nullopt if none exist.
    std::optional<DBM> deadlocked_piece(const SymState& s) const;

    std::string state_str(const SymState& s) const;

private:
    struct ResolvedTransition {
        int source = -1;
        int target = -1;
        int index = -1;  // position in the template's transition list
        ConvexConstraint guard;
        std::vector<int> resets;  // clock indices within the template
        // allowed[h]: per-state admission for template h; empty = unrestricted
        std::vector<std::vector<char>> allowed;
    };
    struct ResolvedTemplate {
        std::vector<ConvexConstraint> invariants;
        std::vector<ResolvedTransition> transitions;
    };

    bool sync_guard_holds(const std::vector<std::uint8_t>& states,
                          const ResolvedTransition& tr, int owner_t,
                          int owner_i) const;
    void intersect_invariants(DBM& zone,
                              const std::vector<std::uint8_t>& states) const;
    void close_and_extrapolate(DBM& zone,
                               const std::vector<std::uint8_t>& states) const;

    const NetworkSpec* spec_;
    SizeVector sizes_;
    std::vector<ResolvedTemplate> resolved_;
    std::vector<int> offset_;      // statevec offset per template
    std::vector<int> clock_base_;  // first DBM row per template block
    int num_clocks_ = 0;
    int z_row_ = 0;  // 0 = none
    std::vector<std::int64_t> max_const_;  // per DBM row (1-based, minus 1)
};

}  // namespace pnta

#endif  // PNTA_ZONEGRAPH_HPP
