#ifndef PNTA_ORACLE_HPP
#define PNTA_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pnta/model.hpp"
#include "pnta/property.hpp"
#include "pnta/semantics.hpp"

namespace pnta {

// Flattened digital configuration: per instance its state followed by its
// capped integer clock values, then the formula clock (if tracked).
using DigitalNode = std::vector<std::int32_t>;

struct DigitalNodeHash {
    std::size_t operator()(const DigitalNode& n) const {
        std::size_t h = 1469598103934665603ull;
        for (std::int32_t v : n) {
            h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Digitized semantics: delays advance all clocks by exactly 1, each clock is
// capped one past its maximum compared constant. Exact for closed (non-strict)
// constraints; strict atoms are rejected with StrictConstraintUnsupported.
// A delay self-loop at a fully capped node stands for time divergence.
//
// When protected_counts is non-empty, instances above the protected prefix of
// each template are sorted into canonical order — a sound quotient because
// unreferenced instances are interchangeable. An empty protected_counts means
// no quotient at all: every instance keeps its identity.
class DigitalContext {
public:
    DigitalContext(const NetworkSpec& spec, const SizeVector& sizes,
                   std::optional<std::int64_t> z_bound = std::nullopt,
                   std::vector<int> protected_counts = {});

    const NetworkSpec& spec() const { return *spec_; }
    bool has_z() const { return z_slot_ >= 0; }

    // Which edge produced a successor: a unit delay, or one sync transition.
    struct DigitalStep {
        bool delay = false;
        int template_index = -1, instance = -1;  // instance is 1-based
        int transition = -1;
    };

    DigitalNode initial() const;
    std::vector<DigitalNode> successors(const DigitalNode& n) const;
    // Successors paired with the step that produced them. Under a symmetry
    // quotient the step describes the pre-canonicalization action only.
    std::vector<std::pair<DigitalStep, DigitalNode>> labeled_successors(
        const DigitalNode& n) const;
    bool is_deadlock(const DigitalNode& n) const;

    bool eval(const GroundFormula& f, const DigitalNode& n) const;
    bool bound_holds(const DigitalNode& n, const TimeBound& bound) const;

    void canonicalize(DigitalNode& n) const;

private:
    struct Slot {
        int base = 0;       // first index of instance block
        int num_clocks = 0; // block length = 1 + num_clocks
    };

    bool invariant_holds(const DigitalNode& n, int t, int i, int state,
                         int clock_shift) const;
    bool delay_allowed(const DigitalNode& n) const;

    const NetworkSpec* spec_;
    SizeVector sizes_;
    std::vector<int> protected_;
    std::vector<Slot> slot_;  // per template: base of instance 1's block
    std::vector<std::vector<ConvexConstraint>> inv_;     // [tmpl][state]
    std::vector<std::vector<ConvexConstraint>> guard_;   // [tmpl][trans]
    std::vector<std::vector<std::vector<std::vector<char>>>> allowed_;
    std::vector<std::vector<std::int32_t>> cap_;  // [tmpl][clock]
    int z_slot_ = -1;
    std::int32_t z_cap_ = 0;
};

// Ground-property truth on the digitized graph; the independent oracle the
// test suite and the lemma lab compare the symbolic engine against. Requires
// a validated, integer-scaled, normalized spec with closed constraints.
//
// nonzeno restricts the infinite-run quantifiers Einf/Ainf to time-divergent
// runs (the witnessing cycle must contain a delay step); it is rejected for
// the other quantifiers.
bool digital_check(const NetworkSpec& spec, const SizeVector& sizes,
                   const GroundProperty& prop, bool symmetry = false,
                   bool nonzeno = false);

// Reachability of a ground formula, ignoring bounds — convenience wrapper.
bool digital_reach(const NetworkSpec& spec, const SizeVector& sizes,
                   const GroundFormula& goal, bool symmetry = false);

// Bounded reachability with a concrete, replayable witness. Runs on the
// digitized graph (same preconditions as digital_check); the witness is
// rebuilt under exact rational semantics, with consecutive delays merged.
struct DiscreteReach {
    bool reachable = false;
    std::optional<Run> witness;  // absent when unreachable
};
DiscreteReach discrete_reach(const NetworkSpec& spec, const SizeVector& sizes,
                             const GroundFormula& target,
                             std::optional<TimeBound> bound = std::nullopt);

// Classifies maximal runs confined to the region satisfying `avoid` (the
// formula names the allowed region, i.e. what the run is avoiding is its
// complement): is there an infinite one, and is there one ending in a
// deadlock? Same preconditions as digital_check.
struct RunClassification {
    bool has_infinite_avoiding = false;
    bool has_deadlocked_avoiding = false;
};
RunClassification classify_runs(const NetworkSpec& spec, const SizeVector& sizes,
                                const GroundFormula& avoid);

}  // namespace pnta

#endif  // PNTA_ORACLE_HPP
