#ifndef PNTA_MODEL_HPP
#define PNTA_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pnta/errors.hpp"
#include "pnta/rational.hpp"

namespace pnta {

enum class RelOp { Lt, Le, Gt, Ge, Eq };

std::string rel_op_str(RelOp op);
RelOp negate_rel_op(RelOp op);  // ¬(c < q) = c >= q etc.; Eq has no single negation

// One comparison over clocks: `clock ~ bound`, or the diagonal `clock ~ other`.
struct ConstraintAtom {
    int clock = -1;
    int other_clock = -1;  // >= 0 marks a diagonal atom; bound is unused then
    RelOp op = RelOp::Le;
    Rational bound;

    bool is_diagonal() const { return other_clock >= 0; }
    bool operator==(const ConstraintAtom&) const = default;
};

// Expression tree over constraint atoms with ¬/∨/∧ and the constant ⊤.
// `False` is not part of the surface grammar; it arises during normalization.
struct ClockConstraint {
    enum class Kind { True, False, Atom, Not, And, Or };

    Kind kind = Kind::True;
    ConstraintAtom atom;
    std::vector<ClockConstraint> children;

    static ClockConstraint make_true() { return ClockConstraint{}; }
    static ClockConstraint make_false() {
        ClockConstraint c;
        c.kind = Kind::False;
        return c;
    }
    static ClockConstraint make_atom(ConstraintAtom a) {
        ClockConstraint c;
        c.kind = Kind::Atom;
        c.atom = a;
        return c;
    }
    static ClockConstraint make_not(ClockConstraint inner) {
        ClockConstraint c;
        c.kind = Kind::Not;
        c.children.push_back(std::move(inner));
        return c;
    }
    static ClockConstraint make_and(std::vector<ClockConstraint> parts);
    static ClockConstraint make_or(std::vector<ClockConstraint> parts);

    bool is_true() const { return kind == Kind::True; }
    bool operator==(const ClockConstraint&) const = default;
};

// Conjunction of atoms; what the analysis engines consume.
using ConvexConstraint = std::vector<ConstraintAtom>;

// Allowed-state sets per peer template, keyed by template name. A template
// absent from the map leaves its instances unrestricted. The owner instance
// is always exempt from its own template's entry.
struct ConjunctiveGuard {
    std::map<std::string, std::set<std::string>> allowed;

    bool is_trivial() const { return allowed.empty(); }
    bool operator==(const ConjunctiveGuard&) const = default;
};

struct Transition {
    int source = -1;
    ClockConstraint guard;        // clock guard g
    std::vector<int> resets;      // clock indices
    ConjunctiveGuard sync_guard;  // γ
    int target = -1;

    bool operator==(const Transition&) const = default;
};

struct Template {
    std::string name;
    std::vector<std::string> states;
    int initial = 0;
    std::vector<std::string> clocks;
    std::vector<ClockConstraint> invariants;  // indexed by state
    std::vector<Transition> transitions;

    int state_index(const std::string& s) const;  // -1 if unknown
    int clock_index(const std::string& c) const;
    const std::string& initial_name() const { return states[initial]; }
    bool operator==(const Template&) const = default;
};

struct NetworkSpec {
    std::vector<Template> templates;
    std::map<std::string, Rational> constants;
    std::string source;       // where the spec came from, for diagnostics
    std::int64_t scale = 1;   // LCM factor applied by scale_to_integers

    int template_index(const std::string& name) const;  // -1 if unknown
};

// One non-negative instance count per template, pointwise comparable.
using SizeVector = std::vector<int>;

struct Diagnostic {
    std::string where;    // "template/state" style path
    std::string message;
};

// --- core-model operations ---------------------------------------------

// Checks every structural invariant: unique names, ⊤ initial invariants,
// valid state/clock references, non-empty allowed sets containing the peer
// template's initial state, non-negative constants.
std::vector<Diagnostic> validate_network(const NetworkSpec& spec);

// Multiplies every constant by the LCM of all denominators so DBM entries
// stay integral; records the factor in `scale`.
NetworkSpec scale_to_integers(const NetworkSpec& spec);

// Multiplies every constant by `factor` (used to absorb property-bound
// denominators on top of scale_to_integers).
NetworkSpec scale_by(const NetworkSpec& spec, std::int64_t factor);

// Rewrites every transition guard to DNF, splitting a guard with m disjuncts
// into m parallel transitions; invariants must simplify to convex
// conjunctions or NonConvexInvariant is thrown.
NetworkSpec normalize_constraints(const NetworkSpec& spec);

// Rewrites strict atoms to the equivalent closed ones over integer time
// (c > q into c >= q+1, c < q into c <= q-1; c < 0 becomes false). Requires
// an integer-scaled spec; exact for digitized semantics only.
NetworkSpec close_strict_atoms(const NetworkSpec& spec);

// Per-template, per-clock maximum compared constant (0 if never compared).
// Requires an integer-scaled spec.
std::vector<std::vector<std::int64_t>> max_constants(const NetworkSpec& spec);

// --- constraint helpers --------------------------------------------------

// Extracts the atom conjunction of a normalized constraint; throws
// NonConvexInvariant if the tree still contains ∨, and treats an
// unsatisfiable (False) constraint as an error at the caller's `where`.
ConvexConstraint convex_atoms(const ClockConstraint& c, const std::string& where);

// DNF disjuncts of an arbitrary constraint; an empty list means `false`,
// a single empty conjunction means `true`.
std::vector<ConvexConstraint> to_dnf(const ClockConstraint& c);

bool constraint_has_strict_atom(const ClockConstraint& c);
bool constraint_has_diagonal_atom(const ClockConstraint& c);

std::string constraint_str(const ClockConstraint& c, const Template& tmpl);

}  // namespace pnta

#endif  // PNTA_MODEL_HPP
