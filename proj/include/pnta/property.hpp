#ifndef PNTA_PROPERTY_HPP
#define PNTA_PROPERTY_HPP

#include <string>
#include <vector>

#include "pnta/model.hpp"
#include "pnta/rational.hpp"

namespace pnta {

enum class PathQuantifier { A, E, Ainf, Einf, Afin, Efin };
enum class PathOp { F, G, U };

std::string quantifier_str(PathQuantifier q);
bool is_universal(PathQuantifier q);
PathQuantifier dual_quantifier(PathQuantifier q);  // A <-> E within each variant

struct TimeBound {
    RelOp op = RelOp::Ge;
    Rational value;  // q >= 0

    // (>= 0) holds at every position of every path.
    bool is_trivial() const { return op == RelOp::Ge && value.is_zero(); }
    bool operator==(const TimeBound&) const = default;
};

// Boolean combination of `state(indexVar)` atoms.
struct StateFormula {
    enum class Kind { True, Atom, Not, And, Or };

    Kind kind = Kind::True;
    int binder = -1;      // Kind::Atom: index into Property::binders
    int state = -1;       // Kind::Atom: state index in the binder's template
    std::vector<StateFormula> children;

    static StateFormula make_true() { return StateFormula{}; }
    static StateFormula make_atom(int binder, int state) {
        StateFormula f;
        f.kind = Kind::Atom;
        f.binder = binder;
        f.state = state;
        return f;
    }
    static StateFormula make_not(StateFormula inner) {
        StateFormula f;
        f.kind = Kind::Not;
        f.children.push_back(std::move(inner));
        return f;
    }
    static StateFormula make_and(StateFormula a, StateFormula b) {
        StateFormula f;
        f.kind = Kind::And;
        f.children.push_back(std::move(a));
        f.children.push_back(std::move(b));
        return f;
    }
    static StateFormula make_or(StateFormula a, StateFormula b) {
        StateFormula f;
        f.kind = Kind::Or;
        f.children.push_back(std::move(a));
        f.children.push_back(std::move(b));
        return f;
    }
};

struct Binder {
    std::string var;
    int template_index = -1;
};

// Indexed formula: binder conjunction, one path quantifier, one timed
// F/G/U layer over a Boolean state formula.
struct Property {
    std::vector<Binder> binders;
    bool pairwise_distinct = false;  // `with i != j`
    PathQuantifier quantifier = PathQuantifier::E;
    PathOp op = PathOp::F;
    TimeBound bound;
    StateFormula phi;   // F/G body; U left-hand side
    StateFormula psi;   // U right-hand side only
};

// A Property with binders substituted by concrete instance numbers.
// Atoms become (template, instance, state) triples.
struct GroundAtom {
    int template_index = -1;
    int instance = -1;  // 1-based
    int state = -1;
};

struct GroundFormula {
    StateFormula::Kind kind = StateFormula::Kind::True;
    GroundAtom atom;
    std::vector<GroundFormula> children;
};

struct GroundProperty {
    PathQuantifier quantifier = PathQuantifier::E;
    PathOp op = PathOp::F;
    TimeBound bound;
    GroundFormula phi;
    GroundFormula psi;
    std::vector<int> assignment;  // instance per binder, for reporting
};

GroundFormula ground(const StateFormula& f, const Property& prop,
                     const std::vector<int>& assignment);
GroundFormula ground_not(GroundFormula f);

std::string ground_formula_str(const GroundFormula& f, const NetworkSpec& spec);

}  // namespace pnta

#endif  // PNTA_PROPERTY_HPP
