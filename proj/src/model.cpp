#include "pnta/model.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace pnta {

std::string rel_op_str(RelOp op) {
    switch (op) {
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
        case RelOp::Eq: return "=";
    }
    return "?";
}

RelOp negate_rel_op(RelOp op) {
    switch (op) {
        case RelOp::Lt: return RelOp::Ge;
        case RelOp::Le: return RelOp::Gt;
        case RelOp::Gt: return RelOp::Le;
        case RelOp::Ge: return RelOp::Lt;
        case RelOp::Eq: break;
    }
    throw Error(ErrorKind::Internal, "negate_rel_op: Eq must be split by the caller");
}

ClockConstraint ClockConstraint::make_and(std::vector<ClockConstraint> parts) {
    std::vector<ClockConstraint> kept;
    for (auto& p : parts) {
        if (p.kind == Kind::False) return make_false();
        if (p.kind == Kind::True) continue;
        kept.push_back(std::move(p));
    }
    if (kept.empty()) return make_true();
    if (kept.size() == 1) return kept.front();
    ClockConstraint c;
    c.kind = Kind::And;
    c.children = std::move(kept);
    return c;
}

ClockConstraint ClockConstraint::make_or(std::vector<ClockConstraint> parts) {
    std::vector<ClockConstraint> kept;
    for (auto& p : parts) {
        if (p.kind == Kind::True) return make_true();
        if (p.kind == Kind::False) continue;
        kept.push_back(std::move(p));
    }
    if (kept.empty()) return make_false();
    if (kept.size() == 1) return kept.front();
    ClockConstraint c;
    c.kind = Kind::Or;
    c.children = std::move(kept);
    return c;
}

int Template::state_index(const std::string& s) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == s) return static_cast<int>(i);
    return -1;
}

int Template::clock_index(const std::string& c) const {
    for (std::size_t i = 0; i < clocks.size(); ++i)
        if (clocks[i] == c) return static_cast<int>(i);
    return -1;
}

int NetworkSpec::template_index(const std::string& name) const {
    for (std::size_t i = 0; i < templates.size(); ++i)
        if (templates[i].name == name) return static_cast<int>(i);
    return -1;
}

namespace {

void collect_atoms(const ClockConstraint& c, std::vector<ConstraintAtom>& out) {
    if (c.kind == ClockConstraint::Kind::Atom) out.push_back(c.atom);
    for (const auto& ch : c.children) collect_atoms(ch, out);
}

void check_atoms(const Template& tmpl, const ClockConstraint& c,
                 const std::string& where, std::vector<Diagnostic>& diags) {
    std::vector<ConstraintAtom> atoms;
    collect_atoms(c, atoms);
    for (const auto& a : atoms) {
        if (a.clock < 0 || a.clock >= static_cast<int>(tmpl.clocks.size()))
            diags.push_back({where, "constraint references an unknown clock"});
        if (a.is_diagonal() &&
            (a.other_clock >= static_cast<int>(tmpl.clocks.size())))
            diags.push_back({where, "diagonal constraint references an unknown clock"});
        if (!a.is_diagonal() && a.bound.is_negative())
            diags.push_back({where, "constraint constant is negative"});
    }
}

}  // namespace

std::vector<Diagnostic> validate_network(const NetworkSpec& spec) {
    std::vector<Diagnostic> diags;

    std::unordered_set<std::string> tmpl_names;
    for (const auto& t : spec.templates) {
        if (!tmpl_names.insert(t.name).second)
            diags.push_back({t.name, "duplicate template name"});
    }
    for (const auto& [name, value] : spec.constants) {
        if (value.is_negative())
            diags.push_back({name, "constant is negative"});
    }

    for (const auto& t : spec.templates) {
        if (t.states.empty()) {
            diags.push_back({t.name, "template has no states"});
            continue;
        }
        std::unordered_set<std::string> names;
        for (const auto& s : t.states)
            if (!names.insert(s).second)
                diags.push_back({t.name + "/" + s, "duplicate state name"});
        names.clear();
        for (const auto& c : t.clocks)
            if (!names.insert(c).second)
                diags.push_back({t.name + "/" + c, "duplicate clock name"});

        if (t.initial < 0 || t.initial >= static_cast<int>(t.states.size())) {
            diags.push_back({t.name, "initial state out of range"});
            continue;
        }
        if (t.invariants.size() != t.states.size()) {
            diags.push_back({t.name, "invariant map does not cover every state"});
            continue;
        }
        if (!t.invariants[t.initial].is_true())
            diags.push_back({t.name + "/" + t.initial_name(),
                             "initial invariant not true"});
        for (std::size_t s = 0; s < t.states.size(); ++s)
            check_atoms(t, t.invariants[s], t.name + "/" + t.states[s] + "/inv", diags);

        for (std::size_t ti = 0; ti < t.transitions.size(); ++ti) {
            const auto& tr = t.transitions[ti];
            std::string where = t.name + "/trans#" + std::to_string(ti);
            if (tr.source < 0 || tr.source >= static_cast<int>(t.states.size()))
                diags.push_back({where, "unknown source state"});
            if (tr.target < 0 || tr.target >= static_cast<int>(t.states.size()))
                diags.push_back({where, "unknown target state"});
            for (int r : tr.resets)
                if (r < 0 || r >= static_cast<int>(t.clocks.size()))
                    diags.push_back({where, "reset of an unknown clock"});
            check_atoms(t, tr.guard, where + "/guard", diags);

            for (const auto& [peer_name, allowed] : tr.sync_guard.allowed) {
                int pi = spec.template_index(peer_name);
                if (pi < 0) {
                    diags.push_back({where, "guard references unknown template '" +
                                                peer_name + "'"});
                    continue;
                }
                const Template& peer = spec.templates[pi];
                if (allowed.empty()) {
                    diags.push_back({where, "allowed set for '" + peer_name +
                                                "' is empty"});
                    continue;
                }
                for (const auto& s : allowed)
                    if (peer.state_index(s) < 0)
                        diags.push_back({where, "allowed set names unknown state '" +
                                                    s + "' of '" + peer_name + "'"});
                if (!allowed.count(peer.initial_name()))
                    diags.push_back({where, "initial state missing from allowed set "
                                            "for '" + peer_name + "'"});
            }
        }
    }
    return diags;
}

namespace {

ClockConstraint map_bounds(const ClockConstraint& c,
                           const std::function<Rational(const Rational&)>& f) {
    ClockConstraint out = c;
    if (out.kind == ClockConstraint::Kind::Atom && !out.atom.is_diagonal())
        out.atom.bound = f(out.atom.bound);
    for (auto& ch : out.children) ch = map_bounds(ch, f);
    return out;
}

void collect_denominators(const ClockConstraint& c, std::int64_t& l) {
    if (c.kind == ClockConstraint::Kind::Atom && !c.atom.is_diagonal())
        l = lcm64(l, c.atom.bound.den());
    for (const auto& ch : c.children) collect_denominators(ch, l);
}

}  // namespace

NetworkSpec scale_by(const NetworkSpec& spec, std::int64_t factor) {
    if (factor == 1) return spec;
    NetworkSpec out = spec;
    auto f = [factor](const Rational& q) { return q * Rational(factor); };
    for (auto& [name, value] : out.constants) value = f(value);
    for (auto& t : out.templates) {
        for (auto& inv : t.invariants) inv = map_bounds(inv, f);
        for (auto& tr : t.transitions) tr.guard = map_bounds(tr.guard, f);
    }
    out.scale = spec.scale * factor;
    return out;
}

NetworkSpec scale_to_integers(const NetworkSpec& spec) {
    std::int64_t l = 1;
    for (const auto& [name, value] : spec.constants) l = lcm64(l, value.den());
    for (const auto& t : spec.templates) {
        for (const auto& inv : t.invariants) collect_denominators(inv, l);
        for (const auto& tr : t.transitions) collect_denominators(tr.guard, l);
    }
    return scale_by(spec, l);
}

namespace {

// Negation-normal form; equality atoms under ¬ split into < ∨ >.
ClockConstraint to_nnf(const ClockConstraint& c, bool negated) {
    using K = ClockConstraint::Kind;
    switch (c.kind) {
        case K::True:
            return negated ? ClockConstraint::make_false() : ClockConstraint::make_true();
        case K::False:
            return negated ? ClockConstraint::make_true() : ClockConstraint::make_false();
        case K::Atom: {
            if (!negated) return c;
            if (c.atom.op == RelOp::Eq) {
                ConstraintAtom lo = c.atom, hi = c.atom;
                lo.op = RelOp::Lt;
                hi.op = RelOp::Gt;
                return ClockConstraint::make_or(
                    {ClockConstraint::make_atom(lo), ClockConstraint::make_atom(hi)});
            }
            ConstraintAtom a = c.atom;
            a.op = negate_rel_op(a.op);
            return ClockConstraint::make_atom(a);
        }
        case K::Not:
            return to_nnf(c.children.front(), !negated);
        case K::And:
        case K::Or: {
            std::vector<ClockConstraint> parts;
            parts.reserve(c.children.size());
            for (const auto& ch : c.children) parts.push_back(to_nnf(ch, negated));
            bool conj = (c.kind == K::And) != negated;
            return conj ? ClockConstraint::make_and(std::move(parts))
                        : ClockConstraint::make_or(std::move(parts));
        }
    }
    throw Error(ErrorKind::Internal, "to_nnf: unreachable");
}

std::vector<ConvexConstraint> dnf_of_nnf(const ClockConstraint& c) {
    using K = ClockConstraint::Kind;
    switch (c.kind) {
        case K::True:
            return {ConvexConstraint{}};
        case K::False:
            return {};
        case K::Atom:
            return {ConvexConstraint{c.atom}};
        case K::Or: {
            std::vector<ConvexConstraint> out;
            for (const auto& ch : c.children)
                for (auto& d : dnf_of_nnf(ch)) out.push_back(std::move(d));
            return out;
        }
        case K::And: {
            std::vector<ConvexConstraint> acc{ConvexConstraint{}};
            for (const auto& ch : c.children) {
                auto rhs = dnf_of_nnf(ch);
                std::vector<ConvexConstraint> next;
                for (const auto& a : acc)
                    for (const auto& b : rhs) {
                        ConvexConstraint merged = a;
                        merged.insert(merged.end(), b.begin(), b.end());
                        next.push_back(std::move(merged));
                    }
                acc = std::move(next);
            }
            return acc;
        }
        case K::Not:
            break;
    }
    throw Error(ErrorKind::Internal, "dnf_of_nnf: input not in NNF");
}

ClockConstraint from_conjunction(const ConvexConstraint& atoms) {
    std::vector<ClockConstraint> parts;
    parts.reserve(atoms.size());
    for (const auto& a : atoms) parts.push_back(ClockConstraint::make_atom(a));
    return ClockConstraint::make_and(std::move(parts));
}

}  // namespace

std::vector<ConvexConstraint> to_dnf(const ClockConstraint& c) {
    return dnf_of_nnf(to_nnf(c, false));
}

ConvexConstraint convex_atoms(const ClockConstraint& c, const std::string& where) {
    auto dnf = to_dnf(c);
    if (dnf.empty())
        throw Error(ErrorKind::NonConvexInvariant,
                    where + ": constraint is unsatisfiable");
    if (dnf.size() > 1)
        throw Error(ErrorKind::NonConvexInvariant,
                    where + ": constraint is not a convex conjunction");
    return dnf.front();
}

NetworkSpec normalize_constraints(const NetworkSpec& spec) {
    NetworkSpec out = spec;
    for (auto& t : out.templates) {
        for (std::size_t s = 0; s < t.invariants.size(); ++s) {
            auto atoms = convex_atoms(t.invariants[s],
                                      t.name + "/" + t.states[s] + "/inv");
            t.invariants[s] = from_conjunction(atoms);
        }
        std::vector<Transition> split;
        for (const auto& tr : t.transitions) {
            for (const auto& disjunct : to_dnf(tr.guard)) {
                Transition copy = tr;
                copy.guard = from_conjunction(disjunct);
                split.push_back(std::move(copy));
            }
        }
        t.transitions = std::move(split);
    }
    return out;
}

namespace {

ClockConstraint close_atoms(const ClockConstraint& c) {
    ClockConstraint out = c;
    if (out.kind == ClockConstraint::Kind::Atom && !out.atom.is_diagonal()) {
        if (!out.atom.bound.is_integer())
            throw Error(ErrorKind::Internal,
                        "close_strict_atoms requires an integer-scaled spec");
        if (out.atom.op == RelOp::Gt) {
            out.atom.op = RelOp::Ge;
            out.atom.bound = out.atom.bound + Rational(1);
        } else if (out.atom.op == RelOp::Lt) {
            if (out.atom.bound.is_zero()) return ClockConstraint::make_false();
            out.atom.op = RelOp::Le;
            out.atom.bound = out.atom.bound - Rational(1);
        }
    }
    for (auto& ch : out.children) ch = close_atoms(ch);
    return out;
}

}  // namespace

NetworkSpec close_strict_atoms(const NetworkSpec& spec) {
    NetworkSpec out = spec;
    for (auto& t : out.templates) {
        for (auto& inv : t.invariants) inv = close_atoms(inv);
        for (auto& tr : t.transitions) tr.guard = close_atoms(tr.guard);
    }
    return out;
}

std::vector<std::vector<std::int64_t>> max_constants(const NetworkSpec& spec) {
    std::vector<std::vector<std::int64_t>> result;
    for (const auto& t : spec.templates) {
        std::vector<std::int64_t> m(t.clocks.size(), 0);
        std::vector<ConstraintAtom> atoms;
        for (const auto& inv : t.invariants) collect_atoms(inv, atoms);
        for (const auto& tr : t.transitions) collect_atoms(tr.guard, atoms);
        for (const auto& a : atoms) {
            if (a.is_diagonal()) continue;
            if (!a.bound.is_integer())
                throw Error(ErrorKind::Internal,
                            "max_constants requires an integer-scaled spec");
            if (a.clock >= 0 && a.clock < static_cast<int>(m.size()))
                m[a.clock] = std::max(m[a.clock], a.bound.num());
        }
        result.push_back(std::move(m));
    }
    return result;
}

bool constraint_has_strict_atom(const ClockConstraint& c) {
    std::vector<ConstraintAtom> atoms;
    collect_atoms(c, atoms);
    return std::any_of(atoms.begin(), atoms.end(), [](const ConstraintAtom& a) {
        return a.op == RelOp::Lt || a.op == RelOp::Gt;
    });
}

bool constraint_has_diagonal_atom(const ClockConstraint& c) {
    std::vector<ConstraintAtom> atoms;
    collect_atoms(c, atoms);
    return std::any_of(atoms.begin(), atoms.end(),
                       [](const ConstraintAtom& a) { return a.is_diagonal(); });
}

std::string constraint_str(const ClockConstraint& c, const Template& tmpl) {
    using K = ClockConstraint::Kind;
    std::ostringstream os;
    switch (c.kind) {
        case K::True: os << "true"; break;
        case K::False: os << "false"; break;
        case K::Atom: {
            const auto& a = c.atom;
            os << tmpl.clocks.at(a.clock) << " " << rel_op_str(a.op) << " ";
            if (a.is_diagonal())
                os << tmpl.clocks.at(a.other_clock);
            else
                os << a.bound.str();
            break;
        }
        case K::Not:
            os << "!(" << constraint_str(c.children.front(), tmpl) << ")";
            break;
        case K::And:
        case K::Or: {
            const char* sep = c.kind == K::And ? " & " : " | ";
            os << "(";
            for (std::size_t i = 0; i < c.children.size(); ++i) {
                if (i) os << sep;
                os << constraint_str(c.children[i], tmpl);
            }
            os << ")";
            break;
        }
    }
    return os.str();
}

}  // namespace pnta
