#include "pnta/property.hpp"

#include <sstream>

#include "pnta/errors.hpp"

namespace pnta {

std::string quantifier_str(PathQuantifier q) {
    switch (q) {
        case PathQuantifier::A: return "A";
        case PathQuantifier::E: return "E";
        case PathQuantifier::Ainf: return "Ainf";
        case PathQuantifier::Einf: return "Einf";
        case PathQuantifier::Afin: return "Afin";
        case PathQuantifier::Efin: return "Efin";
    }
    return "?";
}

bool is_universal(PathQuantifier q) {
    return q == PathQuantifier::A || q == PathQuantifier::Ainf ||
           q == PathQuantifier::Afin;
}

PathQuantifier dual_quantifier(PathQuantifier q) {
    switch (q) {
        case PathQuantifier::A: return PathQuantifier::E;
        case PathQuantifier::E: return PathQuantifier::A;
        case PathQuantifier::Ainf: return PathQuantifier::Einf;
        case PathQuantifier::Einf: return PathQuantifier::Ainf;
        case PathQuantifier::Afin: return PathQuantifier::Efin;
        case PathQuantifier::Efin: return PathQuantifier::Afin;
    }
    throw Error(ErrorKind::Internal, "dual_quantifier: unreachable");
}

GroundFormula ground(const StateFormula& f, const Property& prop,
                     const std::vector<int>& assignment) {
    GroundFormula g;
    g.kind = f.kind;
    if (f.kind == StateFormula::Kind::Atom) {
        g.atom.template_index = prop.binders.at(f.binder).template_index;
        g.atom.instance = assignment.at(f.binder);
        g.atom.state = f.state;
    }
    for (const auto& ch : f.children) g.children.push_back(ground(ch, prop, assignment));
    return g;
}

GroundFormula ground_not(GroundFormula f) {
    if (f.kind == StateFormula::Kind::Not) return f.children.front();
    GroundFormula g;
    g.kind = StateFormula::Kind::Not;
    g.children.push_back(std::move(f));
    return g;
}

std::string ground_formula_str(const GroundFormula& f, const NetworkSpec& spec) {
    using K = StateFormula::Kind;
    std::ostringstream os;
    switch (f.kind) {
        case K::True: os << "true"; break;
        case K::Atom: {
            const auto& t = spec.templates.at(f.atom.template_index);
            os << t.states.at(f.atom.state) << "(" << t.name << "["
               << f.atom.instance << "])";
            break;
        }
        case K::Not:
            os << "!" << ground_formula_str(f.children.front(), spec);
            break;
        case K::And:
        case K::Or: {
            const char* sep = f.kind == K::And ? " & " : " | ";
            os << "(";
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) os << sep;
                os << ground_formula_str(f.children[i], spec);
            }
            os << ")";
            break;
        }
    }
    return os.str();
}

}  // namespace pnta
