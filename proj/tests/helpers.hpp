#ifndef PNTA_TESTS_HELPERS_HPP
#define PNTA_TESTS_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "pnta/checker.hpp"
#include "pnta/cutoff.hpp"
#include "pnta/model.hpp"
#include "pnta/oracle.hpp"
#include "pnta/property.hpp"
#include "pnta/semantics.hpp"
#include "pnta/textio.hpp"

namespace pnta_tests {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(bool(in), "cannot open " << path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string repo_path(const std::string& rel) {
    return std::string(PNTA_SOURCE_DIR) + "/" + rel;
}

inline pnta::ModelDocument load_model(const std::string& name) {
    return pnta::parse_model(read_file(repo_path("models/" + name)));
}

// Fischer's protocol with the strict c > k guards closed for the digitized
// engines (c >= 3 with k = 2); verdict-equivalent over integer time.
inline const char* kFischerClosed = R"(
const k = 2;

template P {
  clocks c;
  init Init_Diff;
  state Init_Diff;
  state b1_Diff inv c <= k;
  state b2_Mypid;
  state CS_mypid;
  trans Init_Diff -> b1_Diff { reset c; when P in {Init_Diff, b1_Diff}; }
  trans b1_Diff -> b2_Mypid { reset c; when P in {Init_Diff, b1_Diff}; }
  trans b2_Mypid -> CS_mypid { guard c >= 3; }
  trans b2_Mypid -> Init_Diff { guard c >= 3; }
  trans CS_mypid -> Init_Diff { }
}

system {
  P: param;
}
)";

// Same preparation the engines apply: integer scaling + DNF normalization.
inline pnta::NetworkSpec prepared(const pnta::NetworkSpec& spec) {
    return pnta::normalize_constraints(pnta::scale_to_integers(spec));
}

// One-binder property `forall i:tmpl . Q op state(i)`.
inline pnta::Property atom_prop(pnta::PathQuantifier q, pnta::PathOp op,
                                int tmpl, int state,
                                pnta::TimeBound bound = {}) {
    pnta::Property p;
    p.binders.push_back({"i", tmpl});
    p.quantifier = q;
    p.op = op;
    p.bound = bound;
    p.phi = pnta::StateFormula::make_atom(0, state);
    if (op == pnta::PathOp::U) p.psi = pnta::StateFormula::make_true();
    return p;
}

inline pnta::GroundProperty ground_at(const pnta::Property& prop,
                                      const std::vector<int>& assignment) {
    pnta::GroundProperty gp;
    gp.quantifier = prop.quantifier;
    gp.op = prop.op;
    gp.bound = prop.bound;
    gp.phi = pnta::ground(prop.phi, prop, assignment);
    if (prop.op == pnta::PathOp::U)
        gp.psi = pnta::ground(prop.psi, prop, assignment);
    gp.assignment = assignment;
    return gp;
}

inline pnta::GroundFormula ground_atom(int tmpl, int instance, int state) {
    pnta::GroundFormula f;
    f.kind = pnta::StateFormula::Kind::Atom;
    f.atom = {tmpl, instance, state};
    return f;
}

}  // namespace pnta_tests

#endif  // PNTA_TESTS_HELPERS_HPP
