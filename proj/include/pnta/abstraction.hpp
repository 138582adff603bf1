#ifndef PNTA_ABSTRACTION_HPP
#define PNTA_ABSTRACTION_HPP

#include <map>
#include <set>
#include <string>

#include "pnta/model.hpp"

namespace pnta {

// How a transition interacts with the shared PID variable.
enum class VarAction { WritePid, WriteZero, TestPid, TestNotPid, TestZero };

std::string var_action_str(VarAction a);

// Per-transition annotations of one template's uses of the variable.
// `uses` lists every transition touching the variable; a use without an
// action is what product() rejects as IncompleteBinding.
struct VarBinding {
    std::string variable;
    std::set<int> uses;
    std::map<int, VarAction> actions;

    bool empty() const { return uses.empty() && actions.empty(); }
};

// A template whose "my PID is stored" view-states are marked.
struct TaggedTemplate {
    Template tmpl;
    std::set<std::string> tags;
};

// The process-centric 2-state view of the shared variable: diffpid (initial)
// and mypid, moves in both directions plus self-loops (peer writes that do
// not change the view).
Template pid_view_template();

// Synchronous product P x W. Writes force the view component (v:=PID to
// mypid, v:=0 to diffpid); tests filter by it (v=PID needs mypid, v!=PID and
// v=0 need diffpid — zero reads map to the diffpid view). A peer's overwrite
// appears as a spontaneous mypid->diffpid move in every state. Clock
// machinery is inherited from P; all (s, mypid) states are tagged.
TaggedTemplate product(const Template& p, const VarBinding& binding);

// Conjunctive mutual-exclusion refinement: transitions entering a tagged
// state require every other own-template instance outside the tag set.
Template add_mutex_guards(const TaggedTemplate& t);

// Drops states unreachable in the single-instance graph (guards ignored —
// an over-approximation, so removal is sound) and their transitions.
Template prune_unreachable(const Template& t);

// Oracle-grade check that the abstract single-template network simulates the
// concrete system of n instances of `p` sharing an explicit PID variable.
// Explores the digitized concrete system (with a value holder over {0,1..n})
// and verifies each step is matched by <= 2 abstract steps under the
// per-instance (P-state, view) mapping. Strict constraints are closed
// exactly for integer time first. On failure describes the first
// unsimulated step in *failure.
bool simulation_check(const Template& p, const VarBinding& binding,
                      const NetworkSpec& abstract_spec, int n,
                      std::string* failure = nullptr);

}  // namespace pnta

#endif  // PNTA_ABSTRACTION_HPP
