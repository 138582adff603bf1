#ifndef PNTA_CHECKER_HPP
#define PNTA_CHECKER_HPP

#include <memory>
#include <optional>
#include <vector>

#include "pnta/model.hpp"
#include "pnta/property.hpp"
#include "pnta/semantics.hpp"

namespace pnta {

struct CheckStats {
    std::size_t states_explored = 0;
};

// Result of checking one property at one fixed size vector. Binder
// assignments are conjoined: `truth` is the conjunction, and on a false
// verdict `assignment` names a falsifying instantiation. When the engine can
// exhibit a run (witness or counterexample), it is given in engine time
// units against `run_spec` (the scaled, normalized network it replays on);
// run_spec->scale converts back to source units.
struct Verdict {
    bool truth = false;
    std::vector<int> assignment;
    std::optional<Run> run;
    std::shared_ptr<const NetworkSpec> run_spec;
    CheckStats stats;
};

// All binder assignments for `prop` at the given sizes, in lexicographic
// order. Throws TooFewInstances when a bound template has no instance, or
// too few for a pairwise-distinct binder set.
std::vector<std::vector<int>> expand_assignments(const Property& prop,
                                                 const NetworkSpec& spec,
                                                 const SizeVector& sizes);

// Symbolic check of one ground property against a validated source spec.
// Scaling and normalization happen internally.
Verdict check_ground(const NetworkSpec& spec, const SizeVector& sizes,
                     const GroundProperty& prop);

// Checks the indexed property: conjunction over all binder assignments,
// with a shared exploration for the pure reachability forms.
Verdict check(const NetworkSpec& spec, const SizeVector& sizes,
              const Property& prop);

}  // namespace pnta

#endif  // PNTA_CHECKER_HPP
