#ifndef PNTA_CUTOFF_HPP
#define PNTA_CUTOFF_HPP

#include <string>
#include <vector>

#include "pnta/checker.hpp"
#include "pnta/model.hpp"
#include "pnta/property.hpp"

namespace pnta {

// Per-template cutoff with a note on how each entry was derived.
struct CutoffVector {
    SizeVector sizes;
    std::vector<std::string> reasons;
};

// Cutoff table, by path quantifier:
//   Ainf/Einf: 2 when the template carries a binder, else 1
//   Afin/Efin: 1
//   A/E:       2*|states| + 1 when the template carries a binder,
//              else 2*|states|
CutoffVector compute_cutoff(const NetworkSpec& spec, const Property& prop);

// Smallest size vector the property can be instantiated at: one instance per
// template, more when pairwise-distinct binders demand it.
SizeVector minimum_sizes(const NetworkSpec& spec, const Property& prop);

// Every size vector between `lo` and `hi` pointwise (hi clamped up to lo).
std::vector<SizeVector> enumerate_sizes(const SizeVector& lo, const SizeVector& hi);

struct ParamVerdict {
    bool truth = true;
    CutoffVector cutoff;
    std::vector<SizeVector> checked;
    std::vector<SizeVector> failures;
    Verdict detail;  // verdict at the first failing size, or the last checked
};

// Decides the property for every system size by checking all instantiations
// up to the cutoff. With fail_fast the sweep stops at the first violation.
ParamVerdict parameterized_check(const NetworkSpec& spec, const Property& prop,
                                 bool fail_fast = true);

}  // namespace pnta

#endif  // PNTA_CUTOFF_HPP
