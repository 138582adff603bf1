#ifndef PNTA_TEXTIO_HPP
#define PNTA_TEXTIO_HPP

#include <map>
#include <string>
#include <vector>

#include "pnta/abstraction.hpp"
#include "pnta/cutoff.hpp"
#include "pnta/model.hpp"
#include "pnta/property.hpp"
#include "pnta/semantics.hpp"

namespace pnta {

// Parsed model file plus the optional shared-variable annotations (the `var`
// statements), keyed by template name.
struct ModelDocument {
    NetworkSpec spec;
    std::map<std::string, VarBinding> bindings;
    std::vector<std::string> warnings;
};

// Grammar:
//   const <name> = <rational>;
//   template <Name> {
//     clocks <c, ...>;            (optional)
//     init <state>;
//     state <s> [inv <convex-constraint>];
//     trans <s> -> <t> { [guard <constraint>;] [reset <c,...>;]
//                        [when <Tmpl> in {<s,...>};]...
//                        [var <v> := pid; | var <v> := 0; | var <v> = pid;
//                         | var <v> != pid; | var <v> = 0;] }
//   }
//   system { <Tmpl>: param; ... }
// An omitted `when` leaves a template unrestricted; a `when` set missing the
// peer's initial state gets it added with a warning.
ModelDocument parse_model(const std::string& text);

// `forall i:P[, j:P] [with i != j] . <Q> <body>` with Q in
// {A,E,Ainf,Einf,Afin,Efin}; body F[~q] sf | G[~q] sf | (sf) U[~q] (sf);
// sf over atoms `state(i)` with ! & | and parentheses.
Property parse_property(const std::string& text, const NetworkSpec& spec);

std::string print_model(const ModelDocument& doc);
std::string print_property(const Property& prop, const NetworkSpec& spec);

// One line per step; times are in source units (engine values divided by
// spec.scale). Lassos end with a cycle marker, deadlocks and divergence with
// their own markers.
std::string emit_trace(const Run& run, const NetworkSpec& spec);

// Per-size verdict table with the cutoff vector and overall verdict.
std::string emit_report(const ParamVerdict& pv, const NetworkSpec& spec,
                        const std::string& engine, double wall_seconds);

std::string sizes_str(const SizeVector& sizes);

}  // namespace pnta

#endif  // PNTA_TEXTIO_HPP
