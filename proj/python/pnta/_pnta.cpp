// Python bindings for the pnta core. Mirrors the CLI's preparation steps
// (integer scaling, bound co-scaling, DNF normalization) so Python callers
// can hand in source-level specs and get source-level answers back.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pnta/abstraction.hpp"
#include "pnta/checker.hpp"
#include "pnta/cutoff.hpp"
#include "pnta/dbm.hpp"
#include "pnta/errors.hpp"
#include "pnta/lemmalab.hpp"
#include "pnta/model.hpp"
#include "pnta/oracle.hpp"
#include "pnta/property.hpp"
#include "pnta/semantics.hpp"
#include "pnta/textio.hpp"

namespace py = pybind11;
using namespace pnta;

namespace {

const char* error_kind_str(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::NonConvexInvariant: return "NonConvexInvariant";
        case ErrorKind::StrictConstraintUnsupported:
            return "StrictConstraintUnsupported";
        case ErrorKind::DiagonalUnsupported: return "DiagonalUnsupported";
        case ErrorKind::TooFewInstances: return "TooFewInstances";
        case ErrorKind::UnsupportedQuantifierOperator:
            return "UnsupportedQuantifierOperator";
        case ErrorKind::BoundUnsupported: return "BoundUnsupported";
        case ErrorKind::IncompleteBinding: return "IncompleteBinding";
        case ErrorKind::InitialTagged: return "InitialTagged";
        case ErrorKind::InvariantViolated: return "InvariantViolated";
        case ErrorKind::Internal: return "Internal";
    }
    return "Internal";
}

RelOp rel_op_from_str(const std::string& s) {
    if (s == "<") return RelOp::Lt;
    if (s == "<=") return RelOp::Le;
    if (s == ">") return RelOp::Gt;
    if (s == ">=") return RelOp::Ge;
    if (s == "=" || s == "==") return RelOp::Eq;
    throw Error(ErrorKind::Parse, "unknown relational operator '" + s + "'");
}

Rational rational_from_str(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)),
                        std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    }
}

// Scaling/normalization shared by the discrete-oracle entry points: the same
// preparation the engines apply internally, with the property bound co-scaled.
NetworkSpec prepare(const NetworkSpec& spec, TimeBound* bound) {
    NetworkSpec scaled = scale_to_integers(spec);
    if (bound && !bound->is_trivial()) {
        Rational v = bound->value * Rational(scaled.scale);
        if (!v.is_integer()) {
            scaled = scale_by(scaled, v.den());
            v = v * Rational(v.den());
        }
        bound->value = v;
    }
    return normalize_constraints(scaled);
}

// Conjunction over all binder assignments on the discrete oracle, matching
// the CLI's --engine discrete path.
bool py_discrete_check(const NetworkSpec& spec, const SizeVector& sizes,
                       const Property& prop, bool nonzeno) {
    TimeBound bound = prop.bound;
    NetworkSpec ready = prepare(spec, &bound);
    for (const auto& assignment : expand_assignments(prop, ready, sizes)) {
        GroundProperty gp;
        gp.quantifier = prop.quantifier;
        gp.op = prop.op;
        gp.bound = bound;
        gp.phi = ground(prop.phi, prop, assignment);
        if (prop.op == PathOp::U) gp.psi = ground(prop.psi, prop, assignment);
        gp.assignment = assignment;
        if (!digital_check(ready, sizes, gp, true, nonzeno)) return false;
    }
    return true;
}

struct PyReach {
    bool reachable = false;
    std::optional<std::string> trace;
};

PyReach py_discrete_reach(const NetworkSpec& spec, const SizeVector& sizes,
                          const GroundFormula& goal,
                          std::optional<std::pair<std::string, std::string>> bound) {
    std::optional<TimeBound> tb;
    TimeBound scaled_bound;
    if (bound) {
        scaled_bound.op = rel_op_from_str(bound->first);
        scaled_bound.value = rational_from_str(bound->second);
        tb = scaled_bound;
    }
    NetworkSpec ready = prepare(spec, tb ? &*tb : nullptr);
    DiscreteReach r = discrete_reach(ready, sizes, goal, tb);
    PyReach out;
    out.reachable = r.reachable;
    if (r.witness) out.trace = emit_trace(*r.witness, ready);
    return out;
}

RunClassification py_classify_runs(const NetworkSpec& spec,
                                   const SizeVector& sizes,
                                   const GroundFormula& avoid) {
    NetworkSpec ready = prepare(spec, nullptr);
    return classify_runs(ready, sizes, avoid);
}

std::string verdict_trace(const Verdict& v) {
    if (!v.run || !v.run_spec) return {};
    return emit_trace(*v.run, *v.run_spec);
}

}  // namespace

PYBIND11_MODULE(_pnta, m) {
    m.doc() = "Parameterized timed model checker for conjunctive "
              "timed-automaton networks";

    static py::exception<Error> exc(m, "PntaError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object type = py::reinterpret_borrow<py::object>(exc.ptr());
            py::object inst = type(e.what());
            inst.attr("kind") = error_kind_str(e.kind());
            inst.attr("engine_limitation") = e.is_engine_limitation();
            PyErr_SetObject(exc.ptr(), inst.ptr());
        }
    });

    // --- core model ---------------------------------------------------
    py::class_<Rational>(m, "Rational")
        .def(py::init<std::int64_t>())
        .def(py::init<std::int64_t, std::int64_t>())
        .def_property_readonly("num", &Rational::num)
        .def_property_readonly("den", &Rational::den)
        .def("__float__",
             [](const Rational& r) {
                 return static_cast<double>(r.num()) / static_cast<double>(r.den());
             })
        .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; })
        .def("__repr__", [](const Rational& r) { return r.str(); })
        .def("__str__", [](const Rational& r) { return r.str(); });

    py::class_<Template>(m, "Template")
        .def_readonly("name", &Template::name)
        .def_readonly("states", &Template::states)
        .def_readonly("initial", &Template::initial)
        .def_readonly("clocks", &Template::clocks)
        .def_property_readonly("num_transitions",
                               [](const Template& t) { return t.transitions.size(); })
        .def("state_index", &Template::state_index)
        .def("__repr__", [](const Template& t) {
            return "<Template " + t.name + ": " +
                   std::to_string(t.states.size()) + " states>";
        });

    py::class_<NetworkSpec>(m, "NetworkSpec")
        .def_readonly("templates", &NetworkSpec::templates)
        .def_readonly("scale", &NetworkSpec::scale)
        .def_property_readonly("constants",
                               [](const NetworkSpec& s) { return s.constants; })
        .def("template_index", &NetworkSpec::template_index);

    py::class_<VarBinding>(m, "VarBinding")
        .def_readonly("variable", &VarBinding::variable)
        .def("__repr__", [](const VarBinding& b) {
            return "<VarBinding " + b.variable + ", " +
                   std::to_string(b.uses.size()) + " uses>";
        });

    py::class_<ModelDocument>(m, "ModelDocument")
        .def_readonly("spec", &ModelDocument::spec)
        .def_readonly("warnings", &ModelDocument::warnings)
        .def_readonly("bindings", &ModelDocument::bindings);

    py::class_<Diagnostic>(m, "Diagnostic")
        .def_readonly("where", &Diagnostic::where)
        .def_readonly("message", &Diagnostic::message)
        .def("__repr__", [](const Diagnostic& d) {
            return d.where + ": " + d.message;
        });

    m.def("parse_model", &parse_model, py::arg("text"));
    m.def("print_model", &print_model, py::arg("doc"));
    m.def("validate_network", &validate_network, py::arg("spec"));
    m.def("scale_to_integers", &scale_to_integers, py::arg("spec"));
    m.def("scale_by", &scale_by, py::arg("spec"), py::arg("factor"));
    m.def("normalize_constraints", &normalize_constraints, py::arg("spec"));
    m.def("close_strict_atoms", &close_strict_atoms, py::arg("spec"));
    m.def("max_constants", &max_constants, py::arg("spec"));

    // --- properties -----------------------------------------------------
    py::enum_<PathQuantifier>(m, "PathQuantifier")
        .value("A", PathQuantifier::A)
        .value("E", PathQuantifier::E)
        .value("Ainf", PathQuantifier::Ainf)
        .value("Einf", PathQuantifier::Einf)
        .value("Afin", PathQuantifier::Afin)
        .value("Efin", PathQuantifier::Efin);
    py::enum_<PathOp>(m, "PathOp")
        .value("F", PathOp::F)
        .value("G", PathOp::G)
        .value("U", PathOp::U);

    py::class_<Property>(m, "Property")
        .def_readonly("quantifier", &Property::quantifier)
        .def_readonly("op", &Property::op)
        .def_readonly("pairwise_distinct", &Property::pairwise_distinct)
        .def_property_readonly("num_binders", [](const Property& p) {
            return p.binders.size();
        });

    py::class_<GroundFormula>(m, "GroundFormula");

    m.def("parse_property", &parse_property, py::arg("text"), py::arg("spec"));
    m.def("print_property", &print_property, py::arg("prop"), py::arg("spec"));
    m.def(
        "ground_formula",
        [](const Property& prop, const std::vector<int>& assignment) {
            return ground(prop.phi, prop, assignment);
        },
        py::arg("prop"), py::arg("assignment"),
        "Instantiate the property's state formula at a binder assignment");
    m.def("ground_not", &ground_not, py::arg("formula"));
    m.def("ground_formula_str", &ground_formula_str, py::arg("formula"),
          py::arg("spec"));

    // --- semantics -------------------------------------------------------
    py::enum_<RunClass>(m, "RunClass")
        .value("Infinite", RunClass::Infinite)
        .value("Deadlocked", RunClass::Deadlocked)
        .value("FinitePrefix", RunClass::FinitePrefix);

    py::class_<Configuration>(m, "Configuration")
        .def("__eq__", [](const Configuration& a, const Configuration& b) {
            return a == b;
        })
        .def("size_of", &Configuration::size_of)
        .def("state_of",
             [](const Configuration& c, int t, int instance) {
                 return c.inst.at(static_cast<std::size_t>(t))
                     .at(static_cast<std::size_t>(instance - 1))
                     .state;
             },
             py::arg("template_index"), py::arg("instance"),
             "Current state index of a 1-based instance");

    py::class_<Run>(m, "Run")
        .def_property_readonly("klass", [](const Run& r) { return r.klass; })
        .def_property_readonly("num_steps",
                               [](const Run& r) { return r.steps.size(); })
        .def_readonly("cycle_start", &Run::cycle_start);

    m.def("initial_configuration", &initial_configuration, py::arg("spec"),
          py::arg("sizes"));
    m.def("delay_successor", &delay_successor, py::arg("config"),
          py::arg("spec"), py::arg("d"));
    m.def("admissible_delay", &admissible_delay, py::arg("config"),
          py::arg("spec"));
    m.def(
        "sync_successors",
        [](const Configuration& c, const NetworkSpec& spec) {
            std::vector<std::tuple<int, int, int, Configuration>> out;
            for (auto& s : sync_successors(c, spec))
                out.emplace_back(s.template_index, s.instance, s.transition,
                                 std::move(s.config));
            return out;
        },
        py::arg("config"), py::arg("spec"),
        "List of (template_index, instance, transition, configuration)");
    m.def("is_deadlocked", &is_deadlocked, py::arg("config"), py::arg("spec"));
    m.def("replay_run", &replay_run, py::arg("run"), py::arg("spec"),
          "None when the run replays exactly, else an error description");

    py::class_<PyReach>(m, "DiscreteReach")
        .def_readonly("reachable", &PyReach::reachable)
        .def_readonly("trace", &PyReach::trace);
    py::class_<RunClassification>(m, "RunClassification")
        .def_readonly("has_infinite_avoiding",
                      &RunClassification::has_infinite_avoiding)
        .def_readonly("has_deadlocked_avoiding",
                      &RunClassification::has_deadlocked_avoiding);

    m.def("discrete_reach", &py_discrete_reach, py::arg("spec"),
          py::arg("sizes"), py::arg("goal"), py::arg("bound") = std::nullopt,
          "Digitized reachability of a ground formula; bound is an optional "
          "(op, value) pair like ('<=', '3')");
    m.def("classify_runs", &py_classify_runs, py::arg("spec"), py::arg("sizes"),
          py::arg("avoid"),
          "Existence of infinite / deadlocked maximal runs confined to the "
          "region satisfying `avoid`");
    m.def("discrete_check", &py_discrete_check, py::arg("spec"),
          py::arg("sizes"), py::arg("prop"), py::arg("nonzeno") = false,
          "Property truth at one size on the digitized oracle");

    // --- zones -------------------------------------------------------------
    py::class_<DBM>(m, "DBM")
        .def(py::init<int>(), py::arg("num_clocks"))
        .def_static("zero", &DBM::zero, py::arg("num_clocks"))
        .def_static("universal", &DBM::universal, py::arg("num_clocks"))
        .def_property_readonly("num_clocks", &DBM::num_clocks)
        .def_property_readonly("empty", &DBM::is_empty)
        .def("canonicalize", &DBM::canonicalize)
        .def("up", &DBM::up)
        .def("reset", &DBM::reset, py::arg("clock_rows"))
        .def(
            "constrain",
            [](DBM& d, int row, const std::string& op, std::int64_t q) {
                d.constrain_atom(row, rel_op_from_str(op), q);
            },
            py::arg("row"), py::arg("op"), py::arg("value"),
            "Intersect with `clock_row op value` (1-based row)")
        .def("extrapolate", &DBM::extrapolate, py::arg("max_const"))
        .def("includes", &DBM::includes, py::arg("other"))
        .def("is_unbounded", &DBM::is_unbounded)
        .def("sample_point",
             [](const DBM& d) {
                 std::vector<double> out;
                 for (const auto& r : d.sample_point())
                     out.push_back(static_cast<double>(r.num()) /
                                   static_cast<double>(r.den()));
                 return out;
             })
        .def("__eq__", [](const DBM& a, const DBM& b) { return a == b; });

    // --- checker / cutoff ---------------------------------------------------
    py::class_<Verdict>(m, "Verdict")
        .def_readonly("truth", &Verdict::truth)
        .def_readonly("assignment", &Verdict::assignment)
        .def_property_readonly("states_explored",
                               [](const Verdict& v) {
                                   return v.stats.states_explored;
                               })
        .def_property_readonly("trace", &verdict_trace,
                               "Witness/counterexample trace, '' when absent");

    py::class_<CutoffVector>(m, "CutoffVector")
        .def_readonly("sizes", &CutoffVector::sizes)
        .def_readonly("reasons", &CutoffVector::reasons);

    py::class_<ParamVerdict>(m, "ParamVerdict")
        .def_readonly("truth", &ParamVerdict::truth)
        .def_readonly("cutoff", &ParamVerdict::cutoff)
        .def_readonly("checked", &ParamVerdict::checked)
        .def_readonly("failures", &ParamVerdict::failures)
        .def_readonly("detail", &ParamVerdict::detail);

    m.def("check", &check, py::arg("spec"), py::arg("sizes"), py::arg("prop"),
          "Zone-engine verdict of an indexed property at one size");
    m.def("expand_assignments", &expand_assignments, py::arg("prop"),
          py::arg("spec"), py::arg("sizes"));
    m.def("compute_cutoff", &compute_cutoff, py::arg("spec"), py::arg("prop"));
    m.def("minimum_sizes", &minimum_sizes, py::arg("spec"), py::arg("prop"));
    m.def("enumerate_sizes", &enumerate_sizes, py::arg("lo"), py::arg("hi"));
    m.def("parameterized_check", &parameterized_check, py::arg("spec"),
          py::arg("prop"), py::arg("fail_fast") = true);
    m.def("emit_report", &emit_report, py::arg("verdict"), py::arg("spec"),
          py::arg("engine"), py::arg("wall_seconds"));
    m.def("sizes_str", &sizes_str, py::arg("sizes"));

    // --- abstraction ---------------------------------------------------------
    py::class_<TaggedTemplate>(m, "TaggedTemplate")
        .def_readonly("tmpl", &TaggedTemplate::tmpl)
        .def_readonly("tags", &TaggedTemplate::tags);

    m.def("pid_view_template", &pid_view_template);
    m.def("product", &product, py::arg("tmpl"), py::arg("binding"));
    m.def("add_mutex_guards", &add_mutex_guards, py::arg("tagged"));
    m.def("prune_unreachable", &prune_unreachable, py::arg("tmpl"));
    m.def(
        "simulation_check",
        [](const Template& p, const VarBinding& binding,
           const NetworkSpec& abstract_spec, int n) {
            std::string failure;
            bool ok = simulation_check(p, binding, abstract_spec, n, &failure);
            return std::make_pair(ok, failure);
        },
        py::arg("tmpl"), py::arg("binding"), py::arg("abstract_spec"),
        py::arg("n"), "(holds, first unsimulated step or '')");

    // --- lemma lab -------------------------------------------------------------
    py::class_<GenParams>(m, "GenParams")
        .def(py::init<>())
        .def_readwrite("seed", &GenParams::seed)
        .def_readwrite("max_states", &GenParams::max_states)
        .def_readwrite("max_clocks", &GenParams::max_clocks)
        .def_readwrite("max_const", &GenParams::max_const)
        .def_readwrite("transition_density", &GenParams::transition_density)
        .def_readwrite("guard_restriction_prob",
                       &GenParams::guard_restriction_prob)
        .def_readwrite("num_templates", &GenParams::num_templates);

    py::class_<LemmaViolation>(m, "LemmaViolation")
        .def_readonly("seed", &LemmaViolation::seed)
        .def_readonly("spec_text", &LemmaViolation::spec_text)
        .def_readonly("property", &LemmaViolation::property)
        .def_readonly("premise_sizes", &LemmaViolation::premise_sizes)
        .def_readonly("conclusion_sizes", &LemmaViolation::conclusion_sizes);

    py::class_<LemmaReport>(m, "LemmaReport")
        .def_readonly("suite", &LemmaReport::suite)
        .def_readonly("trials", &LemmaReport::trials)
        .def_readonly("seed", &LemmaReport::seed)
        .def_readonly("violations", &LemmaReport::violations)
        .def("text", &LemmaReport::text);

    m.def("random_spec", &random_spec, py::arg("params"));
    m.def("run_suite", &run_suite, py::arg("suite"), py::arg("params"),
          py::arg("trials"));

    m.def("emit_trace", &emit_trace, py::arg("run"), py::arg("spec"));
}
