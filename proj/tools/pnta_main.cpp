#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pnta/abstraction.hpp"
#include "pnta/checker.hpp"
#include "pnta/cutoff.hpp"
#include "pnta/errors.hpp"
#include "pnta/lemmalab.hpp"
#include "pnta/oracle.hpp"
#include "pnta/textio.hpp"

namespace {

using namespace pnta;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Property arguments may be a file path or the property text itself.
std::string read_property_arg(const std::string& arg) {
    std::ifstream in(arg);
    if (in) {
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
    return arg;
}

SizeVector parse_sizes(const std::string& text, std::size_t num_templates) {
    SizeVector sizes;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            sizes.push_back(std::stoi(part));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Parse, "bad --sizes entry '" + part + "'");
        }
        if (sizes.back() < 0)
            throw Error(ErrorKind::Parse, "negative size in --sizes");
    }
    if (sizes.size() != num_templates)
        throw Error(ErrorKind::Parse,
                    "--sizes needs one entry per template (" +
                        std::to_string(num_templates) + ")");
    return sizes;
}

void warn(const ModelDocument& doc) {
    for (const auto& w : doc.warnings) std::cerr << "warning: " << w << "\n";
}

void require_imitl(const Property& prop, bool strict) {
    if (strict && prop.bound.op == RelOp::Eq)
        throw Error(ErrorKind::UnsupportedQuantifierOperator,
                    "equality time bounds (U_{=q} style) are outside IMITL; "
                    "rerun without --imitl-strict to allow them");
}

// Discrete-oracle path: same scaling/normalization as the symbolic engine,
// then the digitized graph decides each ground instance.
bool discrete_check(const NetworkSpec& spec, const SizeVector& sizes,
                    const Property& prop, std::vector<int>* falsifier,
                    bool nonzeno = false) {
    NetworkSpec scaled = scale_to_integers(spec);
    TimeBound bound = prop.bound;
    if (!bound.is_trivial()) {
        Rational v = bound.value * Rational(scaled.scale);
        if (!v.is_integer()) {
            scaled = scale_by(scaled, v.den());
            v = v * Rational(v.den());
        }
        bound.value = v;
    }
    scaled = normalize_constraints(scaled);
    for (const auto& assignment : expand_assignments(prop, scaled, sizes)) {
        GroundProperty gp;
        gp.quantifier = prop.quantifier;
        gp.op = prop.op;
        gp.bound = bound;
        gp.phi = ground(prop.phi, prop, assignment);
        if (prop.op == PathOp::U) gp.psi = ground(prop.psi, prop, assignment);
        gp.assignment = assignment;
        if (!digital_check(scaled, sizes, gp, true, nonzeno)) {
            if (falsifier) *falsifier = assignment;
            return false;
        }
    }
    return true;
}

int cmd_check(const std::string& model_path, const std::string& prop_arg,
              const std::string& engine, const std::string& sizes_text,
              bool fail_fast, bool imitl_strict, bool nonzeno) {
    ModelDocument doc = parse_model(read_file(model_path));
    warn(doc);
    Property prop = parse_property(read_property_arg(prop_arg), doc.spec);
    require_imitl(prop, imitl_strict);
    if (nonzeno && engine != "discrete")
        throw Error(ErrorKind::UnsupportedQuantifierOperator,
                    "--nonzeno is implemented on the discrete engine only; "
                    "rerun with --engine discrete");

    auto start = std::chrono::steady_clock::now();
    if (!sizes_text.empty()) {
        SizeVector sizes = parse_sizes(sizes_text, doc.spec.templates.size());
        bool truth;
        if (engine == "discrete") {
            std::vector<int> falsifier;
            truth = discrete_check(doc.spec, sizes, prop, &falsifier, nonzeno);
            std::cout << "size " << sizes_str(sizes) << ": "
                      << (truth ? "true" : "false") << "\n";
        } else {
            Verdict v = check(doc.spec, sizes, prop);
            truth = v.truth;
            std::cout << "size " << sizes_str(sizes) << ": "
                      << (truth ? "true" : "false") << "\n";
            if (v.run && v.run_spec) {
                std::cout << (truth ? "witness:" : "counterexample:") << "\n"
                          << emit_trace(*v.run, *v.run_spec);
            }
        }
        return truth ? 0 : 1;
    }

    if (engine == "discrete") {
        // Parameterized sweep on the oracle: every size up to the cutoff.
        CutoffVector cv = compute_cutoff(doc.spec, prop);
        ParamVerdict pv;
        pv.cutoff = cv;
        for (const auto& sizes :
             enumerate_sizes(minimum_sizes(doc.spec, prop), cv.sizes)) {
            pv.checked.push_back(sizes);
            if (!discrete_check(doc.spec, sizes, prop, nullptr, nonzeno)) {
                pv.failures.push_back(sizes);
                pv.truth = false;
                if (fail_fast) break;
            }
        }
        double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        std::cout << emit_report(pv, doc.spec, "discrete", wall);
        return pv.truth ? 0 : 1;
    }

    ParamVerdict pv = parameterized_check(doc.spec, prop, fail_fast);
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << emit_report(pv, doc.spec, "zone", wall);
    if (!pv.truth && pv.detail.run && pv.detail.run_spec) {
        std::cout << "counterexample at size " << sizes_str(pv.failures.front())
                  << ":\n"
                  << emit_trace(*pv.detail.run, *pv.detail.run_spec);
    }
    return pv.truth ? 0 : 1;
}

int cmd_cutoff(const std::string& model_path, const std::string& prop_arg) {
    ModelDocument doc = parse_model(read_file(model_path));
    warn(doc);
    Property prop = parse_property(read_property_arg(prop_arg), doc.spec);
    CutoffVector cv = compute_cutoff(doc.spec, prop);
    for (std::size_t l = 0; l < cv.sizes.size(); ++l)
        std::cout << doc.spec.templates[l].name << " = " << cv.sizes[l] << "  ["
                  << cv.reasons[l] << "]\n";
    return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& sizes_text,
                 int steps, std::uint64_t seed) {
    ModelDocument doc = parse_model(read_file(model_path));
    warn(doc);
    NetworkSpec spec = normalize_constraints(doc.spec);
    SizeVector sizes = parse_sizes(sizes_text, spec.templates.size());

    std::mt19937_64 rng(seed);
    Run run;
    run.configs.push_back(initial_configuration(spec, sizes));
    run.times.push_back(Rational(0));

    for (int step = 0; step < steps; ++step) {
        const Configuration& cur = run.configs.back();
        auto syncs = sync_successors(cur, spec);
        auto sup = admissible_delay(cur, spec);
        bool can_delay = !sup || !sup->is_zero();

        if (syncs.empty() && !can_delay) {
            run.klass = RunClass::Deadlocked;
            break;
        }
        if (syncs.empty() && !sup) {
            run.klass = RunClass::Infinite;  // time-divergent idling
            break;
        }
        bool do_delay = can_delay && (syncs.empty() || rng() % 10 < 3);
        RunStep s;
        if (do_delay) {
            Rational d = sup ? *sup : Rational(1);
            Configuration next;
            try {
                next = delay_successor(cur, spec, d);
            } catch (const Error&) {
                d = d / Rational(2);  // strict supremum; stay below it
                next = delay_successor(cur, spec, d);
            }
            s.kind = RunStep::Kind::Delay;
            s.delay = d;
            run.configs.push_back(std::move(next));
            run.times.push_back(run.times.back() + d);
        } else {
            const SyncSuccessor& pickd = syncs[rng() % syncs.size()];
            s.kind = RunStep::Kind::Sync;
            s.template_index = pickd.template_index;
            s.instance = pickd.instance;
            s.transition = pickd.transition;
            run.configs.push_back(pickd.config);
            run.times.push_back(run.times.back());
        }
        run.steps.push_back(s);
    }
    if (run.klass == RunClass::FinitePrefix &&
        is_deadlocked(run.configs.back(), spec))
        run.klass = RunClass::Deadlocked;
    std::cout << emit_trace(run, spec);
    return 0;
}

int cmd_abstract(const std::string& model_path, const std::string& template_name,
                 const std::string& var, bool prune) {
    ModelDocument doc = parse_model(read_file(model_path));
    warn(doc);
    int ti = doc.spec.template_index(template_name);
    if (ti < 0)
        throw Error(ErrorKind::Parse, "unknown template '" + template_name + "'");
    auto bit = doc.bindings.find(template_name);
    if (bit == doc.bindings.end() || bit->second.variable != var)
        throw Error(ErrorKind::Parse, "template '" + template_name +
                                          "' has no annotations for variable '" +
                                          var + "'");

    TaggedTemplate tagged =
        product(doc.spec.templates[static_cast<std::size_t>(ti)], bit->second);
    Template abstracted = add_mutex_guards(tagged);
    if (prune) abstracted = prune_unreachable(abstracted);

    ModelDocument out;
    out.spec.constants = doc.spec.constants;
    out.spec.templates.push_back(std::move(abstracted));
    std::cout << print_model(out);
    return 0;
}

int cmd_lemma_test(const std::string& suite, int trials, std::uint64_t seed) {
    GenParams p;
    p.seed = seed;
    LemmaReport report = run_suite(suite, p, trials);
    std::cout << report.text();
    return report.violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pnta — parameterized timed model checker for conjunctive "
                 "timed-automaton networks"};
    app.require_subcommand(1);

    std::string model, prop, engine = "zone", sizes_text, tmpl, var, suite;
    bool fail_fast = false, imitl_strict = false, prune = false, nonzeno = false;
    int steps = 50, trials = 50;
    std::uint64_t seed = 1;

    auto* check_cmd = app.add_subcommand("check", "verify a property");
    check_cmd->add_option("model", model)->required();
    check_cmd->add_option("prop", prop)->required();
    check_cmd->add_option("--engine", engine)
        ->check(CLI::IsMember({"zone", "discrete"}));
    check_cmd->add_option("--sizes", sizes_text);
    check_cmd->add_flag("--fail-fast", fail_fast);
    check_cmd->add_flag("--imitl-strict", imitl_strict);
    check_cmd->add_flag("--nonzeno", nonzeno,
                        "restrict Einf/Ainf to time-divergent runs "
                        "(discrete engine only)");

    auto* cutoff_cmd = app.add_subcommand("cutoff", "print the cutoff vector");
    cutoff_cmd->add_option("model", model)->required();
    cutoff_cmd->add_option("prop", prop)->required();

    auto* sim_cmd = app.add_subcommand("simulate", "random run");
    sim_cmd->add_option("model", model)->required();
    sim_cmd->add_option("--sizes", sizes_text)->required();
    sim_cmd->add_option("--steps", steps);
    sim_cmd->add_option("--seed", seed);

    auto* abs_cmd = app.add_subcommand("abstract", "emit the PID abstraction");
    abs_cmd->add_option("model", model)->required();
    abs_cmd->add_option("--template", tmpl)->required();
    abs_cmd->add_option("--var", var)->required();
    abs_cmd->add_flag("--prune", prune);

    auto* lemma_cmd = app.add_subcommand("lemma-test", "falsification suites");
    lemma_cmd->add_option("--suite", suite)
        ->required()
        ->check(CLI::IsMember({"mono", "bound", "trunc"}));
    lemma_cmd->add_option("--trials", trials);
    lemma_cmd->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check_cmd->parsed())
            return cmd_check(model, prop, engine, sizes_text, fail_fast,
                             imitl_strict, nonzeno);
        if (cutoff_cmd->parsed()) return cmd_cutoff(model, prop);
        if (sim_cmd->parsed()) return cmd_simulate(model, sizes_text, steps, seed);
        if (abs_cmd->parsed()) return cmd_abstract(model, tmpl, var, prune);
        if (lemma_cmd->parsed()) return cmd_lemma_test(suite, trials, seed);
    } catch (const pnta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_engine_limitation() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
