// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure. Budgets are generous; every criterion re-derives its expectation
// instead of trusting cached results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pnta/abstraction.hpp"
#include "pnta/checker.hpp"
#include "pnta/cutoff.hpp"
#include "pnta/errors.hpp"
#include "pnta/lemmalab.hpp"
#include "pnta/oracle.hpp"
#include "pnta/semantics.hpp"
#include "pnta/textio.hpp"

using namespace pnta;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string repo_path(const std::string& rel) {
    return std::string(PNTA_SOURCE_DIR) + "/" + rel;
}

ModelDocument load_model(const std::string& name) {
    return parse_model(read_file(repo_path("models/" + name)));
}

GroundFormula atom(int tmpl, int instance, int state) {
    GroundFormula f;
    f.kind = StateFormula::Kind::Atom;
    f.atom = {tmpl, instance, state};
    return f;
}

struct Harness {
    int failures = 0;

    void run(const std::string& name, const std::function<void()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            body();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1fs", secs);
        if (ok) {
            std::cout << "PASS: " << name << " (" << buf << ")\n";
        } else {
            ++failures;
            std::cout << "FAIL: " << name << " (" << buf << "): " << detail
                      << "\n";
        }
        std::cout.flush();
    }
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

// --- criterion 1: cutoff table ---------------------------------------------

NetworkSpec chain_spec(const std::vector<int>& state_counts) {
    std::string text;
    for (std::size_t l = 0; l < state_counts.size(); ++l) {
        text += "template T" + std::to_string(l) + " {\n  init s0;\n";
        for (int s = 0; s < state_counts[l]; ++s)
            text += "  state s" + std::to_string(s) + ";\n";
        for (int s = 0; s + 1 < state_counts[l]; ++s)
            text += "  trans s" + std::to_string(s) + " -> s" +
                    std::to_string(s + 1) + " { }\n";
        text += "}\n";
    }
    text += "system {\n";
    for (std::size_t l = 0; l < state_counts.size(); ++l)
        text += "  T" + std::to_string(l) + ": param;\n";
    text += "}\n";
    return parse_model(text).spec;
}

void criterion_cutoff_table() {
    const PathQuantifier quants[] = {PathQuantifier::A,    PathQuantifier::E,
                                     PathQuantifier::Ainf, PathQuantifier::Einf,
                                     PathQuantifier::Afin, PathQuantifier::Efin};
    for (int k = 1; k <= 3; ++k) {
        for (int u = 1; u <= 10; ++u) {
            NetworkSpec spec = chain_spec(std::vector<int>(
                static_cast<std::size_t>(k), u));
            for (PathQuantifier q : quants) {
                Property prop;
                prop.quantifier = q;
                prop.op = PathOp::G;
                prop.binders.push_back({"i", 0});
                prop.phi = StateFormula::make_atom(0, 0);
                CutoffVector cv = compute_cutoff(spec, prop);
                for (int l = 0; l < k; ++l) {
                    bool indexed = l == 0;
                    int want = 0;
                    switch (q) {
                        case PathQuantifier::Ainf:
                        case PathQuantifier::Einf: want = indexed ? 2 : 1; break;
                        case PathQuantifier::Afin:
                        case PathQuantifier::Efin: want = 1; break;
                        case PathQuantifier::A:
                        case PathQuantifier::E:
                            want = indexed ? 2 * u + 1 : 2 * u;
                            break;
                    }
                    expect(cv.sizes[static_cast<std::size_t>(l)] == want,
                           "cutoff mismatch k=" + std::to_string(k) +
                               " |U|=" + std::to_string(u) + " q=" +
                               quantifier_str(q) + " l=" + std::to_string(l));
                }
            }
        }
    }
    // The concrete 4-state instance: cutoff 9.
    NetworkSpec fischer = load_model("fischer_reduced.pnta").spec;
    Property mutex = parse_property(
        read_file(repo_path("models/fischer_mutex.prop")), fischer);
    CutoffVector cv = compute_cutoff(fischer, mutex);
    expect(cv.sizes == SizeVector{9}, "4-state template cutoff is not 9");
}

// --- criterion 2: Fischer end-to-end at size 9 ------------------------------

void criterion_fischer_end_to_end() {
    NetworkSpec spec = load_model("fischer_reduced.pnta").spec;
    Property reach = parse_property(
        read_file(repo_path("models/fischer_reachability.prop")), spec);
    Property mutex = parse_property(
        read_file(repo_path("models/fischer_mutex.prop")), spec);
    Property starve = parse_property(
        read_file(repo_path("models/fischer_no_starvation.prop")), spec);

    expect(check(spec, {9}, reach).truth, "E F CS expected true at (9)");
    expect(check(spec, {9}, mutex).truth, "A G mutex expected true at (9)");

    Verdict v = check(spec, {9}, starve);
    expect(!v.truth, "A F CS expected false at (9)");
    expect(v.run.has_value(), "starvation counterexample missing");
    expect(v.run->klass == RunClass::Infinite,
           "counterexample is not an infinite run");
    auto err = replay_run(*v.run, *v.run_spec);
    expect(!err.has_value(), "counterexample replay failed: " + err.value_or(""));
}

// --- criterion 3: parameterized sweep through the CLI -----------------------

void criterion_parameterized_sweep() {
    std::string out = std::string(PNTA_BINARY_DIR) + "/sweep_report.txt";
    std::string cmd = std::string("\"") + PNTA_CLI + "\" check \"" +
                      repo_path("models/fischer_reduced.pnta") + "\" \"" +
                      repo_path("models/fischer_mutex.prop") + "\" > \"" + out +
                      "\" 2>&1";
    int rc = std::system(cmd.c_str());
    std::string report = read_file(out);
    expect(rc == 0, "pnta check exited nonzero:\n" + report);

    int rows = 0;
    std::istringstream is(report);
    for (std::string line; std::getline(is, line);) {
        if (line.rfind("size (", 0) == 0) {
            ++rows;
            expect(line.find(": true") != std::string::npos,
                   "per-size verdict not true: " + line);
        }
    }
    expect(rows == 8, "expected 8 per-size rows (2..9), got " +
                          std::to_string(rows));
    expect(report.find("overall: true") != std::string::npos,
           "overall verdict not true");
}

// --- criterion 4: engine agreement ------------------------------------------

void criterion_engine_agreement() {
    GenParams p;
    int specs = 0, cases = 0;
    for (int trial = 0; specs < 100; ++trial) {
        p.seed = 50000 + static_cast<std::uint64_t>(trial);
        NetworkSpec spec = random_spec(p);
        ++specs;
        SizeVector sizes(spec.templates.size(), 2);
        int states = static_cast<int>(spec.templates[0].states.size());
        for (int st = 0; st < states; ++st) {
            GroundFormula a = atom(0, 1, st);

            GroundProperty ef;
            ef.quantifier = PathQuantifier::E;
            ef.op = PathOp::F;
            ef.phi = a;

            GroundProperty ag;
            ag.quantifier = PathQuantifier::A;
            ag.op = PathOp::G;
            ag.phi = ground_not(a);

            GroundProperty eu;
            eu.quantifier = PathQuantifier::E;
            eu.op = PathOp::U;
            eu.phi = ground_not(a);
            eu.psi = a;

            for (const GroundProperty* gp : {&ef, &ag, &eu}) {
                bool zone = check_ground(spec, sizes, *gp).truth;
                bool oracle = digital_check(spec, sizes, *gp, true);
                expect(zone == oracle,
                       "engine disagreement at seed " + std::to_string(p.seed) +
                           " state " + std::to_string(st));
                ++cases;
            }
        }
    }
    expect(cases >= 300, "corpus unexpectedly small");
}

// --- criterion 5: lemma suites ----------------------------------------------

void criterion_lemma_suites() {
    GenParams p;
    p.seed = 1;
    const std::pair<const char*, int> suites[] = {
        {"mono", 50}, {"bound", 50}, {"trunc", 30}};
    for (auto [suite, trials] : suites) {
        LemmaReport r = run_suite(suite, p, trials);
        expect(r.violations.empty(),
               std::string(suite) + " suite reported violations:\n" + r.text());
    }
}

// --- criterion 6: abstraction pipeline ---------------------------------------

void criterion_abstraction() {
    ModelDocument full = load_model("fischer_full.pnta");
    const Template& concrete = full.spec.templates[0];
    const VarBinding& binding = full.bindings.at("P");

    TaggedTemplate prod = product(concrete, binding);
    expect(prod.tmpl.states.size() == 8, "product is not 8 states");

    Template guarded = add_mutex_guards(prod);
    Template pruned = prune_unreachable(guarded);
    expect(pruned.states.size() < 8, "pruning removed nothing");

    // The shipped manual reduction (merging the overwrite path) is the
    // 4-state model everything else is checked against.
    ModelDocument reduced = load_model("fischer_reduced.pnta");
    expect(reduced.spec.templates[0].states.size() == 4,
           "reduced model is not 4 states");

    NetworkSpec abs;
    abs.templates = {guarded};
    abs.constants = full.spec.constants;
    for (int n : {2, 3}) {
        std::string failure;
        expect(simulation_check(concrete, binding, abs, n, &failure),
               "simulation failed at n=" + std::to_string(n) + ": " + failure);
    }

    // Tag exclusion at every size of the parameterized sweep (2..9): no two
    // distinct instances simultaneously inside the mypid group.
    NetworkSpec spec = reduced.spec;
    Property excl = parse_property(
        "forall i:P, j:P with i != j . A G[>=0] "
        "!((b2_Mypid(i) | CS_mypid(i)) & (b2_Mypid(j) | CS_mypid(j)))",
        spec);
    for (int n = 2; n <= 9; ++n)
        expect(check(spec, {n}, excl).truth,
               "tag exclusion violated at size " + std::to_string(n));
}

// --- criterion 7: semantics micro-suite --------------------------------------

bool invariants_hold(const Configuration& c, const NetworkSpec& spec) {
    for (std::size_t t = 0; t < spec.templates.size(); ++t)
        for (const auto& inst : c.inst[t])
            if (!eval_constraint(
                    spec.templates[t].invariants[static_cast<std::size_t>(
                        inst.state)],
                    inst.clocks))
                return false;
    return true;
}

void criterion_semantics_suite() {
    GenParams p;
    std::mt19937_64 rng(123);
    int cases = 0;

    for (int trial = 0; trial < 120; ++trial) {
        p.seed = 80000 + static_cast<std::uint64_t>(trial);
        NetworkSpec spec = normalize_constraints(
            scale_to_integers(random_spec(p)));
        SizeVector sizes(spec.templates.size(), 2);
        Configuration c = initial_configuration(spec, sizes);

        for (int step = 0; step < 12; ++step) {
            // Eqn.-(1) invariant: every configuration reached by the
            // operational rules satisfies all state invariants.
            expect(invariants_hold(c, spec), "invariant violated along a run");
            ++cases;

            auto sup = admissible_delay(c, spec);
            bool try_delay = (rng() % 2) == 0;
            if (try_delay && (!sup || !sup->is_zero())) {
                Rational d = sup ? *sup / Rational(2) : Rational(1);
                // Delay composition: d = d/2 + d/2 lands in the same place
                // (stuttering invariance of the split).
                Configuration direct = delay_successor(c, spec, d);
                Configuration half = delay_successor(c, spec, d / Rational(2));
                Configuration split =
                    delay_successor(half, spec, d / Rational(2));
                expect(direct == split, "delay composition violated");
                ++cases;
                c = direct;
                continue;
            }
            auto succ = sync_successors(c, spec);
            if (succ.empty()) {
                // With no sync step, deadlock is equivalent to "no positive
                // delay": the admissible supremum is exactly zero.
                expect(is_deadlocked(c, spec) ==
                           (sup.has_value() && sup->is_zero()),
                       "deadlock predicate disagrees with admissible delay");
                ++cases;
                break;
            }
            const auto& pick = succ[rng() % succ.size()];
            // Interleaving: at most one instance changes per sync step
            // (exactly one moves; a reset-free self-loop leaves it equal).
            int changed = 0;
            for (std::size_t t = 0; t < c.inst.size(); ++t)
                for (std::size_t i = 0; i < c.inst[t].size(); ++i)
                    if (!(c.inst[t][i] == pick.config.inst[t][i])) ++changed;
            expect(changed <= 1, "sync step changed more than one instance");
            ++cases;
            c = pick.config;
        }

        // Idle-extension closure: when no invariant caps time, any further
        // delay stays admissible (the idling extension of a run is a run).
        if (!admissible_delay(c, spec).has_value()) {
            Configuration idle = c;
            for (int j = 0; j < 3; ++j) {
                idle = delay_successor(idle, spec, Rational(1 + j));
                expect(invariants_hold(idle, spec), "idle extension violated");
                ++cases;
            }
        }
    }
    expect(cases >= 1000, "only " + std::to_string(cases) +
                              " randomized cases (need >= 1000)");
}

}  // namespace

int main() {
    Harness h;
    h.run("cutoff table exact over Thm.-2 grid", criterion_cutoff_table);
    h.run("Fischer end-to-end at size 9", criterion_fischer_end_to_end);
    h.run("parameterized sweep via CLI (sizes 2..9)",
          criterion_parameterized_sweep);
    h.run("zone/discrete engine agreement on 100 specs",
          criterion_engine_agreement);
    h.run("lemma suites (mono 50, bound 50, trunc 30)",
          criterion_lemma_suites);
    h.run("abstraction pipeline and tag exclusion", criterion_abstraction);
    h.run("semantics micro-suite (>= 1000 cases)", criterion_semantics_suite);
    return h.failures == 0 ? 0 : 1;
}
