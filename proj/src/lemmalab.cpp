#include "pnta/lemmalab.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "pnta/errors.hpp"
#include "pnta/oracle.hpp"
#include "pnta/textio.hpp"

namespace pnta {

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

bool chance(std::mt19937_64& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

Template random_template(std::mt19937_64& rng, const GenParams& p,
                         const std::string& name) {
    Template t;
    t.name = name;
    int ns = pick(rng, 1, std::max(1, p.max_states));
    for (int s = 0; s < ns; ++s) t.states.push_back("q" + std::to_string(s));
    t.initial = 0;
    int nc = pick(rng, 0, std::max(0, p.max_clocks));
    for (int c = 0; c < nc; ++c) t.clocks.push_back("c" + std::to_string(c));

    for (int s = 0; s < ns; ++s) {
        if (s > 0 && nc > 0 && chance(rng, 0.3)) {
            ConstraintAtom a;
            a.clock = pick(rng, 0, nc - 1);
            a.op = RelOp::Le;
            a.bound = Rational(pick(rng, 1, static_cast<int>(p.max_const)));
            t.invariants.push_back(ClockConstraint::make_atom(a));
        } else {
            t.invariants.push_back(ClockConstraint::make_true());
        }
    }

    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < ns; ++j) {
            if (i == j && !chance(rng, 0.15 * p.transition_density)) continue;
            if (i != j && !chance(rng, p.transition_density)) continue;
            Transition tr;
            tr.source = i;
            tr.target = j;
            if (nc > 0 && chance(rng, 0.5)) {
                ConstraintAtom a;
                a.clock = pick(rng, 0, nc - 1);
                int which = pick(rng, 0, 2);
                a.op = which == 0 ? RelOp::Le : which == 1 ? RelOp::Ge : RelOp::Eq;
                a.bound = Rational(pick(rng, 0, static_cast<int>(p.max_const)));
                tr.guard = ClockConstraint::make_atom(a);
            }
            for (int c = 0; c < nc; ++c)
                if (chance(rng, 0.4)) tr.resets.push_back(c);
            t.transitions.push_back(std::move(tr));
        }
    }
    return t;
}

GroundFormula random_atom(std::mt19937_64& rng, const Template& t,
                          int template_index) {
    GroundFormula f;
    f.kind = StateFormula::Kind::Atom;
    f.atom.template_index = template_index;
    f.atom.instance = 1;
    f.atom.state = pick(rng, 0, static_cast<int>(t.states.size()) - 1);
    if (chance(rng, 0.3)) {
        GroundFormula n;
        n.kind = StateFormula::Kind::Not;
        n.children.push_back(std::move(f));
        return n;
    }
    return f;
}

GroundFormula random_formula(std::mt19937_64& rng, const Template& t,
                             int template_index) {
    GroundFormula f = random_atom(rng, t, template_index);
    if (t.states.size() >= 2 && chance(rng, 0.35)) {
        GroundFormula b;
        b.kind = chance(rng, 0.5) ? StateFormula::Kind::And : StateFormula::Kind::Or;
        b.children.push_back(std::move(f));
        b.children.push_back(random_atom(rng, t, template_index));
        return b;
    }
    return f;
}

std::string property_str(const GroundProperty& gp, const NetworkSpec& spec) {
    std::ostringstream os;
    os << quantifier_str(gp.quantifier) << " ";
    std::string bound = "[" + rel_op_str(gp.bound.op) + gp.bound.value.str() + "]";
    switch (gp.op) {
        case PathOp::F:
            os << "F" << bound << " " << ground_formula_str(gp.phi, spec);
            break;
        case PathOp::G:
            os << "G" << bound << " " << ground_formula_str(gp.phi, spec);
            break;
        case PathOp::U:
            os << "(" << ground_formula_str(gp.phi, spec) << ") U" << bound << " ("
               << ground_formula_str(gp.psi, spec) << ")";
            break;
    }
    return os.str();
}

// E-variant property over instance 1 of `target`. The allowed shapes keep
// each quantifier inside the supported fragment.
GroundProperty random_property(std::mt19937_64& rng, const NetworkSpec& spec,
                               int target, bool reachability_only,
                               std::int64_t max_const) {
    const Template& t = spec.templates[static_cast<std::size_t>(target)];
    GroundProperty gp;
    gp.phi = random_formula(rng, t, target);
    if (reachability_only) {
        gp.quantifier = PathQuantifier::E;
        gp.op = PathOp::F;
    } else {
        switch (pick(rng, 0, 4)) {
            case 0:
                gp.quantifier = PathQuantifier::E;
                gp.op = PathOp::F;
                break;
            case 1:
                gp.quantifier = PathQuantifier::E;
                gp.op = PathOp::G;
                break;
            case 2:
                gp.quantifier = PathQuantifier::E;
                gp.op = PathOp::U;
                gp.psi = random_formula(rng, t, target);
                break;
            case 3:
                gp.quantifier = PathQuantifier::Einf;
                gp.op = chance(rng, 0.5) ? PathOp::F : PathOp::G;
                break;
            default:
                gp.quantifier = PathQuantifier::Efin;
                gp.op = PathOp::G;
                break;
        }
    }
    // Non-trivial bounds only on plain-E reachability; elsewhere the trivial
    // bound keeps every quantifier/op pair inside the oracle's fragment.
    if (gp.quantifier == PathQuantifier::E && gp.op == PathOp::F &&
        chance(rng, 0.3))
        gp.bound = TimeBound{RelOp::Le, Rational(pick(rng, 1, static_cast<int>(max_const)))};
    return gp;
}

std::string spec_text(const NetworkSpec& spec) {
    ModelDocument doc;
    doc.spec = spec;
    return print_model(doc);
}

// Cutoff for one template under an E-variant quantifier (Thm. 2 table).
int e_cutoff(PathQuantifier q, const Template& t, bool indexed) {
    switch (q) {
        case PathQuantifier::Einf:
        case PathQuantifier::Ainf:
            return indexed ? 2 : 1;
        case PathQuantifier::Efin:
        case PathQuantifier::Afin:
            return 1;
        default:
            return 2 * static_cast<int>(t.states.size()) + (indexed ? 1 : 0);
    }
}

}  // namespace

NetworkSpec random_spec(const GenParams& p) {
    std::mt19937_64 rng(p.seed);
    NetworkSpec spec;
    spec.source = "<random seed=" + std::to_string(p.seed) + ">";
    int nt = p.num_templates > 0 ? p.num_templates : pick(rng, 1, 2);
    for (int i = 0; i < nt; ++i)
        spec.templates.push_back(
            random_template(rng, p, "U" + std::to_string(i + 1)));

    // Conjunctive sync guards, inserted after all templates exist so every
    // allowed set can include the peer's initial state by construction.
    for (auto& t : spec.templates) {
        for (auto& tr : t.transitions) {
            if (!chance(rng, p.guard_restriction_prob)) continue;
            const Template& peer = spec.templates[static_cast<std::size_t>(
                pick(rng, 0, nt - 1))];
            std::set<std::string> allowed{peer.initial_name()};
            for (const auto& s : peer.states)
                if (chance(rng, 0.5)) allowed.insert(s);
            tr.sync_guard.allowed[peer.name] = std::move(allowed);
        }
    }
    return spec;
}

std::string LemmaReport::text() const {
    std::ostringstream os;
    os << "suite=" << suite << "\n";
    os << "note: formulas sampled from the implemented single-layer F/G/U "
          "fragment only\n";
    for (const auto& v : violations) {
        os << "--- violation (seed=" << v.seed << ") ---\n";
        os << "property: " << v.property << "\n";
        os << "premise " << sizes_str(v.premise_sizes) << " = "
           << (v.premise_truth ? "true" : "false") << ", conclusion "
           << sizes_str(v.conclusion_sizes) << " = "
           << (v.conclusion_truth ? "true" : "false") << "\n";
        os << v.spec_text;
    }
    os << "violations=" << violations.size() << " trials=" << trials
       << " seed=" << seed << "\n";
    return os.str();
}

LemmaReport run_suite(const std::string& suite, const GenParams& p, int trials) {
    if (trials < 1)
        throw Error(ErrorKind::Validation, "lemma suite needs trials >= 1");
    if (suite != "mono" && suite != "bound" && suite != "trunc")
        throw Error(ErrorKind::Validation, "unknown lemma suite '" + suite + "'");

    LemmaReport report;
    report.suite = suite;
    report.trials = trials;
    report.seed = p.seed;

    for (int trial = 0; trial < trials; ++trial) {
        GenParams tp = p;
        tp.seed = p.seed + static_cast<std::uint64_t>(trial);
        if (suite == "bound") {
            tp.max_states = std::min(tp.max_states, 2);
            tp.max_clocks = std::min(tp.max_clocks, 1);
        } else if (suite == "trunc") {
            tp.max_states = std::min(tp.max_states, 2);
            tp.max_clocks = std::min(tp.max_clocks, 1);
            tp.max_const = std::min<std::int64_t>(tp.max_const, 1);
            tp.num_templates = 2;
        }
        NetworkSpec spec = random_spec(tp);
        std::mt19937_64 rng(tp.seed ^ 0x9e3779b97f4a7c15ull);
        int nt = static_cast<int>(spec.templates.size());
        int target = nt - 1;  // Φ(1_2): last template, instance 1

        auto record = [&](const GroundProperty& gp, const SizeVector& premise,
                          const SizeVector& conclusion, bool prem, bool conc) {
            LemmaViolation v;
            v.seed = tp.seed;
            v.spec_text = spec_text(spec);
            v.property = property_str(gp, spec);
            v.premise_sizes = premise;
            v.conclusion_sizes = conclusion;
            v.premise_truth = prem;
            v.conclusion_truth = conc;
            report.violations.push_back(std::move(v));
        };

        if (suite == "mono") {
            GroundProperty gp = random_property(rng, spec, target, false,
                                                tp.max_const);
            int n = pick(rng, 1, 3);
            SizeVector small(static_cast<std::size_t>(nt), 1);
            small[static_cast<std::size_t>(target)] = n;
            SizeVector large = small;
            large[static_cast<std::size_t>(target)] = n + 1;
            bool at_small = digital_check(spec, small, gp, true);
            if (at_small) {
                bool at_large = digital_check(spec, large, gp, true);
                if (!at_large) record(gp, small, large, at_small, at_large);
            }
        } else if (suite == "bound") {
            bool use_inf = chance(rng, 0.4);
            GroundProperty gp = random_property(rng, spec, target, true,
                                                tp.max_const);
            if (use_inf) {
                gp.quantifier = PathQuantifier::Einf;
                gp.bound = TimeBound{};
            }
            const Template& t = spec.templates[static_cast<std::size_t>(target)];
            int c = e_cutoff(gp.quantifier, t, true);
            SizeVector at_cutoff(static_cast<std::size_t>(nt), 1);
            at_cutoff[static_cast<std::size_t>(target)] = c;
            SizeVector above = at_cutoff;
            above[static_cast<std::size_t>(target)] = c + 1;
            bool prem = digital_check(spec, above, gp, true);
            if (prem) {
                bool conc = digital_check(spec, at_cutoff, gp, true);
                if (!conc) record(gp, above, at_cutoff, prem, conc);
            }
        } else {  // trunc
            GroundProperty gp = random_property(rng, spec, target, true,
                                                tp.max_const);
            gp.bound = TimeBound{};
            SizeVector cutoff(2), sizes(2), clamped(2);
            for (int l = 0; l < 2; ++l)
                cutoff[static_cast<std::size_t>(l)] =
                    e_cutoff(gp.quantifier, spec.templates[static_cast<std::size_t>(l)],
                             l == target);
            do {
                for (int l = 0; l < 2; ++l)
                    sizes[static_cast<std::size_t>(l)] =
                        pick(rng, 1, cutoff[static_cast<std::size_t>(l)] + 2);
            } while (sizes[0] <= cutoff[0] && sizes[1] <= cutoff[1]);
            for (int l = 0; l < 2; ++l)
                clamped[static_cast<std::size_t>(l)] =
                    std::min(sizes[static_cast<std::size_t>(l)],
                             cutoff[static_cast<std::size_t>(l)]);
            bool full = digital_check(spec, sizes, gp, true);
            bool trunc = digital_check(spec, clamped, gp, true);
            if (full != trunc) record(gp, sizes, clamped, full, trunc);
        }
    }
    return report;
}

}  // namespace pnta
