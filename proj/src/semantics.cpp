#include "pnta/semantics.hpp"

#include <sstream>

#include "pnta/errors.hpp"

namespace pnta {

Configuration initial_configuration(const NetworkSpec& spec, const SizeVector& sizes) {
    if (sizes.size() != spec.templates.size())
        throw Error(ErrorKind::Internal, "size vector arity mismatch");
    Configuration config;
    config.inst.resize(spec.templates.size());
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const auto& t = spec.templates[l];
        InstanceState init;
        init.state = t.initial;
        init.clocks.assign(t.clocks.size(), Rational(0));
        config.inst[l].assign(static_cast<std::size_t>(sizes[l]), init);
    }
    return config;
}

bool eval_constraint(const ClockConstraint& c, const std::vector<Rational>& clocks) {
    using K = ClockConstraint::Kind;
    switch (c.kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Atom: {
            const auto& a = c.atom;
            const Rational& lhs = clocks.at(a.clock);
            Rational rhs = a.is_diagonal() ? clocks.at(a.other_clock) : a.bound;
            switch (a.op) {
                case RelOp::Lt: return lhs < rhs;
                case RelOp::Le: return lhs <= rhs;
                case RelOp::Gt: return lhs > rhs;
                case RelOp::Ge: return lhs >= rhs;
                case RelOp::Eq: return lhs == rhs;
            }
            return false;
        }
        case K::Not:
            return !eval_constraint(c.children.front(), clocks);
        case K::And:
            for (const auto& ch : c.children)
                if (!eval_constraint(ch, clocks)) return false;
            return true;
        case K::Or:
            for (const auto& ch : c.children)
                if (eval_constraint(ch, clocks)) return true;
            return false;
    }
    return false;
}

bool eval_guard(const Configuration& config, const NetworkSpec& spec,
                const ConjunctiveGuard& guard, int owner_template, int owner_instance) {
    for (const auto& [peer_name, allowed] : guard.allowed) {
        int h = spec.template_index(peer_name);
        if (h < 0)
            throw Error(ErrorKind::Validation,
                        "guard references unknown template '" + peer_name + "'");
        const Template& peer = spec.templates[h];
        for (int j = 0; j < config.size_of(h); ++j) {
            if (h == owner_template && j + 1 == owner_instance) continue;
            const std::string& s = peer.states[config.inst[h][j].state];
            if (!allowed.count(s)) return false;
        }
    }
    return true;
}

namespace {

// Largest d such that clocks+d still satisfy the (convex) invariant atoms;
// second component: whether that supremum is itself admissible.
struct DelayCap {
    std::optional<Rational> sup;  // nullopt = unbounded
    bool attained = true;
};

DelayCap delay_cap(const ClockConstraint& inv, const std::vector<Rational>& clocks,
                   const std::string& where) {
    DelayCap cap;
    for (const auto& a : convex_atoms(inv, where)) {
        if (a.is_diagonal()) continue;  // differences are delay-invariant
        Rational slack = a.bound - clocks.at(a.clock);
        switch (a.op) {
            case RelOp::Le:
            case RelOp::Eq: {
                if (!cap.sup || slack < *cap.sup) { cap.sup = slack; cap.attained = true; }
                else if (slack == *cap.sup && !cap.attained) cap.attained = true;
                break;
            }
            case RelOp::Lt: {
                if (!cap.sup || slack < *cap.sup ||
                    (slack == *cap.sup && cap.attained)) {
                    cap.sup = slack;
                    cap.attained = false;
                }
                break;
            }
            case RelOp::Gt:
            case RelOp::Ge:
                break;  // lower bounds only improve under delay
        }
    }
    return cap;
}

}  // namespace

std::optional<Rational> admissible_delay(const Configuration& config,
                                         const NetworkSpec& spec) {
    std::optional<Rational> sup;
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const auto& t = spec.templates[l];
        for (const auto& inst : config.inst[l]) {
            auto cap = delay_cap(t.invariants[inst.state], inst.clocks,
                                 t.name + "/" + t.states[inst.state] + "/inv");
            if (cap.sup && (!sup || *cap.sup < *sup)) sup = cap.sup;
        }
    }
    return sup;
}

Configuration delay_successor(const Configuration& config, const NetworkSpec& spec,
                              const Rational& d) {
    if (!(Rational(0) < d))
        throw Error(ErrorKind::Internal, "delay_successor requires d > 0");
    Configuration next = config;
    for (auto& instances : next.inst)
        for (auto& inst : instances)
            for (auto& c : inst.clocks) c = c + d;

    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const auto& t = spec.templates[l];
        for (std::size_t i = 0; i < next.inst[l].size(); ++i) {
            const auto& inst = next.inst[l][i];
            if (!eval_constraint(t.invariants[inst.state], inst.clocks)) {
                auto sup = admissible_delay(config, spec);
                std::ostringstream os;
                os << "InvariantViolated: " << t.name << "[" << (i + 1)
                   << "] at " << t.states[inst.state]
                   << " rejects delay " << d.str() << " (admissible supremum "
                   << (sup ? sup->str() : "unbounded") << ")";
                throw Error(ErrorKind::InvariantViolated, os.str());
            }
        }
    }
    return next;
}

std::vector<SyncSuccessor> sync_successors(const Configuration& config,
                                           const NetworkSpec& spec) {
    std::vector<SyncSuccessor> result;
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const auto& t = spec.templates[l];
        for (int i = 0; i < config.size_of(static_cast<int>(l)); ++i) {
            const auto& inst = config.inst[l][i];
            for (std::size_t ti = 0; ti < t.transitions.size(); ++ti) {
                const auto& tr = t.transitions[ti];
                if (tr.source != inst.state) continue;
                if (!eval_constraint(tr.guard, inst.clocks)) continue;
                if (!eval_guard(config, spec, tr.sync_guard,
                                static_cast<int>(l), i + 1))
                    continue;
                InstanceState moved = inst;
                moved.state = tr.target;
                for (int r : tr.resets) moved.clocks[r] = Rational(0);
                if (!eval_constraint(t.invariants[tr.target], moved.clocks)) continue;

                SyncSuccessor succ;
                succ.template_index = static_cast<int>(l);
                succ.instance = i + 1;
                succ.transition = static_cast<int>(ti);
                succ.config = config;
                succ.config.inst[l][i] = std::move(moved);
                result.push_back(std::move(succ));
            }
        }
    }
    return result;
}

bool is_deadlocked(const Configuration& config, const NetworkSpec& spec) {
    if (!sync_successors(config, spec).empty()) return false;
    auto sup = admissible_delay(config, spec);
    return sup && !(*sup > Rational(0));
}

std::optional<std::string> replay_run(const Run& run, const NetworkSpec& spec) {
    if (run.configs.empty()) return "run has no configurations";
    if (run.configs.size() != run.steps.size() + 1 ||
        run.times.size() != run.configs.size())
        return "run shape mismatch";
    if (!run.times[0].is_zero()) return "run does not start at time 0";

    Configuration current = run.configs[0];
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const auto& step = run.steps[i];
        if (step.kind == RunStep::Kind::Delay) {
            current = delay_successor(current, spec, step.delay);
            if (run.times[i + 1] != run.times[i] + step.delay)
                return "step " + std::to_string(i) + ": timestamp mismatch";
        } else {
            bool found = false;
            for (auto& succ : sync_successors(current, spec)) {
                if (succ.template_index == step.template_index &&
                    succ.instance == step.instance &&
                    succ.transition == step.transition) {
                    current = std::move(succ.config);
                    found = true;
                    break;
                }
            }
            if (!found)
                return "step " + std::to_string(i) + ": sync transition not enabled";
            if (run.times[i + 1] != run.times[i])
                return "step " + std::to_string(i) + ": sync must not advance time";
        }
        if (!(current == run.configs[i + 1]))
            return "step " + std::to_string(i) + ": configuration mismatch";
    }
    return std::nullopt;
}

}  // namespace pnta
