#include "pnta/abstraction.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pnta/errors.hpp"
#include "pnta/oracle.hpp"
#include "pnta/semantics.hpp"

namespace pnta {

std::string var_action_str(VarAction a) {
    switch (a) {
        case VarAction::WritePid: return ":= pid";
        case VarAction::WriteZero: return ":= 0";
        case VarAction::TestPid: return "= pid";
        case VarAction::TestNotPid: return "!= pid";
        case VarAction::TestZero: return "= 0";
    }
    return "?";
}

Template pid_view_template() {
    Template w;
    w.name = "W";
    w.states = {"diffpid", "mypid"};
    w.initial = 0;
    w.invariants = {ClockConstraint::make_true(), ClockConstraint::make_true()};
    auto move = [](int s, int t) {
        Transition tr;
        tr.source = s;
        tr.target = t;
        return tr;
    };
    w.transitions = {move(0, 0), move(0, 1), move(1, 1), move(1, 0)};
    return w;
}

namespace {

const char* kDiffSuffix = "_Diff";
const char* kMypidSuffix = "_Mypid";

}  // namespace

TaggedTemplate product(const Template& p, const VarBinding& binding) {
    std::vector<int> missing;
    for (int u : binding.uses)
        if (!binding.actions.count(u)) missing.push_back(u);
    if (!missing.empty()) {
        std::ostringstream os;
        os << "IncompleteBinding: variable '" << binding.variable
           << "' used without an annotation on transition(s)";
        for (int u : missing) os << " #" << u;
        throw Error(ErrorKind::IncompleteBinding, os.str());
    }
    for (const auto& [u, a] : binding.actions)
        if (u < 0 || u >= static_cast<int>(p.transitions.size()))
            throw Error(ErrorKind::Validation,
                        "binding annotates unknown transition #" + std::to_string(u));

    TaggedTemplate out;
    Template& t = out.tmpl;
    t.name = p.name;
    t.clocks = p.clocks;
    // view component: 0 = diffpid, 1 = mypid; initial is (initial, diffpid)
    // because the variable starts at 0
    for (const auto& s : p.states) {
        t.states.push_back(s + kDiffSuffix);
        t.states.push_back(s + kMypidSuffix);
    }
    t.initial = 2 * p.initial;
    for (std::size_t s = 0; s < p.states.size(); ++s) {
        t.invariants.push_back(p.invariants[s]);
        t.invariants.push_back(p.invariants[s]);
        out.tags.insert(p.states[s] + kMypidSuffix);
    }
    if (!t.invariants[static_cast<std::size_t>(t.initial)].is_true())
        throw Error(ErrorKind::Validation,
                    "product: initial invariant of " + p.name + " not true");

    for (std::size_t ti = 0; ti < p.transitions.size(); ++ti) {
        const Transition& tr = p.transitions[ti];
        VarAction action = VarAction::TestNotPid;  // placeholder
        bool touches = false;
        if (auto it = binding.actions.find(static_cast<int>(ti));
            it != binding.actions.end()) {
            action = it->second;
            touches = true;
        }
        for (int view = 0; view <= 1; ++view) {
            int target_view = view;
            if (touches) {
                switch (action) {
                    case VarAction::WritePid: target_view = 1; break;
                    case VarAction::WriteZero: target_view = 0; break;
                    case VarAction::TestPid:
                        if (view != 1) continue;
                        break;
                    case VarAction::TestNotPid:
                    case VarAction::TestZero:
                        if (view != 0) continue;
                        break;
                }
            }
            Transition copy = tr;
            copy.source = 2 * tr.source + view;
            copy.target = 2 * tr.target + target_view;
            t.transitions.push_back(std::move(copy));
        }
    }
    // a peer overwriting the variable flips mypid back to diffpid, in any state
    for (std::size_t s = 0; s < p.states.size(); ++s) {
        Transition flip;
        flip.source = 2 * static_cast<int>(s) + 1;
        flip.target = 2 * static_cast<int>(s);
        t.transitions.push_back(std::move(flip));
    }
    return out;
}

Template add_mutex_guards(const TaggedTemplate& tagged) {
    const Template& src = tagged.tmpl;
    if (tagged.tags.count(src.initial_name()))
        throw Error(ErrorKind::InitialTagged,
                    "InitialTagged: initial state " + src.initial_name() +
                        " is in the tag set");
    std::set<std::string> untagged;
    for (const auto& s : src.states)
        if (!tagged.tags.count(s)) untagged.insert(s);

    Template out = src;
    for (auto& tr : out.transitions) {
        if (!tagged.tags.count(src.states[static_cast<std::size_t>(tr.target)]))
            continue;
        tr.sync_guard.allowed[src.name] = untagged;
    }
    return out;
}

Template prune_unreachable(const Template& t) {
    std::vector<char> reach(t.states.size(), 0);
    std::deque<int> queue{t.initial};
    reach[static_cast<std::size_t>(t.initial)] = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& tr : t.transitions)
            if (tr.source == s && !reach[static_cast<std::size_t>(tr.target)]) {
                reach[static_cast<std::size_t>(tr.target)] = 1;
                queue.push_back(tr.target);
            }
    }
    std::vector<int> remap(t.states.size(), -1);
    Template out;
    out.name = t.name;
    out.clocks = t.clocks;
    for (std::size_t s = 0; s < t.states.size(); ++s) {
        if (!reach[s]) continue;
        remap[s] = static_cast<int>(out.states.size());
        out.states.push_back(t.states[s]);
        out.invariants.push_back(t.invariants[s]);
    }
    out.initial = remap[static_cast<std::size_t>(t.initial)];
    for (const auto& tr : t.transitions) {
        if (remap[static_cast<std::size_t>(tr.source)] < 0 ||
            remap[static_cast<std::size_t>(tr.target)] < 0)
            continue;
        Transition copy = tr;
        copy.source = remap[static_cast<std::size_t>(tr.source)];
        copy.target = remap[static_cast<std::size_t>(tr.target)];
        out.transitions.push_back(std::move(copy));
    }
    return out;
}

namespace {

// Concrete digitized node: per instance [state, clocks...], then the stored
// PID value (0 = free).
struct ConcreteSystem {
    const Template* p;
    const VarBinding* binding;
    int n;
    std::vector<std::vector<ConstraintAtom>> inv;
    std::vector<std::vector<ConstraintAtom>> guard;
    std::vector<std::int32_t> cap;
    int blk;

    explicit ConcreteSystem(const Template& tmpl, const VarBinding& b, int n_,
                            const std::vector<std::int64_t>& max_const)
        : p(&tmpl), binding(&b), n(n_) {
        blk = 1 + static_cast<int>(tmpl.clocks.size());
        for (auto m : max_const) cap.push_back(static_cast<std::int32_t>(m) + 1);
        for (std::size_t s = 0; s < tmpl.states.size(); ++s)
            inv.push_back(convex_atoms(tmpl.invariants[s],
                                       tmpl.name + "/" + tmpl.states[s]));
        for (const auto& tr : tmpl.transitions)
            guard.push_back(convex_atoms(tr.guard, tmpl.name + "/trans"));
    }

    DigitalNode initial() const {
        DigitalNode node(static_cast<std::size_t>(n * blk + 1), 0);
        for (int i = 0; i < n; ++i)
            node[static_cast<std::size_t>(i * blk)] = p->initial;
        return node;
    }
    int state_of(const DigitalNode& c, int i) const {
        return c[static_cast<std::size_t>(i * blk)];
    }
    std::int32_t var_of(const DigitalNode& c) const { return c.back(); }

    bool atom_ok(const ConstraintAtom& a, std::int32_t v) const {
        std::int64_t q = a.bound.as_integer();
        switch (a.op) {
            case RelOp::Le: return v <= q;
            case RelOp::Lt: return v < q;
            case RelOp::Ge: return v >= q;
            case RelOp::Gt: return v > q;
            case RelOp::Eq: return v == q;
        }
        return false;
    }

    bool delay_allowed(const DigitalNode& c) const {
        for (int i = 0; i < n; ++i)
            for (const auto& a :
                 inv[static_cast<std::size_t>(state_of(c, i))]) {
                std::int32_t v = c[static_cast<std::size_t>(i * blk + 1 + a.clock)];
                v = std::min<std::int32_t>(
                    v + 1, cap[static_cast<std::size_t>(a.clock)]);
                if (!atom_ok(a, v)) return false;
            }
        return true;
    }

    struct Step {
        bool is_delay = true;
        int instance = -1;  // 1-based
        int transition = -1;
        DigitalNode node;
    };

    std::vector<Step> successors(const DigitalNode& c) const {
        std::vector<Step> out;
        if (delay_allowed(c)) {
            Step s;
            s.node = c;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < blk - 1; ++k) {
                    auto& v = s.node[static_cast<std::size_t>(i * blk + 1 + k)];
                    v = std::min<std::int32_t>(v + 1,
                                               cap[static_cast<std::size_t>(k)]);
                }
            out.push_back(std::move(s));
        }
        for (int i = 0; i < n; ++i) {
            int st = state_of(c, i);
            for (std::size_t ti = 0; ti < p->transitions.size(); ++ti) {
                const Transition& tr = p->transitions[ti];
                if (tr.source != st) continue;
                bool ok = true;
                for (const auto& a : guard[ti]) {
                    std::int32_t v = c[static_cast<std::size_t>(i * blk + 1 + a.clock)];
                    if (!atom_ok(a, v)) { ok = false; break; }
                }
                if (!ok) continue;
                std::int32_t var = var_of(c);
                std::int32_t new_var = var;
                if (auto it = binding->actions.find(static_cast<int>(ti));
                    it != binding->actions.end()) {
                    switch (it->second) {
                        case VarAction::WritePid: new_var = i + 1; break;
                        case VarAction::WriteZero: new_var = 0; break;
                        case VarAction::TestPid: ok = (var == i + 1); break;
                        case VarAction::TestNotPid: ok = (var != i + 1); break;
                        case VarAction::TestZero: ok = (var == 0); break;
                    }
                }
                if (!ok) continue;
                Step s;
                s.is_delay = false;
                s.instance = i + 1;
                s.transition = static_cast<int>(ti);
                s.node = c;
                s.node[static_cast<std::size_t>(i * blk)] = tr.target;
                for (int r : tr.resets)
                    s.node[static_cast<std::size_t>(i * blk + 1 + r)] = 0;
                s.node.back() = new_var;
                bool inv_ok = true;
                for (const auto& a : inv[static_cast<std::size_t>(tr.target)]) {
                    std::int32_t v = s.node[static_cast<std::size_t>(i * blk + 1 + a.clock)];
                    if (!atom_ok(a, v)) { inv_ok = false; break; }
                }
                if (!inv_ok) continue;
                out.push_back(std::move(s));
            }
        }
        return out;
    }
};

}  // namespace

bool simulation_check(const Template& p, const VarBinding& binding,
                      const NetworkSpec& abstract_spec, int n,
                      std::string* failure) {
    auto fail = [&](const std::string& msg) {
        if (failure) *failure = msg;
        return false;
    };

    NetworkSpec concrete_spec;
    concrete_spec.templates.push_back(p);
    concrete_spec = close_strict_atoms(
        normalize_constraints(scale_to_integers(concrete_spec)));
    const Template& cp = concrete_spec.templates[0];

    NetworkSpec abs = close_strict_atoms(
        normalize_constraints(scale_to_integers(abstract_spec)));
    if (abs.templates.size() != 1)
        throw Error(ErrorKind::Validation,
                    "simulation_check expects a single-template abstract network");
    if (concrete_spec.scale != abs.scale)
        throw Error(ErrorKind::Validation,
                    "simulation_check: concrete and abstract constants use "
                    "different scales");
    const Template& at = abs.templates[0];

    // α: concrete (P-state, view) -> abstract state index
    std::vector<std::array<int, 2>> alpha(cp.states.size(), {-1, -1});
    for (std::size_t s = 0; s < cp.states.size(); ++s) {
        alpha[s][0] = at.state_index(cp.states[s] + kDiffSuffix);
        alpha[s][1] = at.state_index(cp.states[s] + kMypidSuffix);
    }

    SizeVector sizes{n};
    // protect every instance: the mapping is per-instance, no symmetry quotient
    DigitalContext actx(abs, sizes, std::nullopt, {n});
    ConcreteSystem csys(cp, binding, n, max_constants(concrete_spec)[0]);

    auto map_node = [&](const DigitalNode& c) -> std::optional<DigitalNode> {
        DigitalNode a(static_cast<std::size_t>(n * csys.blk), 0);
        std::int32_t var = csys.var_of(c);
        for (int i = 0; i < n; ++i) {
            int view = (var == i + 1) ? 1 : 0;
            int as = alpha[static_cast<std::size_t>(csys.state_of(c, i))]
                          [static_cast<std::size_t>(view)];
            if (as < 0) return std::nullopt;
            a[static_cast<std::size_t>(i * csys.blk)] = as;
            for (int k = 0; k < csys.blk - 1; ++k)
                a[static_cast<std::size_t>(i * csys.blk + 1 + k)] =
                    c[static_cast<std::size_t>(i * csys.blk + 1 + k)];
        }
        return a;
    };

    auto describe = [&](const DigitalNode& c, const ConcreteSystem::Step& s) {
        std::ostringstream os;
        os << "unsimulated concrete step: ";
        if (s.is_delay)
            os << "delay 1";
        else
            os << cp.name << "[" << s.instance << "] "
               << cp.states[static_cast<std::size_t>(
                      cp.transitions[static_cast<std::size_t>(s.transition)].source)]
               << " -> "
               << cp.states[static_cast<std::size_t>(
                      cp.transitions[static_cast<std::size_t>(s.transition)].target)];
        os << " (v=" << csys.var_of(c) << ")";
        return os.str();
    };

    std::unordered_set<DigitalNode, DigitalNodeHash> seen;
    std::deque<DigitalNode> queue;
    DigitalNode init = csys.initial();
    auto a_init = map_node(init);
    if (!a_init) return fail("initial configuration has no abstract image");
    {
        DigitalNode expect = actx.initial();
        if (*a_init != expect)
            return fail("abstract initial configuration does not match the image "
                        "of the concrete one");
    }
    seen.insert(init);
    queue.push_back(init);

    while (!queue.empty()) {
        DigitalNode c = std::move(queue.front());
        queue.pop_front();
        DigitalNode a = *map_node(c);
        std::vector<DigitalNode> a_succ;  // computed lazily
        bool have_succ = false;
        for (const auto& s : csys.successors(c)) {
            auto a_next = map_node(s.node);
            if (!a_next) return fail(describe(c, s) + ": image undefined");
            bool matched = (*a_next == a);  // stuttering match
            if (!matched) {
                if (!have_succ) {
                    a_succ = actx.successors(a);
                    have_succ = true;
                }
                for (const auto& x : a_succ) {
                    if (x == *a_next) { matched = true; break; }
                    // one intermediate step (e.g. the previous holder's view
                    // flipping back) before the matching one
                    for (const auto& y : actx.successors(x))
                        if (y == *a_next) { matched = true; break; }
                    if (matched) break;
                }
            }
            if (!matched) return fail(describe(c, s));
            if (seen.insert(s.node).second) queue.push_back(s.node);
        }
    }
    if (failure) failure->clear();
    return true;
}

}  // namespace pnta
