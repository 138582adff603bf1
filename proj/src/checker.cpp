#include "pnta/checker.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

#include "pnta/dbm.hpp"
#include "pnta/errors.hpp"
#include "pnta/zonegraph.hpp"

namespace pnta {

namespace {

struct EdgeRef {
    int tmpl = -1;
    int instance = -1;  // 1-based
    int transition = -1;
};

struct SymStateHash {
    std::size_t operator()(const SymState& s) const { return s.hash(); }
};

struct VecHash {
    std::size_t operator()(const std::vector<std::uint8_t>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint8_t b : v) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// --- preparation -----------------------------------------------------------

struct Prepared {
    std::shared_ptr<NetworkSpec> spec;  // validated, integer-scaled, normalized
    TimeBound bound;                    // bound in engine units (integer value)
};

Prepared prepare(const NetworkSpec& src, const TimeBound& bound) {
    auto diags = validate_network(src);
    if (!diags.empty()) {
        std::string msg = "invalid network:";
        for (const auto& d : diags) msg += "\n  " + d.where + ": " + d.message;
        throw Error(ErrorKind::Validation, msg);
    }
    NetworkSpec scaled = scale_to_integers(src);
    Prepared p;
    p.bound = bound;
    if (!bound.is_trivial()) {
        Rational v = bound.value * Rational(scaled.scale);
        if (!v.is_integer()) {
            scaled = scale_by(scaled, v.den());
            v = v * Rational(v.den());
        }
        p.bound.value = v;
    }
    p.spec = std::make_shared<NetworkSpec>(normalize_constraints(scaled));
    return p;
}

// --- trace concretization --------------------------------------------------

// (T_i - T_j) op q as a difference bound; row 0 is time 0.
void constrain_diff(DBM& d, int i, int j, RelOp op, std::int64_t q) {
    auto v = static_cast<std::int32_t>(q);
    switch (op) {
        case RelOp::Le: d.constrain(i, j, make_bound(v, false)); break;
        case RelOp::Lt: d.constrain(i, j, make_bound(v, true)); break;
        case RelOp::Ge: d.constrain(j, i, make_bound(-v, false)); break;
        case RelOp::Gt: d.constrain(j, i, make_bound(-v, true)); break;
        case RelOp::Eq:
            d.constrain(i, j, make_bound(v, false));
            d.constrain(j, i, make_bound(-v, false));
            break;
    }
}

struct FinalTarget {
    enum class Kind { None, BoundAtEnd, BoundAtEntry, Piece, Diverge };
    Kind kind = Kind::None;
    const TimeBound* bound = nullptr;
    const DBM* piece = nullptr;
};

// Rebuilds a concrete run over the symbolic path: one variable per sync
// timestamp plus a final-position timestamp, constrained by every guard and
// by each invariant over its occupancy interval, then sampled and replayed.
std::optional<Run> concretize(const ZoneContext& ctx,
                              const std::vector<EdgeRef>& path,
                              const FinalTarget& ft, int cycle_node,
                              RunClass klass) {
    const NetworkSpec& spec = ctx.spec();
    const SizeVector& sizes = ctx.sizes();
    int m = static_cast<int>(path.size());
    int end_row = m + 1;
    DBM t = DBM::universal(m + 1);
    for (int i = 1; i <= m; ++i) t.constrain(i, i + 1, kLeZero);
    if (ft.kind == FinalTarget::Kind::BoundAtEntry) {
        if (m > 0)
            constrain_diff(t, end_row, m, RelOp::Eq, 0);
        else
            constrain_diff(t, end_row, 0, RelOp::Eq, 0);
    }

    // discrete replay, tracking the occupying state per instance and the
    // step that last reset each clock row (0 = start of time)
    std::vector<int> offsets;
    int total = 0;
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        offsets.push_back(total);
        total += sizes[l];
    }
    std::vector<int> states(static_cast<std::size_t>(total));
    for (std::size_t l = 0; l < spec.templates.size(); ++l)
        for (int i = 0; i < sizes[l]; ++i)
            states[static_cast<std::size_t>(offsets[l] + i)] =
                spec.templates[l].initial;
    std::vector<int> last_reset(static_cast<std::size_t>(ctx.num_clocks() + 1), 0);

    for (int k = 0; k <= m; ++k) {
        int seg_end = (k < m) ? k + 1 : end_row;
        for (std::size_t l = 0; l < spec.templates.size(); ++l) {
            for (int i = 0; i < sizes[l]; ++i) {
                int st = states[static_cast<std::size_t>(offsets[l] + i)];
                for (const auto& a :
                     ctx.invariant_atoms(static_cast<int>(l), st)) {
                    int r = last_reset[static_cast<std::size_t>(
                        ctx.clock_row(static_cast<int>(l), i + 1, a.clock))];
                    std::int64_t q = a.bound.as_integer();
                    switch (a.op) {
                        case RelOp::Le:
                        case RelOp::Lt:
                            constrain_diff(t, seg_end, r, a.op, q);
                            break;
                        case RelOp::Ge:
                        case RelOp::Gt:
                            constrain_diff(t, k, r, a.op, q);
                            break;
                        case RelOp::Eq:
                            constrain_diff(t, seg_end, r, RelOp::Le, q);
                            constrain_diff(t, k, r, RelOp::Ge, q);
                            break;
                    }
                }
            }
        }
        if (k == m) break;
        const EdgeRef& e = path[static_cast<std::size_t>(k)];
        for (const auto& a : ctx.guard_atoms(e.tmpl, e.transition)) {
            int r = last_reset[static_cast<std::size_t>(
                ctx.clock_row(e.tmpl, e.instance, a.clock))];
            constrain_diff(t, k + 1, r, a.op, a.bound.as_integer());
        }
        const Transition& tr =
            spec.templates[static_cast<std::size_t>(e.tmpl)]
                .transitions[static_cast<std::size_t>(e.transition)];
        states[static_cast<std::size_t>(offsets[static_cast<std::size_t>(
                                            e.tmpl)] +
                                        e.instance - 1)] = tr.target;
        for (int c : tr.resets)
            last_reset[static_cast<std::size_t>(
                ctx.clock_row(e.tmpl, e.instance, c))] = k + 1;
    }

    switch (ft.kind) {
        case FinalTarget::Kind::BoundAtEnd:
        case FinalTarget::Kind::BoundAtEntry:
            constrain_diff(t, end_row, 0, ft.bound->op,
                           ft.bound->value.as_integer());
            break;
        case FinalTarget::Kind::Piece: {
            const DBM& piece = *ft.piece;
            // clock c = T_end - T_{S_c}; S_0 stands for T_end itself, so
            // c_i - c_j ~ b becomes T_{S_j} - T_{S_i} ~ b.
            auto srow = [&](int x) {
                return x == 0 ? end_row : last_reset[static_cast<std::size_t>(x)];
            };
            for (int i = 0; i < piece.dim(); ++i)
                for (int j = 0; j < piece.dim(); ++j) {
                    if (i == j) continue;
                    Bound b = piece.at(i, j);
                    if (b == kBoundInf) continue;
                    int si = srow(i), sj = srow(j);
                    if (si == sj) {
                        if (b < kLeZero) return std::nullopt;
                        continue;
                    }
                    t.constrain(sj, si, b);
                }
            break;
        }
        case FinalTarget::Kind::None:
        case FinalTarget::Kind::Diverge:
            break;
    }
    if (t.is_empty()) return std::nullopt;

    std::vector<Rational> sample = t.sample_point();

    try {
        Run run;
        Configuration config = initial_configuration(spec, sizes);
        run.configs.push_back(config);
        run.times.push_back(Rational(0));
        Rational now(0);
        std::vector<int> node_pos(static_cast<std::size_t>(m) + 1, 0);
        for (int k = 1; k <= m; ++k) {
            Rational target_time = sample[static_cast<std::size_t>(k)];
            if (target_time > now) {
                RunStep d;
                d.kind = RunStep::Kind::Delay;
                d.delay = target_time - now;
                config = delay_successor(config, spec, d.delay);
                now = target_time;
                run.steps.push_back(d);
                run.configs.push_back(config);
                run.times.push_back(now);
            }
            const EdgeRef& e = path[static_cast<std::size_t>(k - 1)];
            bool found = false;
            for (auto& succ : sync_successors(config, spec)) {
                if (succ.template_index == e.tmpl && succ.instance == e.instance &&
                    succ.transition == e.transition) {
                    config = std::move(succ.config);
                    found = true;
                    break;
                }
            }
            if (!found) return std::nullopt;
            RunStep s;
            s.kind = RunStep::Kind::Sync;
            s.template_index = e.tmpl;
            s.instance = e.instance;
            s.transition = e.transition;
            run.steps.push_back(s);
            run.configs.push_back(config);
            run.times.push_back(now);
            node_pos[static_cast<std::size_t>(k)] =
                static_cast<int>(run.configs.size()) - 1;
        }
        Rational end_time = sample[static_cast<std::size_t>(end_row)];
        if (ft.kind == FinalTarget::Kind::Diverge) {
            RunStep d;
            d.kind = RunStep::Kind::Delay;
            d.delay = Rational(1);
            config = delay_successor(config, spec, d.delay);
            now = now + d.delay;
            run.steps.push_back(d);
            run.configs.push_back(config);
            run.times.push_back(now);
        } else if (end_time > now) {
            RunStep d;
            d.kind = RunStep::Kind::Delay;
            d.delay = end_time - now;
            config = delay_successor(config, spec, d.delay);
            now = end_time;
            run.steps.push_back(d);
            run.configs.push_back(config);
            run.times.push_back(now);
        }
        run.klass = klass;
        if (klass == RunClass::Infinite && cycle_node >= 0)
            run.cycle_start = node_pos[static_cast<std::size_t>(cycle_node)];
        if (klass == RunClass::Deadlocked && !is_deadlocked(config, spec))
            return std::nullopt;
        return run;
    } catch (const Error&) {
        return std::nullopt;
    }
}

// --- reachability with inclusion subsumption --------------------------------

struct ReachResult {
    std::vector<char> hit;
    std::vector<std::vector<EdgeRef>> paths;
    std::size_t explored = 0;
    int first_hit = -1;
};

ReachResult reach_targets(const ZoneContext& ctx,
                          const std::vector<const GroundFormula*>& targets,
                          const TimeBound& bound, bool stop_on_first) {
    ReachResult res;
    res.hit.assign(targets.size(), 0);
    res.paths.resize(targets.size());
    std::size_t remaining = targets.size();

    std::vector<SymState> nodes;
    std::vector<int> parent;
    std::vector<EdgeRef> via;
    std::unordered_map<std::vector<std::uint8_t>, std::vector<int>, VecHash> by_vec;

    auto path_to = [&](int idx) {
        std::vector<EdgeRef> path;
        for (int u = idx; u > 0; u = parent[static_cast<std::size_t>(u)])
            path.push_back(via[static_cast<std::size_t>(u)]);
        std::reverse(path.begin(), path.end());
        return path;
    };

    // returns true when the search can stop
    auto visit = [&](int idx) {
        const SymState& s = nodes[static_cast<std::size_t>(idx)];
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            if (res.hit[ti]) continue;
            if (!ctx.eval(*targets[ti], s.states)) continue;
            if (!ctx.bound_satisfiable(s.zone, bound)) continue;
            res.hit[ti] = 1;
            res.paths[ti] = path_to(idx);
            if (res.first_hit < 0) res.first_hit = static_cast<int>(ti);
            --remaining;
            if (stop_on_first || remaining == 0) return true;
        }
        return false;
    };

    std::deque<int> queue;
    nodes.push_back(ctx.initial());
    parent.push_back(-1);
    via.push_back({});
    by_vec[nodes[0].states].push_back(0);
    res.explored = 1;
    if (visit(0)) return res;
    queue.push_back(0);

    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (auto& e : ctx.successors(nodes[static_cast<std::size_t>(u)])) {
            auto& bucket = by_vec[e.target.states];
            bool subsumed = false;
            for (int j : bucket)
                if (nodes[static_cast<std::size_t>(j)].zone.includes(e.target.zone)) {
                    subsumed = true;
                    break;
                }
            if (subsumed) continue;
            int idx = static_cast<int>(nodes.size());
            nodes.push_back(std::move(e.target));
            parent.push_back(u);
            via.push_back({e.template_index, e.instance, e.transition});
            bucket.push_back(idx);
            ++res.explored;
            if (visit(idx)) return res;
            queue.push_back(idx);
        }
    }
    return res;
}

// Quotient reachability for the grouped passes: every explored state is
// replaced by its canonical instance ordering. Instances of one template are
// interchangeable, so the quotient preserves reachability of any
// permutation-closed family of targets; per-target truth is read off orbit
// by orbit (orbit_of groups targets whose ground atoms differ only by an
// instance permutation). No paths are kept — witnesses come from an
// ungrouped rerun of one member of the orbit.
struct QuotientResult {
    std::vector<char> orbit_hit;
    std::size_t explored = 0;
    int first_hit = -1;  // target index, for error reporting
};

QuotientResult reach_targets_quotient(
    const ZoneContext& ctx, const std::vector<const GroundFormula*>& targets,
    const TimeBound& bound, const std::vector<int>& orbit_of, int num_orbits,
    bool stop_on_first) {
    QuotientResult res;
    res.orbit_hit.assign(static_cast<std::size_t>(num_orbits), 0);
    int remaining = num_orbits;

    std::vector<SymState> nodes;
    std::unordered_map<std::vector<std::uint8_t>, std::vector<int>, VecHash> by_vec;

    auto visit = [&](const SymState& s) {
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            auto orbit = static_cast<std::size_t>(orbit_of[ti]);
            if (res.orbit_hit[orbit]) continue;
            if (!ctx.eval(*targets[ti], s.states)) continue;
            if (!ctx.bound_satisfiable(s.zone, bound)) continue;
            res.orbit_hit[orbit] = 1;
            if (res.first_hit < 0) res.first_hit = static_cast<int>(ti);
            --remaining;
            if (stop_on_first || remaining == 0) return true;
        }
        return false;
    };

    std::deque<int> queue;
    SymState init = ctx.initial();
    ctx.canonicalize(init);
    nodes.push_back(std::move(init));
    by_vec[nodes[0].states].push_back(0);
    res.explored = 1;
    if (visit(nodes[0])) return res;
    queue.push_back(0);

    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (auto& e : ctx.successors(nodes[static_cast<std::size_t>(u)])) {
            ctx.canonicalize(e.target);
            auto& bucket = by_vec[e.target.states];
            bool subsumed = false;
            for (int j : bucket)
                if (nodes[static_cast<std::size_t>(j)].zone.includes(
                        e.target.zone)) {
                    subsumed = true;
                    break;
                }
            if (subsumed) continue;
            int idx = static_cast<int>(nodes.size());
            nodes.push_back(std::move(e.target));
            bucket.push_back(idx);
            ++res.explored;
            if (visit(nodes[static_cast<std::size_t>(idx)])) return res;
            queue.push_back(idx);
        }
    }
    return res;
}

// --- maximal-run search (cycles, divergence, deadlocks) ----------------------

struct MaxWitness {
    enum class Kind { Cycle, Diverge, Dead };
    Kind kind = Kind::Cycle;
    std::vector<EdgeRef> path;
    int cycle_node = -1;  // index into path nodes (0 = initial)
    DBM piece{0};
};

// A maximal run whose every position satisfies `ok` (statevec predicate):
// a cycle in the restricted zone graph, unbounded idling, or (when maximal
// includes finite) a deadlocked valuation. Equality dedup keeps cycle
// detection exact.
std::optional<MaxWitness> exists_maximal_zone(
    const ZoneContext& ctx,
    const std::function<bool(const std::vector<std::uint8_t>&)>& ok,
    bool include_deadlock, std::size_t& explored) {
    SymState init = ctx.initial();
    if (!ok(init.states)) return std::nullopt;

    std::unordered_map<SymState, int, SymStateHash> mark;  // >=0 stack pos, -2 done
    struct Frame {
        SymState s;
        std::vector<ZoneEdge> succ;
        std::size_t next = 0;
        EdgeRef via;
    };
    std::vector<Frame> stack;
    auto edges_so_far = [&]() {
        std::vector<EdgeRef> path;
        for (std::size_t i = 1; i < stack.size(); ++i) path.push_back(stack[i].via);
        return path;
    };
    auto open = [&](SymState s, EdgeRef via) -> std::optional<MaxWitness> {
        ++explored;
        if (ctx.divergent_idle(s)) {
            MaxWitness w;
            w.kind = MaxWitness::Kind::Diverge;
            w.path = edges_so_far();
            if (via.tmpl >= 0) w.path.push_back(via);
            return w;
        }
        if (include_deadlock) {
            if (auto piece = ctx.deadlocked_piece(s)) {
                MaxWitness w;
                w.kind = MaxWitness::Kind::Dead;
                w.path = edges_so_far();
                if (via.tmpl >= 0) w.path.push_back(via);
                w.piece = std::move(*piece);
                return w;
            }
        }
        Frame f;
        f.succ = ctx.successors(s);
        f.via = via;
        f.s = std::move(s);
        mark[f.s] = static_cast<int>(stack.size());
        stack.push_back(std::move(f));
        return std::nullopt;
    };

    if (auto w = open(std::move(init), {})) return w;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next >= f.succ.size()) {
            mark[f.s] = -2;
            stack.pop_back();
            continue;
        }
        ZoneEdge& e = f.succ[f.next++];
        if (!ok(e.target.states)) continue;
        EdgeRef via{e.template_index, e.instance, e.transition};
        auto it = mark.find(e.target);
        if (it == mark.end()) {
            if (auto w = open(std::move(e.target), via)) return w;
        } else if (it->second >= 0) {
            MaxWitness w;
            w.kind = MaxWitness::Kind::Cycle;
            w.path = edges_so_far();
            w.path.push_back(via);
            w.cycle_node = it->second;
            return w;
        }
    }
    return std::nullopt;
}

// An infinite run with a φ-position: DFS over (state, seen-φ) pairs; a cycle
// or divergent idle in the seen-φ copy is a witness.
std::optional<MaxWitness> exists_phi_infinite(const ZoneContext& ctx,
                                              const GroundFormula& phi,
                                              std::size_t& explored) {
    auto key_of = [](const SymState& s, bool flag) {
        SymState k = s;
        k.states.push_back(flag ? 1 : 0);
        return k;
    };
    SymState init = ctx.initial();
    bool init_flag = ctx.eval(phi, init.states);

    std::unordered_map<SymState, int, SymStateHash> mark;
    struct Frame {
        SymState s;
        bool flag = false;
        std::vector<ZoneEdge> succ;
        std::size_t next = 0;
        EdgeRef via;
    };
    std::vector<Frame> stack;
    auto edges_so_far = [&]() {
        std::vector<EdgeRef> path;
        for (std::size_t i = 1; i < stack.size(); ++i) path.push_back(stack[i].via);
        return path;
    };
    auto open = [&](SymState s, bool flag, EdgeRef via) -> std::optional<MaxWitness> {
        ++explored;
        if (flag && ctx.divergent_idle(s)) {
            MaxWitness w;
            w.kind = MaxWitness::Kind::Diverge;
            w.path = edges_so_far();
            if (via.tmpl >= 0) w.path.push_back(via);
            return w;
        }
        Frame f;
        f.succ = ctx.successors(s);
        f.flag = flag;
        f.via = via;
        f.s = std::move(s);
        mark[key_of(f.s, flag)] = static_cast<int>(stack.size());
        stack.push_back(std::move(f));
        return std::nullopt;
    };

    if (auto w = open(std::move(init), init_flag, {})) return w;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next >= f.succ.size()) {
            mark[key_of(f.s, f.flag)] = -2;
            stack.pop_back();
            continue;
        }
        ZoneEdge& e = f.succ[f.next++];
        bool flag = f.flag || ctx.eval(phi, e.target.states);
        EdgeRef via{e.template_index, e.instance, e.transition};
        auto it = mark.find(key_of(e.target, flag));
        if (it == mark.end()) {
            if (auto w = open(std::move(e.target), flag, via)) return w;
        } else if (it->second >= 0 && flag) {
            MaxWitness w;
            w.kind = MaxWitness::Kind::Cycle;
            w.path = edges_so_far();
            w.path.push_back(via);
            w.cycle_node = it->second;
            return w;
        }
    }
    return std::nullopt;
}

// Violation of A φ U ψ (trivial bound): a ¬φ∧¬ψ position reached through
// ¬ψ, or a maximal run that stays in ¬ψ forever.
struct UntilViolation {
    enum class Kind { BadState, Cycle, Diverge, Dead };
    Kind kind = Kind::BadState;
    std::vector<EdgeRef> path;
    int cycle_node = -1;
    DBM piece{0};
};

std::optional<UntilViolation> forall_until_violation(const ZoneContext& ctx,
                                                     const GroundFormula& phi,
                                                     const GroundFormula& psi,
                                                     std::size_t& explored) {
    SymState init = ctx.initial();
    if (ctx.eval(psi, init.states)) return std::nullopt;

    std::unordered_map<SymState, int, SymStateHash> mark;
    struct Frame {
        SymState s;
        std::vector<ZoneEdge> succ;
        std::size_t next = 0;
        EdgeRef via;
    };
    std::vector<Frame> stack;
    auto edges_so_far = [&]() {
        std::vector<EdgeRef> path;
        for (std::size_t i = 1; i < stack.size(); ++i) path.push_back(stack[i].via);
        return path;
    };
    auto open = [&](SymState s, EdgeRef via) -> std::optional<UntilViolation> {
        ++explored;
        UntilViolation v;
        v.path = edges_so_far();
        if (via.tmpl >= 0) v.path.push_back(via);
        if (!ctx.eval(phi, s.states)) {
            v.kind = UntilViolation::Kind::BadState;
            return v;
        }
        if (ctx.divergent_idle(s)) {
            v.kind = UntilViolation::Kind::Diverge;
            return v;
        }
        if (auto piece = ctx.deadlocked_piece(s)) {
            v.kind = UntilViolation::Kind::Dead;
            v.piece = std::move(*piece);
            return v;
        }
        Frame f;
        f.succ = ctx.successors(s);
        f.via = via;
        f.s = std::move(s);
        mark[f.s] = static_cast<int>(stack.size());
        stack.push_back(std::move(f));
        return std::nullopt;
    };

    if (auto v = open(std::move(init), {})) return v;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next >= f.succ.size()) {
            mark[f.s] = -2;
            stack.pop_back();
            continue;
        }
        ZoneEdge& e = f.succ[f.next++];
        if (ctx.eval(psi, e.target.states)) continue;  // branch discharged
        EdgeRef via{e.template_index, e.instance, e.transition};
        auto it = mark.find(e.target);
        if (it == mark.end()) {
            if (auto v = open(std::move(e.target), via)) return v;
        } else if (it->second >= 0) {
            UntilViolation v;
            v.kind = UntilViolation::Kind::Cycle;
            v.path = edges_so_far();
            v.path.push_back(via);
            v.cycle_node = it->second;
            return v;
        }
    }
    return std::nullopt;
}

// E φ U ψ: BFS through φ-states; a hit needs ψ with the bound satisfiable at
// the entry instant, or anywhere in the delay closure when φ also holds at
// the hit state (the pre-hit positions there still satisfy φ).
struct UntilWitness {
    std::vector<EdgeRef> path;
    bool bound_at_entry = false;
};

std::optional<UntilWitness> exists_until_zone(const ZoneContext& ctx,
                                              const GroundFormula& phi,
                                              const GroundFormula& psi,
                                              const TimeBound& bound,
                                              std::size_t& explored) {
    SymState init = ctx.initial();
    ++explored;
    bool init_phi = ctx.eval(phi, init.states);
    if (ctx.eval(psi, init.states)) {
        if (init_phi && ctx.bound_satisfiable(init.zone, bound))
            return UntilWitness{{}, false};
        DBM at_zero = DBM::zero(ctx.num_clocks());
        if (ctx.bound_satisfiable(at_zero, bound))
            return UntilWitness{{}, true};
    }
    if (!init_phi) return std::nullopt;

    std::vector<SymState> nodes;
    std::vector<int> parent;
    std::vector<EdgeRef> via;
    std::unordered_map<std::vector<std::uint8_t>, std::vector<int>, VecHash> by_vec;
    auto path_to = [&](int idx, EdgeRef last) {
        std::vector<EdgeRef> path;
        path.push_back(last);
        for (int u = idx; u > 0; u = parent[static_cast<std::size_t>(u)])
            path.push_back(via[static_cast<std::size_t>(u)]);
        std::reverse(path.begin(), path.end());
        return path;
    };

    nodes.push_back(std::move(init));
    parent.push_back(-1);
    via.push_back({});
    by_vec[nodes[0].states].push_back(0);
    std::deque<int> queue{0};

    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (auto& e : ctx.successors(nodes[static_cast<std::size_t>(u)])) {
            EdgeRef ref{e.template_index, e.instance, e.transition};
            bool tgt_phi = ctx.eval(phi, e.target.states);
            if (ctx.eval(psi, e.target.states)) {
                if (tgt_phi && ctx.bound_satisfiable(e.target.zone, bound))
                    return UntilWitness{path_to(u, ref), false};
                if (ctx.bound_satisfiable(e.entry_zone, bound))
                    return UntilWitness{path_to(u, ref), true};
            }
            if (!tgt_phi) continue;
            auto& bucket = by_vec[e.target.states];
            bool subsumed = false;
            for (int j : bucket)
                if (nodes[static_cast<std::size_t>(j)].zone.includes(e.target.zone)) {
                    subsumed = true;
                    break;
                }
            if (subsumed) continue;
            int idx = static_cast<int>(nodes.size());
            nodes.push_back(std::move(e.target));
            parent.push_back(u);
            via.push_back(ref);
            bucket.push_back(idx);
            ++explored;
            queue.push_back(idx);
        }
    }
    return std::nullopt;
}

// --- ground dispatch --------------------------------------------------------

void require_trivial_bound(const GroundProperty& gp) {
    if (!gp.bound.is_trivial())
        throw Error(ErrorKind::BoundUnsupported,
                    "BoundUnsupported: " + quantifier_str(gp.quantifier) +
                        " with this operator only supports [>= 0]");
}

std::optional<Run> witness_from_max(const ZoneContext& ctx, const MaxWitness& w,
                                    RunClass klass_hint) {
    FinalTarget ft;
    switch (w.kind) {
        case MaxWitness::Kind::Diverge:
            ft.kind = FinalTarget::Kind::Diverge;
            return concretize(ctx, w.path, ft, -1, RunClass::Infinite);
        case MaxWitness::Kind::Cycle:
            ft.kind = FinalTarget::Kind::None;
            return concretize(ctx, w.path, ft, w.cycle_node, RunClass::Infinite);
        case MaxWitness::Kind::Dead:
            ft.kind = FinalTarget::Kind::Piece;
            ft.piece = &w.piece;
            return concretize(ctx, w.path, ft, -1, RunClass::Deadlocked);
    }
    (void)klass_hint;
    return std::nullopt;
}

void check_instances_fit(const GroundFormula& f, const NetworkSpec& spec,
                         const SizeVector& sizes) {
    if (f.kind == StateFormula::Kind::Atom) {
        int t = f.atom.template_index;
        if (t < 0 || t >= static_cast<int>(sizes.size()))
            throw Error(ErrorKind::Validation, "atom references unknown template");
        if (f.atom.instance < 1 || f.atom.instance > sizes[static_cast<std::size_t>(t)])
            throw Error(ErrorKind::TooFewInstances,
                        "TooFewInstances: " +
                            spec.templates[static_cast<std::size_t>(t)].name +
                            " has " + std::to_string(sizes[static_cast<std::size_t>(t)]) +
                            " instance(s), formula needs instance " +
                            std::to_string(f.atom.instance));
    }
    for (const auto& c : f.children) check_instances_fit(c, spec, sizes);
}

Verdict check_ground_prepared(const Prepared& prep, const SizeVector& sizes,
                              const GroundProperty& gp) {
    const NetworkSpec& spec = *prep.spec;
    check_instances_fit(gp.phi, spec, sizes);
    if (gp.op == PathOp::U) check_instances_fit(gp.psi, spec, sizes);

    Verdict v;
    v.assignment = gp.assignment;
    v.run_spec = prep.spec;

    GroundProperty p = gp;
    p.bound = prep.bound;

    bool want_z = !p.bound.is_trivial() &&
                  (p.quantifier == PathQuantifier::E ||
                   p.quantifier == PathQuantifier::A ||
                   p.quantifier == PathQuantifier::Afin) &&
                  (p.op == PathOp::F || p.op == PathOp::G || p.op == PathOp::U);
    std::optional<std::int64_t> zb;
    if (want_z) zb = p.bound.value.as_integer();

    switch (p.quantifier) {
        case PathQuantifier::E:
            if (p.op == PathOp::F) {
                ZoneContext ctx(spec, sizes, zb);
                std::vector<const GroundFormula*> targets{&p.phi};
                auto r = reach_targets(ctx, targets, p.bound, true);
                v.stats.states_explored = r.explored;
                v.truth = r.hit[0];
                if (v.truth) {
                    FinalTarget ft;
                    ft.kind = FinalTarget::Kind::BoundAtEnd;
                    ft.bound = &p.bound;
                    v.run = concretize(ctx, r.paths[0], ft, -1,
                                       RunClass::FinitePrefix);
                }
                return v;
            }
            if (p.op == PathOp::G) {
                require_trivial_bound(p);
                ZoneContext ctx(spec, sizes);
                auto w = exists_maximal_zone(
                    ctx,
                    [&](const std::vector<std::uint8_t>& st) {
                        return ctx.eval(p.phi, st);
                    },
                    true, v.stats.states_explored);
                v.truth = w.has_value();
                if (w) v.run = witness_from_max(ctx, *w, RunClass::Infinite);
                return v;
            }
            {
                ZoneContext ctx(spec, sizes, zb);
                auto w = exists_until_zone(ctx, p.phi, p.psi, p.bound,
                                           v.stats.states_explored);
                v.truth = w.has_value();
                if (w) {
                    FinalTarget ft;
                    ft.kind = w->bound_at_entry ? FinalTarget::Kind::BoundAtEntry
                                                : FinalTarget::Kind::BoundAtEnd;
                    ft.bound = &p.bound;
                    v.run = concretize(ctx, w->path, ft, -1,
                                       RunClass::FinitePrefix);
                }
                return v;
            }
        case PathQuantifier::A:
            if (p.op == PathOp::F) {
                require_trivial_bound(p);
                ZoneContext ctx(spec, sizes);
                GroundFormula not_phi = ground_not(p.phi);
                auto w = exists_maximal_zone(
                    ctx,
                    [&](const std::vector<std::uint8_t>& st) {
                        return ctx.eval(not_phi, st);
                    },
                    true, v.stats.states_explored);
                v.truth = !w.has_value();
                if (w) v.run = witness_from_max(ctx, *w, RunClass::Infinite);
                return v;
            }
            if (p.op == PathOp::G) {
                ZoneContext ctx(spec, sizes, zb);
                GroundFormula not_phi = ground_not(p.phi);
                std::vector<const GroundFormula*> targets{&not_phi};
                auto r = reach_targets(ctx, targets, p.bound, true);
                v.stats.states_explored = r.explored;
                v.truth = !r.hit[0];
                if (!v.truth) {
                    FinalTarget ft;
                    ft.kind = FinalTarget::Kind::BoundAtEnd;
                    ft.bound = &p.bound;
                    v.run = concretize(ctx, r.paths[0], ft, -1,
                                       RunClass::FinitePrefix);
                }
                return v;
            }
            {
                require_trivial_bound(p);
                ZoneContext ctx(spec, sizes);
                auto viol = forall_until_violation(ctx, p.phi, p.psi,
                                                   v.stats.states_explored);
                v.truth = !viol.has_value();
                if (viol) {
                    FinalTarget ft;
                    switch (viol->kind) {
                        case UntilViolation::Kind::BadState:
                            ft.kind = FinalTarget::Kind::None;
                            v.run = concretize(ctx, viol->path, ft, -1,
                                               RunClass::FinitePrefix);
                            break;
                        case UntilViolation::Kind::Cycle:
                            ft.kind = FinalTarget::Kind::None;
                            v.run = concretize(ctx, viol->path, ft,
                                               viol->cycle_node,
                                               RunClass::Infinite);
                            break;
                        case UntilViolation::Kind::Diverge:
                            ft.kind = FinalTarget::Kind::Diverge;
                            v.run = concretize(ctx, viol->path, ft, -1,
                                               RunClass::Infinite);
                            break;
                        case UntilViolation::Kind::Dead:
                            ft.kind = FinalTarget::Kind::Piece;
                            ft.piece = &viol->piece;
                            v.run = concretize(ctx, viol->path, ft, -1,
                                               RunClass::Deadlocked);
                            break;
                    }
                }
                return v;
            }
        case PathQuantifier::Einf:
            require_trivial_bound(p);
            if (p.op == PathOp::U)
                throw Error(ErrorKind::UnsupportedQuantifierOperator,
                            "UnsupportedQuantifierOperator: U under Einf");
            if (p.op == PathOp::F) {
                ZoneContext ctx(spec, sizes);
                auto w = exists_phi_infinite(ctx, p.phi, v.stats.states_explored);
                v.truth = w.has_value();
                if (w) v.run = witness_from_max(ctx, *w, RunClass::Infinite);
                return v;
            }
            {
                ZoneContext ctx(spec, sizes);
                auto w = exists_maximal_zone(
                    ctx,
                    [&](const std::vector<std::uint8_t>& st) {
                        return ctx.eval(p.phi, st);
                    },
                    false, v.stats.states_explored);
                v.truth = w.has_value();
                if (w) v.run = witness_from_max(ctx, *w, RunClass::Infinite);
                return v;
            }
        case PathQuantifier::Ainf:
            require_trivial_bound(p);
            if (p.op == PathOp::U)
                throw Error(ErrorKind::UnsupportedQuantifierOperator,
                            "UnsupportedQuantifierOperator: U under Ainf");
            if (p.op == PathOp::F) {
                ZoneContext ctx(spec, sizes);
                GroundFormula not_phi = ground_not(p.phi);
                auto w = exists_maximal_zone(
                    ctx,
                    [&](const std::vector<std::uint8_t>& st) {
                        return ctx.eval(not_phi, st);
                    },
                    false, v.stats.states_explored);
                v.truth = !w.has_value();
                if (w) v.run = witness_from_max(ctx, *w, RunClass::Infinite);
                return v;
            }
            {
                ZoneContext ctx(spec, sizes);
                GroundFormula not_phi = ground_not(p.phi);
                auto w = exists_phi_infinite(ctx, not_phi, v.stats.states_explored);
                v.truth = !w.has_value();
                if (w) v.run = witness_from_max(ctx, *w, RunClass::Infinite);
                return v;
            }
        case PathQuantifier::Efin: {
            if (p.op != PathOp::G)
                throw Error(ErrorKind::UnsupportedQuantifierOperator,
                            "UnsupportedQuantifierOperator: Efin only with G");
            // The one-position prefix decides it: G over a finite computation
            // is easiest to satisfy by stopping immediately.
            ZoneContext ctx(spec, sizes);
            SymState init = ctx.initial();
            v.stats.states_explored = 1;
            bool bound_at_zero = true;
            if (!p.bound.is_trivial()) {
                Rational zero(0);
                switch (p.bound.op) {
                    case RelOp::Le: bound_at_zero = zero <= p.bound.value; break;
                    case RelOp::Lt: bound_at_zero = zero < p.bound.value; break;
                    case RelOp::Ge: bound_at_zero = zero >= p.bound.value; break;
                    case RelOp::Gt: bound_at_zero = zero > p.bound.value; break;
                    case RelOp::Eq: bound_at_zero = zero == p.bound.value; break;
                }
            }
            v.truth = !(bound_at_zero && !ctx.eval(p.phi, init.states));
            return v;
        }
        case PathQuantifier::Afin: {
            if (p.op != PathOp::G)
                throw Error(ErrorKind::UnsupportedQuantifierOperator,
                            "UnsupportedQuantifierOperator: Afin only with G");
            // Finite prefixes sweep out exactly the reachable positions.
            GroundProperty ag = p;
            ag.quantifier = PathQuantifier::A;
            return check_ground_prepared(prep, sizes, ag);
        }
    }
    throw Error(ErrorKind::Internal, "unhandled quantifier");
}

}  // namespace

std::vector<std::vector<int>> expand_assignments(const Property& prop,
                                                 const NetworkSpec& spec,
                                                 const SizeVector& sizes) {
    for (const auto& b : prop.binders) {
        int t = b.template_index;
        if (t < 0 || t >= static_cast<int>(sizes.size()))
            throw Error(ErrorKind::Validation,
                        "binder " + b.var + " references unknown template");
        if (sizes[static_cast<std::size_t>(t)] < 1)
            throw Error(ErrorKind::TooFewInstances,
                        "TooFewInstances: no instance of " +
                            spec.templates[static_cast<std::size_t>(t)].name +
                            " for binder " + b.var);
    }
    if (prop.pairwise_distinct) {
        std::map<int, int> per_template;
        for (const auto& b : prop.binders) ++per_template[b.template_index];
        for (auto [t, count] : per_template)
            if (count > sizes[static_cast<std::size_t>(t)])
                throw Error(ErrorKind::TooFewInstances,
                            "TooFewInstances: " + std::to_string(count) +
                                " pairwise-distinct binders over " +
                                spec.templates[static_cast<std::size_t>(t)].name +
                                " but only " +
                                std::to_string(sizes[static_cast<std::size_t>(t)]) +
                                " instance(s)");
    }

    std::vector<std::vector<int>> result;
    std::vector<int> current(prop.binders.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == prop.binders.size()) {
            result.push_back(current);
            return;
        }
        int t = prop.binders[k].template_index;
        for (int i = 1; i <= sizes[static_cast<std::size_t>(t)]; ++i) {
            if (prop.pairwise_distinct) {
                bool clash = false;
                for (std::size_t j = 0; j < k; ++j)
                    if (prop.binders[j].template_index == t && current[j] == i)
                        clash = true;
                if (clash) continue;
            }
            current[k] = i;
            rec(k + 1);
        }
    };
    rec(0);
    return result;
}

Verdict check_ground(const NetworkSpec& spec, const SizeVector& sizes,
                     const GroundProperty& prop) {
    Prepared prep = prepare(spec, prop.bound);
    return check_ground_prepared(prep, sizes, prop);
}

Verdict check(const NetworkSpec& spec, const SizeVector& sizes,
              const Property& prop) {
    Prepared prep = prepare(spec, prop.bound);
    auto assignments = expand_assignments(prop, *prep.spec, sizes);

    // The pure reachability forms share one exploration across assignments.
    bool group_ef = prop.quantifier == PathQuantifier::E && prop.op == PathOp::F;
    bool group_ag = (prop.quantifier == PathQuantifier::A ||
                     prop.quantifier == PathQuantifier::Afin) &&
                    prop.op == PathOp::G;
    if (group_ef || group_ag) {
        std::optional<std::int64_t> zb;
        TimeBound bound = prep.bound;
        if (!bound.is_trivial()) zb = bound.value.as_integer();
        ZoneContext ctx(*prep.spec, sizes, zb);

        std::vector<GroundFormula> formulas;
        formulas.reserve(assignments.size());
        for (const auto& a : assignments) {
            GroundFormula g = ground(prop.phi, prop, a);
            formulas.push_back(group_ag ? ground_not(std::move(g)) : std::move(g));
        }
        std::vector<const GroundFormula*> targets;
        for (const auto& f : formulas) targets.push_back(&f);

        // Orbit of an assignment under instance permutations: determined by
        // which binders of the same template share an instance. The grouped
        // target family is permutation-closed (all assignments are present),
        // so the quotient decides every orbit at once.
        std::map<std::vector<int>, int> orbit_ids;
        std::vector<int> orbit_of(assignments.size());
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            std::vector<int> pat(assignments[i].size(), -1);
            for (std::size_t b = 0; b < assignments[i].size(); ++b)
                for (std::size_t c = 0; c < b; ++c)
                    if (prop.binders[c].template_index ==
                            prop.binders[b].template_index &&
                        assignments[i][c] == assignments[i][b]) {
                        pat[b] = static_cast<int>(c);
                        break;
                    }
            auto [it, _] = orbit_ids.try_emplace(
                pat, static_cast<int>(orbit_ids.size()));
            orbit_of[i] = it->second;
        }

        auto r = reach_targets_quotient(ctx, targets, bound, orbit_of,
                                        static_cast<int>(orbit_ids.size()),
                                        group_ag);
        Verdict v;
        v.run_spec = prep.spec;
        v.stats.states_explored = r.explored;

        auto rerun = [&](std::size_t i) {
            GroundProperty gp;
            gp.quantifier = prop.quantifier;
            gp.op = prop.op;
            gp.bound = prop.bound;
            gp.phi = ground(prop.phi, prop, assignments[i]);
            gp.assignment = assignments[i];
            return check_ground_prepared(prep, sizes, gp);
        };

        if (group_ag) {
            v.truth = r.first_hit < 0;
            if (!v.truth) {
                // An ungrouped rerun of the hit assignment rebuilds a
                // concrete counterexample (quotient paths cross permuted
                // representatives and cannot be replayed directly).
                auto i = static_cast<std::size_t>(r.first_hit);
                Verdict single = rerun(i);
                single.stats.states_explored += v.stats.states_explored;
                return single;
            }
        } else {
            v.truth = true;
            for (std::size_t i = 0; i < assignments.size(); ++i)
                if (!r.orbit_hit[static_cast<std::size_t>(orbit_of[i])]) {
                    v.truth = false;
                    v.assignment = assignments[i];
                    break;
                }
            if (v.truth && !assignments.empty()) {
                Verdict single = rerun(0);
                v.assignment = assignments[0];
                v.run = single.run;
                v.stats.states_explored += single.stats.states_explored;
            }
        }
        return v;
    }

    Verdict total;
    total.truth = true;
    total.run_spec = prep.spec;
    for (const auto& a : assignments) {
        GroundProperty gp;
        gp.quantifier = prop.quantifier;
        gp.op = prop.op;
        gp.bound = prop.bound;
        gp.phi = ground(prop.phi, prop, a);
        if (prop.op == PathOp::U) gp.psi = ground(prop.psi, prop, a);
        gp.assignment = a;
        Verdict v = check_ground_prepared(prep, sizes, gp);
        total.stats.states_explored += v.stats.states_explored;
        if (!v.truth) {
            v.stats = total.stats;
            return v;
        }
        if (!total.run && v.run) {
            total.run = v.run;
            total.assignment = a;
        }
    }
    return total;
}

}  // namespace pnta
