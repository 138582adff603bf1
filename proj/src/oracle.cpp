#include "pnta/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "pnta/errors.hpp"

namespace pnta {

namespace {

bool closed_op(RelOp op) {
    return op == RelOp::Le || op == RelOp::Ge || op == RelOp::Eq;
}

bool eval_atom(RelOp op, std::int32_t v, std::int64_t q) {
    switch (op) {
        case RelOp::Le: return v <= q;
        case RelOp::Ge: return v >= q;
        case RelOp::Eq: return v == q;
        case RelOp::Lt: return v < q;
        case RelOp::Gt: return v > q;
    }
    return false;
}

}  // namespace

DigitalContext::DigitalContext(const NetworkSpec& spec, const SizeVector& sizes,
                               std::optional<std::int64_t> z_bound,
                               std::vector<int> protected_counts)
    : spec_(&spec), sizes_(sizes), protected_(std::move(protected_counts)) {
    if (sizes.size() != spec.templates.size())
        throw Error(ErrorKind::Internal, "size vector arity mismatch");
    if (protected_.empty())
        protected_.assign(sizes.begin(), sizes.end());  // no quotient
    else
        protected_.resize(spec.templates.size(), 0);

    auto tmpl_max = max_constants(spec);
    int off = 0;
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const Template& t = spec.templates[l];
        Slot slot;
        slot.base = off;
        slot.num_clocks = static_cast<int>(t.clocks.size());
        off += sizes[l] * (1 + slot.num_clocks);
        slot_.push_back(slot);

        std::vector<std::int32_t> caps;
        for (auto m : tmpl_max[l]) caps.push_back(static_cast<std::int32_t>(m) + 1);
        cap_.push_back(std::move(caps));

        std::vector<ConvexConstraint> invs;
        for (std::size_t s = 0; s < t.states.size(); ++s) {
            auto atoms = convex_atoms(t.invariants[s],
                                      t.name + "/" + t.states[s] + "/inv");
            for (const auto& a : atoms) {
                if (a.is_diagonal())
                    throw Error(ErrorKind::DiagonalUnsupported,
                                "DiagonalUnsupported: digitized engine, "
                                "invariant of " + t.name);
                if (!closed_op(a.op))
                    throw Error(ErrorKind::StrictConstraintUnsupported,
                                "StrictConstraintUnsupported: digitized "
                                "engine needs closed constraints (" +
                                    t.name + "/" + t.states[s] + ")");
                if (!a.bound.is_integer())
                    throw Error(ErrorKind::Internal,
                                "digitized engine needs an integer-scaled spec");
            }
            invs.push_back(std::move(atoms));
        }
        inv_.push_back(std::move(invs));

        std::vector<ConvexConstraint> guards;
        std::vector<std::vector<std::vector<char>>> allowed;
        for (const auto& tr : t.transitions) {
            auto atoms = convex_atoms(tr.guard, t.name + "/trans");
            for (const auto& a : atoms) {
                if (a.is_diagonal())
                    throw Error(ErrorKind::DiagonalUnsupported,
                                "DiagonalUnsupported: digitized engine, "
                                "guard in " + t.name);
                if (!closed_op(a.op))
                    throw Error(ErrorKind::StrictConstraintUnsupported,
                                "StrictConstraintUnsupported: digitized "
                                "engine needs closed constraints (" + t.name +
                                    ")");
                if (!a.bound.is_integer())
                    throw Error(ErrorKind::Internal,
                                "digitized engine needs an integer-scaled spec");
            }
            guards.push_back(std::move(atoms));

            std::vector<std::vector<char>> masks(spec.templates.size());
            for (const auto& [peer_name, states] : tr.sync_guard.allowed) {
                int h = spec.template_index(peer_name);
                if (h < 0)
                    throw Error(ErrorKind::Validation,
                                "guard references unknown template '" +
                                    peer_name + "'");
                const Template& peer = spec.templates[static_cast<std::size_t>(h)];
                std::vector<char> mask(peer.states.size(), 0);
                for (const auto& sn : states) {
                    int si = peer.state_index(sn);
                    if (si < 0)
                        throw Error(ErrorKind::Validation,
                                    "guard references unknown state '" + sn + "'");
                    mask[static_cast<std::size_t>(si)] = 1;
                }
                masks[static_cast<std::size_t>(h)] = std::move(mask);
            }
            allowed.push_back(std::move(masks));
        }
        guard_.push_back(std::move(guards));
        allowed_.push_back(std::move(allowed));
    }
    if (z_bound) {
        z_slot_ = off;
        z_cap_ = static_cast<std::int32_t>(*z_bound) + 1;
    }
}

DigitalNode DigitalContext::initial() const {
    int total = z_slot_ >= 0 ? z_slot_ + 1 : 0;
    if (total == 0)
        for (std::size_t l = 0; l < slot_.size(); ++l)
            total += sizes_[l] * (1 + slot_[l].num_clocks);
    DigitalNode n(static_cast<std::size_t>(total), 0);
    for (std::size_t l = 0; l < slot_.size(); ++l) {
        int init = spec_->templates[l].initial;
        int blk = 1 + slot_[l].num_clocks;
        for (int i = 0; i < sizes_[l]; ++i)
            n[static_cast<std::size_t>(slot_[l].base + i * blk)] = init;
    }
    return n;
}

bool DigitalContext::invariant_holds(const DigitalNode& n, int t, int i,
                                     int state, int clock_shift) const {
    const Slot& slot = slot_[static_cast<std::size_t>(t)];
    int blk = 1 + slot.num_clocks;
    int base = slot.base + i * blk;
    for (const auto& a : inv_[static_cast<std::size_t>(t)][static_cast<std::size_t>(state)]) {
        std::int32_t v = n[static_cast<std::size_t>(base + 1 + a.clock)];
        if (clock_shift)
            v = std::min<std::int32_t>(v + clock_shift,
                                       cap_[static_cast<std::size_t>(t)]
                                           [static_cast<std::size_t>(a.clock)]);
        if (!eval_atom(a.op, v, a.bound.as_integer())) return false;
    }
    return true;
}

bool DigitalContext::delay_allowed(const DigitalNode& n) const {
    for (std::size_t l = 0; l < slot_.size(); ++l) {
        int blk = 1 + slot_[l].num_clocks;
        for (int i = 0; i < sizes_[l]; ++i) {
            int state = n[static_cast<std::size_t>(slot_[l].base + i * blk)];
            if (!invariant_holds(n, static_cast<int>(l), i, state, 1))
                return false;
        }
    }
    return true;
}

void DigitalContext::canonicalize(DigitalNode& n) const {
    for (std::size_t l = 0; l < slot_.size(); ++l) {
        int blk = 1 + slot_[l].num_clocks;
        int from = protected_[l];
        if (sizes_[l] - from < 2) continue;
        auto begin = n.begin() + slot_[l].base + from * blk;
        int count = sizes_[l] - from;
        std::vector<std::vector<std::int32_t>> blocks;
        blocks.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            blocks.emplace_back(begin + i * blk, begin + (i + 1) * blk);
        std::sort(blocks.begin(), blocks.end());
        auto out = begin;
        for (const auto& b : blocks) out = std::copy(b.begin(), b.end(), out);
    }
}

std::vector<DigitalNode> DigitalContext::successors(const DigitalNode& n) const {
    std::vector<DigitalNode> result;
    for (auto& [step, d] : labeled_successors(n)) result.push_back(std::move(d));
    return result;
}

std::vector<std::pair<DigitalContext::DigitalStep, DigitalNode>>
DigitalContext::labeled_successors(const DigitalNode& n) const {
    std::vector<std::pair<DigitalStep, DigitalNode>> result;
    if (delay_allowed(n)) {
        DigitalNode d = n;
        for (std::size_t l = 0; l < slot_.size(); ++l) {
            int blk = 1 + slot_[l].num_clocks;
            for (int i = 0; i < sizes_[l]; ++i)
                for (int c = 0; c < slot_[l].num_clocks; ++c) {
                    auto& v = d[static_cast<std::size_t>(slot_[l].base + i * blk + 1 + c)];
                    v = std::min<std::int32_t>(v + 1,
                                               cap_[l][static_cast<std::size_t>(c)]);
                }
        }
        if (z_slot_ >= 0) {
            auto& v = d[static_cast<std::size_t>(z_slot_)];
            v = std::min<std::int32_t>(v + 1, z_cap_);
        }
        canonicalize(d);
        result.emplace_back(DigitalStep{true, -1, -1, -1}, std::move(d));
    }

    for (std::size_t l = 0; l < slot_.size(); ++l) {
        int blk = 1 + slot_[l].num_clocks;
        const Template& t = spec_->templates[l];
        for (int i = 0; i < sizes_[l]; ++i) {
            int base = slot_[l].base + i * blk;
            int state = n[static_cast<std::size_t>(base)];
            for (std::size_t ti = 0; ti < t.transitions.size(); ++ti) {
                const Transition& tr = t.transitions[ti];
                if (tr.source != state) continue;
                bool ok = true;
                for (const auto& a : guard_[l][ti]) {
                    std::int32_t v = n[static_cast<std::size_t>(base + 1 + a.clock)];
                    if (!eval_atom(a.op, v, a.bound.as_integer())) { ok = false; break; }
                }
                if (!ok) continue;
                for (std::size_t h = 0; h < allowed_[l][ti].size() && ok; ++h) {
                    const auto& mask = allowed_[l][ti][h];
                    if (mask.empty()) continue;
                    int hblk = 1 + slot_[h].num_clocks;
                    for (int j = 0; j < sizes_[h]; ++j) {
                        if (h == l && j == i) continue;
                        if (!mask[n[static_cast<std::size_t>(slot_[h].base + j * hblk)]]) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) continue;
                DigitalNode d = n;
                d[static_cast<std::size_t>(base)] = tr.target;
                for (int c : tr.resets)
                    d[static_cast<std::size_t>(base + 1 + c)] = 0;
                if (!invariant_holds(d, static_cast<int>(l), i, tr.target, 0))
                    continue;
                canonicalize(d);
                result.emplace_back(
                    DigitalStep{false, static_cast<int>(l), i + 1,
                                static_cast<int>(ti)},
                    std::move(d));
            }
        }
    }
    return result;
}

bool DigitalContext::is_deadlock(const DigitalNode& n) const {
    return successors(n).empty();
}

bool DigitalContext::eval(const GroundFormula& f, const DigitalNode& n) const {
    using K = StateFormula::Kind;
    switch (f.kind) {
        case K::True: return true;
        case K::Atom: {
            const Slot& slot = slot_[static_cast<std::size_t>(f.atom.template_index)];
            int blk = 1 + slot.num_clocks;
            return n[static_cast<std::size_t>(slot.base +
                                              (f.atom.instance - 1) * blk)] ==
                   f.atom.state;
        }
        case K::Not: return !eval(f.children.front(), n);
        case K::And:
            for (const auto& c : f.children)
                if (!eval(c, n)) return false;
            return true;
        case K::Or:
            for (const auto& c : f.children)
                if (eval(c, n)) return true;
            return false;
    }
    return false;
}

bool DigitalContext::bound_holds(const DigitalNode& n, const TimeBound& bound) const {
    if (bound.is_trivial()) return true;
    if (z_slot_ < 0)
        throw Error(ErrorKind::Internal, "bound check without a formula clock");
    return eval_atom(bound.op, n[static_cast<std::size_t>(z_slot_)],
                     bound.value.as_integer());
}

namespace {

using Pred = std::function<bool(const DigitalNode&)>;

bool exists_reach(const DigitalContext& ctx, const Pred& target) {
    std::unordered_set<DigitalNode, DigitalNodeHash> seen;
    std::deque<DigitalNode> queue;
    DigitalNode init = ctx.initial();
    ctx.canonicalize(init);
    queue.push_back(init);
    seen.insert(init);
    while (!queue.empty()) {
        DigitalNode n = std::move(queue.front());
        queue.pop_front();
        if (target(n)) return true;
        for (auto& s : ctx.successors(n))
            if (seen.insert(s).second) queue.push_back(std::move(s));
    }
    return false;
}

// A maximal run staying inside `ok`: a reachable cycle in the restricted
// graph, or (if allowed) a node with no successors at all.
bool exists_maximal_within(const DigitalContext& ctx, const Pred& ok,
                           bool include_deadlock) {
    enum : char { Gray = 1, Black = 2 };
    std::unordered_map<DigitalNode, char, DigitalNodeHash> color;
    struct Frame {
        DigitalNode node;
        std::vector<DigitalNode> succ;
        std::size_t next = 0;
    };
    DigitalNode init = ctx.initial();
    ctx.canonicalize(init);
    if (!ok(init)) return false;

    std::vector<Frame> stack;
    auto open = [&](DigitalNode n) {
        Frame f;
        f.succ = ctx.successors(n);
        f.node = std::move(n);
        color[f.node] = Gray;
        stack.push_back(std::move(f));
    };
    open(std::move(init));
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == 0 && include_deadlock && f.succ.empty()) return true;
        if (f.next >= f.succ.size()) {
            color[f.node] = Black;
            stack.pop_back();
            continue;
        }
        DigitalNode s = std::move(f.succ[f.next++]);
        if (!ok(s)) continue;
        auto it = color.find(s);
        if (it == color.end())
            open(std::move(s));
        else if (it->second == Gray)
            return true;
    }
    return false;
}

// A reachable node satisfying `target` that still has an infinite
// continuation (can reach a cycle; delay self-loops count).
bool exists_on_infinite(const DigitalContext& ctx, const Pred& target) {
    std::unordered_map<DigitalNode, int, DigitalNodeHash> id;
    std::vector<DigitalNode> nodes;
    std::vector<std::vector<int>> adj;
    std::deque<int> queue;
    DigitalNode init = ctx.initial();
    ctx.canonicalize(init);
    id.emplace(init, 0);
    nodes.push_back(init);
    adj.emplace_back();
    queue.push_back(0);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (auto& s : ctx.successors(nodes[static_cast<std::size_t>(u)])) {
            auto [it, fresh] = id.emplace(std::move(s), static_cast<int>(nodes.size()));
            if (fresh) {
                nodes.push_back(it->first);
                adj.emplace_back();
                queue.push_back(it->second);
            }
            adj[static_cast<std::size_t>(u)].push_back(it->second);
        }
    }

    // Tarjan SCCs, iterative; SCCs pop in reverse topological order, so a
    // single pass propagates "can reach a cycle" across SCC edges.
    int n = static_cast<int>(nodes.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1),
        low(static_cast<std::size_t>(n), 0), comp(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> scc_stack;
    std::vector<char> comp_inf;
    int next_index = 0;

    struct TFrame { int v; std::size_t next = 0; };
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<TFrame> call;
        call.push_back({root});
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
        scc_stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!call.empty()) {
            TFrame& fr = call.back();
            auto& edges = adj[static_cast<std::size_t>(fr.v)];
            if (fr.next < edges.size()) {
                int w = edges[fr.next++];
                if (index[static_cast<std::size_t>(w)] == -1) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
                    scc_stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = 1;
                    call.push_back({w});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(fr.v)] =
                        std::min(low[static_cast<std::size_t>(fr.v)],
                                 index[static_cast<std::size_t>(w)]);
                }
            } else {
                int v = fr.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<std::size_t>(call.back().v)] =
                        std::min(low[static_cast<std::size_t>(call.back().v)],
                                 low[static_cast<std::size_t>(v)]);
                if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                    int c = static_cast<int>(comp_inf.size());
                    int size = 0;
                    bool self_loop = false;
                    while (true) {
                        int w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp[static_cast<std::size_t>(w)] = c;
                        ++size;
                        if (w == v) break;
                    }
                    bool reaches = false;
                    // revisit members to classify: cyclic or exits to an
                    // already-finished (hence deeper) component that can
                    for (int w = 0; w < n; ++w) {
                        if (comp[static_cast<std::size_t>(w)] != c) continue;
                        for (int x : adj[static_cast<std::size_t>(w)]) {
                            if (x == w) self_loop = true;
                            int cx = comp[static_cast<std::size_t>(x)];
                            if (cx != -1 && cx != c && comp_inf[static_cast<std::size_t>(cx)])
                                reaches = true;
                        }
                    }
                    comp_inf.push_back(size > 1 || self_loop || reaches);
                }
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (comp_inf[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] &&
            target(nodes[static_cast<std::size_t>(v)]))
            return true;
    return false;
}

// Like exists_on_infinite, but restricted to the subgraph of nodes satisfying
// `within`, and the witnessing cycle must contain a delay edge (the digitized
// image of a time-divergent run). Returns true iff some node satisfying
// `target` is reachable within the subgraph and lies on / can reach such a
// cycle.
bool exists_on_nonzeno_within(const DigitalContext& ctx, const Pred& within,
                              const Pred& target) {
    DigitalNode init = ctx.initial();
    ctx.canonicalize(init);
    if (!within(init)) return false;

    std::unordered_map<DigitalNode, int, DigitalNodeHash> id;
    std::vector<DigitalNode> nodes;
    std::vector<std::vector<std::pair<int, char>>> adj;  // (target, is_delay)
    std::deque<int> queue;
    id.emplace(init, 0);
    nodes.push_back(init);
    adj.emplace_back();
    queue.push_back(0);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (auto& [step, s] :
             ctx.labeled_successors(nodes[static_cast<std::size_t>(u)])) {
            if (!within(s)) continue;
            auto [it, fresh] = id.emplace(std::move(s), static_cast<int>(nodes.size()));
            if (fresh) {
                nodes.push_back(it->first);
                adj.emplace_back();
                queue.push_back(it->second);
            }
            adj[static_cast<std::size_t>(u)].emplace_back(
                it->second, static_cast<char>(step.delay));
        }
    }

    int n = static_cast<int>(nodes.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1),
        low(static_cast<std::size_t>(n), 0), comp(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> scc_stack;
    std::vector<char> comp_inf;
    int next_index = 0;

    struct TFrame { int v; std::size_t next = 0; };
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<TFrame> call;
        call.push_back({root});
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
        scc_stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!call.empty()) {
            TFrame& fr = call.back();
            auto& edges = adj[static_cast<std::size_t>(fr.v)];
            if (fr.next < edges.size()) {
                int w = edges[fr.next++].first;
                if (index[static_cast<std::size_t>(w)] == -1) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
                    scc_stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = 1;
                    call.push_back({w});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(fr.v)] =
                        std::min(low[static_cast<std::size_t>(fr.v)],
                                 index[static_cast<std::size_t>(w)]);
                }
            } else {
                int v = fr.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<std::size_t>(call.back().v)] =
                        std::min(low[static_cast<std::size_t>(call.back().v)],
                                 low[static_cast<std::size_t>(v)]);
                if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                    int c = static_cast<int>(comp_inf.size());
                    while (true) {
                        int w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp[static_cast<std::size_t>(w)] = c;
                        if (w == v) break;
                    }
                    // A zeno cycle (sync edges only) does not make an SCC
                    // live: it needs an internal delay edge, or an exit to a
                    // live component.
                    bool live = false;
                    for (int w = 0; w < n && !live; ++w) {
                        if (comp[static_cast<std::size_t>(w)] != c) continue;
                        for (auto [x, is_delay] : adj[static_cast<std::size_t>(w)]) {
                            int cx = comp[static_cast<std::size_t>(x)];
                            if (cx == c && is_delay) { live = true; break; }
                            if (cx != -1 && cx != c &&
                                comp_inf[static_cast<std::size_t>(cx)]) {
                                live = true;
                                break;
                            }
                        }
                    }
                    comp_inf.push_back(live);
                }
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (comp_inf[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] &&
            target(nodes[static_cast<std::size_t>(v)]))
            return true;
    return false;
}

bool exists_until(const DigitalContext& ctx, const GroundFormula& phi,
                  const GroundFormula& psi, const TimeBound& bound) {
    std::unordered_set<DigitalNode, DigitalNodeHash> seen;
    std::deque<DigitalNode> queue;
    DigitalNode init = ctx.initial();
    ctx.canonicalize(init);
    queue.push_back(init);
    seen.insert(init);
    while (!queue.empty()) {
        DigitalNode n = std::move(queue.front());
        queue.pop_front();
        if (ctx.eval(psi, n) && ctx.bound_holds(n, bound)) return true;
        if (!ctx.eval(phi, n)) continue;  // a prefix position must satisfy φ
        for (auto& s : ctx.successors(n))
            if (seen.insert(s).second) queue.push_back(std::move(s));
    }
    return false;
}

// A φ U ψ (trivial bound): false iff some maximal run reaches ¬φ∧¬ψ through
// ¬ψ positions, or stays in ¬ψ forever (cycle or dead end).
bool forall_until(const DigitalContext& ctx, const GroundFormula& phi,
                  const GroundFormula& psi) {
    enum : char { Gray = 1, Black = 2 };
    std::unordered_map<DigitalNode, char, DigitalNodeHash> color;
    struct Frame {
        DigitalNode node;
        std::vector<DigitalNode> succ;
        std::size_t next = 0;
    };
    DigitalNode init = ctx.initial();
    ctx.canonicalize(init);
    if (ctx.eval(psi, init)) return true;
    if (!ctx.eval(phi, init)) return false;

    std::vector<Frame> stack;
    auto open = [&](DigitalNode n) {
        Frame f;
        f.succ = ctx.successors(n);
        f.node = std::move(n);
        color[f.node] = Gray;
        stack.push_back(std::move(f));
    };
    open(std::move(init));
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == 0 && f.succ.empty()) return false;  // dies before ψ
        if (f.next >= f.succ.size()) {
            color[f.node] = Black;
            stack.pop_back();
            continue;
        }
        DigitalNode s = std::move(f.succ[f.next++]);
        if (ctx.eval(psi, s)) continue;  // this branch discharged
        if (!ctx.eval(phi, s)) return false;
        auto it = color.find(s);
        if (it == color.end())
            open(std::move(s));
        else if (it->second == Gray)
            return false;  // ψ never arrives on this loop
    }
    return true;
}

std::vector<int> protected_counts_for(const NetworkSpec& spec,
                                      const GroundProperty& prop) {
    std::vector<int> counts(spec.templates.size(), 0);
    std::function<void(const GroundFormula&)> walk = [&](const GroundFormula& f) {
        if (f.kind == StateFormula::Kind::Atom)
            counts[static_cast<std::size_t>(f.atom.template_index)] = std::max(
                counts[static_cast<std::size_t>(f.atom.template_index)],
                f.atom.instance);
        for (const auto& c : f.children) walk(c);
    };
    walk(prop.phi);
    walk(prop.psi);
    return counts;
}

}  // namespace

bool digital_check(const NetworkSpec& spec, const SizeVector& sizes,
                   const GroundProperty& prop, bool symmetry, bool nonzeno) {
    if (nonzeno && prop.quantifier != PathQuantifier::Einf &&
        prop.quantifier != PathQuantifier::Ainf)
        throw Error(ErrorKind::UnsupportedQuantifierOperator,
                    "UnsupportedQuantifierOperator: nonzeno applies only to "
                    "Einf/Ainf");
    std::optional<std::int64_t> z_bound;
    if (!prop.bound.is_trivial()) {
        if (!closed_op(prop.bound.op))
            throw Error(ErrorKind::StrictConstraintUnsupported,
                        "StrictConstraintUnsupported: digitized engine needs "
                        "a closed time bound");
        z_bound = prop.bound.value.as_integer();
    }
    std::vector<int> prot;
    if (symmetry) prot = protected_counts_for(spec, prop);
    DigitalContext ctx(spec, sizes, z_bound, prot);

    auto sat = [&](const GroundFormula& f, bool bound) {
        return Pred([&ctx, &f, bound, &prop](const DigitalNode& n) {
            return (!bound || ctx.bound_holds(n, prop.bound)) && ctx.eval(f, n);
        });
    };
    GroundFormula not_phi = ground_not(prop.phi);

    switch (prop.quantifier) {
        case PathQuantifier::E:
            switch (prop.op) {
                case PathOp::F: return exists_reach(ctx, sat(prop.phi, true));
                case PathOp::G: {
                    Pred bad = sat(not_phi, true);
                    return exists_maximal_within(
                        ctx, [&](const DigitalNode& n) { return !bad(n); }, true);
                }
                case PathOp::U:
                    return exists_until(ctx, prop.phi, prop.psi, prop.bound);
            }
            break;
        case PathQuantifier::A:
            switch (prop.op) {
                case PathOp::F: {
                    Pred good = sat(prop.phi, true);
                    return !exists_maximal_within(
                        ctx, [&](const DigitalNode& n) { return !good(n); }, true);
                }
                case PathOp::G: return !exists_reach(ctx, sat(not_phi, true));
                case PathOp::U:
                    if (!prop.bound.is_trivial())
                        throw Error(ErrorKind::BoundUnsupported,
                                    "BoundUnsupported: A-until only with [>=0]");
                    return forall_until(ctx, prop.phi, prop.psi);
            }
            break;
        case PathQuantifier::Einf:
            switch (prop.op) {
                case PathOp::F:
                    if (nonzeno)
                        return exists_on_nonzeno_within(
                            ctx, [](const DigitalNode&) { return true; },
                            sat(prop.phi, true));
                    return exists_on_infinite(ctx, sat(prop.phi, true));
                case PathOp::G: {
                    Pred bad = sat(not_phi, true);
                    Pred ok = [&](const DigitalNode& n) { return !bad(n); };
                    if (nonzeno)
                        return exists_on_nonzeno_within(ctx, ok, ok);
                    return exists_maximal_within(ctx, ok, false);
                }
                case PathOp::U:
                    throw Error(ErrorKind::UnsupportedQuantifierOperator,
                                "UnsupportedQuantifierOperator: U under Einf");
            }
            break;
        case PathQuantifier::Ainf:
            switch (prop.op) {
                case PathOp::F: {
                    Pred good = sat(prop.phi, true);
                    Pred away = [&](const DigitalNode& n) { return !good(n); };
                    if (nonzeno)
                        return !exists_on_nonzeno_within(ctx, away, away);
                    return !exists_maximal_within(ctx, away, false);
                }
                case PathOp::G:
                    if (nonzeno)
                        return !exists_on_nonzeno_within(
                            ctx, [](const DigitalNode&) { return true; },
                            sat(not_phi, true));
                    return !exists_on_infinite(ctx, sat(not_phi, true));
                case PathOp::U:
                    throw Error(ErrorKind::UnsupportedQuantifierOperator,
                                "UnsupportedQuantifierOperator: U under Ainf");
            }
            break;
        case PathQuantifier::Efin: {
            if (prop.op != PathOp::G)
                throw Error(ErrorKind::UnsupportedQuantifierOperator,
                            "UnsupportedQuantifierOperator: Efin only with G");
            // The one-position prefix is a finite computation; G over it only
            // inspects time 0.
            DigitalNode init = ctx.initial();
            ctx.canonicalize(init);
            return !(ctx.bound_holds(init, prop.bound) && !ctx.eval(prop.phi, init));
        }
        case PathQuantifier::Afin:
            if (prop.op != PathOp::G)
                throw Error(ErrorKind::UnsupportedQuantifierOperator,
                            "UnsupportedQuantifierOperator: Afin only with G");
            // Finite prefixes cover exactly the reachable positions.
            return !exists_reach(ctx, sat(not_phi, true));
    }
    throw Error(ErrorKind::Internal, "unhandled quantifier/operator");
}

bool digital_reach(const NetworkSpec& spec, const SizeVector& sizes,
                   const GroundFormula& goal, bool symmetry) {
    GroundProperty prop;
    prop.quantifier = PathQuantifier::E;
    prop.op = PathOp::F;
    prop.phi = goal;
    return digital_check(spec, sizes, prop, symmetry);
}

DiscreteReach discrete_reach(const NetworkSpec& spec, const SizeVector& sizes,
                             const GroundFormula& target,
                             std::optional<TimeBound> bound) {
    std::optional<std::int64_t> z_bound;
    TimeBound tb;  // trivial by default
    if (bound && !bound->is_trivial()) {
        if (!closed_op(bound->op))
            throw Error(ErrorKind::StrictConstraintUnsupported,
                        "StrictConstraintUnsupported: digitized engine needs "
                        "a closed time bound");
        tb = *bound;
        z_bound = tb.value.as_integer();
    }
    // No symmetry quotient: the parent chain must be a concrete path.
    DigitalContext ctx(spec, sizes, z_bound, {});

    using Step = DigitalContext::DigitalStep;
    std::unordered_map<DigitalNode, int, DigitalNodeHash> id;
    std::vector<DigitalNode> nodes;
    std::vector<std::pair<int, Step>> parent;  // (parent id, edge into node)
    std::deque<int> queue;
    nodes.push_back(ctx.initial());
    id.emplace(nodes[0], 0);
    parent.emplace_back(-1, Step{});
    queue.push_back(0);

    int hit = -1;
    auto goal = [&](const DigitalNode& n) {
        return ctx.eval(target, n) && ctx.bound_holds(n, tb);
    };
    if (goal(nodes[0])) hit = 0;
    while (hit < 0 && !queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (auto& [step, s] :
             ctx.labeled_successors(nodes[static_cast<std::size_t>(u)])) {
            auto [it, fresh] = id.emplace(std::move(s), static_cast<int>(nodes.size()));
            if (!fresh) continue;
            nodes.push_back(it->first);
            parent.emplace_back(u, step);
            if (goal(nodes.back())) { hit = it->second; break; }
            queue.push_back(it->second);
        }
    }
    DiscreteReach result;
    if (hit < 0) return result;
    result.reachable = true;

    std::vector<Step> path;
    for (int v = hit; parent[static_cast<std::size_t>(v)].first >= 0;
         v = parent[static_cast<std::size_t>(v)].first)
        path.push_back(parent[static_cast<std::size_t>(v)].second);
    std::reverse(path.begin(), path.end());

    // Replay under exact semantics. Closed integer constraints make the
    // capped digital values and the real clocks agree on every guard and
    // invariant, so each digital step is concretely enabled. Consecutive unit
    // delays merge into one step.
    Run run;
    run.configs.push_back(initial_configuration(spec, sizes));
    run.times.emplace_back(0);
    std::size_t pi = 0;
    while (pi < path.size()) {
        if (path[pi].delay) {
            std::int64_t units = 0;
            while (pi < path.size() && path[pi].delay) { ++units; ++pi; }
            Rational d(units);
            run.steps.push_back({RunStep::Kind::Delay, d, -1, -1, -1});
            run.configs.push_back(delay_successor(run.configs.back(), spec, d));
            run.times.push_back(run.times.back() + d);
        } else {
            const Step& st = path[pi++];
            bool found = false;
            for (auto& sc : sync_successors(run.configs.back(), spec)) {
                if (sc.template_index != st.template_index ||
                    sc.instance != st.instance || sc.transition != st.transition)
                    continue;
                run.steps.push_back({RunStep::Kind::Sync, Rational(0),
                                     st.template_index, st.instance,
                                     st.transition});
                run.configs.push_back(std::move(sc.config));
                run.times.push_back(run.times.back());
                found = true;
                break;
            }
            if (!found)
                throw Error(ErrorKind::Internal,
                            "digital witness step not enabled concretely");
        }
    }
    run.klass = RunClass::FinitePrefix;
    result.witness = std::move(run);
    return result;
}

RunClassification classify_runs(const NetworkSpec& spec, const SizeVector& sizes,
                                const GroundFormula& avoid) {
    DigitalContext ctx(spec, sizes, std::nullopt, {});
    Pred clean = [&](const DigitalNode& n) { return ctx.eval(avoid, n); };

    RunClassification result;
    result.has_infinite_avoiding = exists_maximal_within(ctx, clean, false);

    DigitalNode init = ctx.initial();
    if (clean(init)) {
        std::unordered_set<DigitalNode, DigitalNodeHash> seen;
        std::deque<DigitalNode> queue;
        seen.insert(init);
        queue.push_back(std::move(init));
        while (!queue.empty() && !result.has_deadlocked_avoiding) {
            DigitalNode n = std::move(queue.front());
            queue.pop_front();
            auto succ = ctx.successors(n);
            if (succ.empty()) {
                result.has_deadlocked_avoiding = true;
                break;
            }
            for (auto& s : succ)
                if (clean(s) && seen.insert(s).second)
                    queue.push_back(std::move(s));
        }
    }
    return result;
}

}  // namespace pnta
