#include "pnta/zonegraph.hpp"

#include <algorithm>
#include <sstream>

#include "pnta/errors.hpp"

namespace pnta {

std::size_t SymState::hash() const {
    std::size_t h = zone.hash();
    for (std::uint8_t s : states) h = h * 131 + s;
    return h;
}

ZoneContext::ZoneContext(const NetworkSpec& spec, const SizeVector& sizes,
                         std::optional<std::int64_t> formula_clock_bound)
    : spec_(&spec), sizes_(sizes) {
    if (sizes.size() != spec.templates.size())
        throw Error(ErrorKind::Internal, "size vector arity mismatch");

    auto tmpl_max = max_constants(spec);

    int state_off = 0;
    int clock_off = 0;
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const Template& t = spec.templates[l];
        offset_.push_back(state_off);
        clock_base_.push_back(clock_off);
        state_off += sizes[l];
        clock_off += sizes[l] * static_cast<int>(t.clocks.size());

        ResolvedTemplate rt;
        for (std::size_t s = 0; s < t.states.size(); ++s) {
            auto atoms = convex_atoms(t.invariants[s],
                                      t.name + "/" + t.states[s] + "/inv");
            for (const auto& a : atoms)
                if (a.is_diagonal())
                    throw Error(ErrorKind::DiagonalUnsupported,
                                "DiagonalUnsupported: invariant of " + t.name +
                                    "/" + t.states[s] + " compares two clocks");
            rt.invariants.push_back(std::move(atoms));
        }
        for (std::size_t ti = 0; ti < t.transitions.size(); ++ti) {
            const Transition& tr = t.transitions[ti];
            ResolvedTransition res;
            res.source = tr.source;
            res.target = tr.target;
            res.index = static_cast<int>(ti);
            res.guard = convex_atoms(tr.guard, t.name + "/trans");
            for (const auto& a : res.guard)
                if (a.is_diagonal())
                    throw Error(ErrorKind::DiagonalUnsupported,
                                "DiagonalUnsupported: guard in " + t.name +
                                    " compares two clocks");
            res.resets = tr.resets;
            res.allowed.resize(spec.templates.size());
            for (const auto& [peer_name, states] : tr.sync_guard.allowed) {
                int h = spec.template_index(peer_name);
                if (h < 0)
                    throw Error(ErrorKind::Validation,
                                "guard references unknown template '" +
                                    peer_name + "'");
                const Template& peer = spec.templates[h];
                std::vector<char> mask(peer.states.size(), 0);
                for (const auto& sn : states) {
                    int si = peer.state_index(sn);
                    if (si < 0)
                        throw Error(ErrorKind::Validation,
                                    "guard references unknown state '" + sn +
                                        "' of " + peer_name);
                    mask[static_cast<std::size_t>(si)] = 1;
                }
                res.allowed[static_cast<std::size_t>(h)] = std::move(mask);
            }
            rt.transitions.push_back(std::move(res));
        }
        resolved_.push_back(std::move(rt));
    }
    num_clocks_ = clock_off;
    if (formula_clock_bound) {
        z_row_ = ++num_clocks_;
    }

    max_const_.assign(static_cast<std::size_t>(num_clocks_), 0);
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        int nc = static_cast<int>(spec.templates[l].clocks.size());
        for (int i = 0; i < sizes_[l]; ++i)
            for (int c = 0; c < nc; ++c)
                max_const_[static_cast<std::size_t>(
                    clock_row(static_cast<int>(l), i + 1, c) - 1)] =
                    tmpl_max[l][static_cast<std::size_t>(c)];
    }
    if (z_row_ > 0)
        max_const_[static_cast<std::size_t>(z_row_ - 1)] = *formula_clock_bound;
}

int ZoneContext::clock_row(int t, int instance, int clock) const {
    int nc = static_cast<int>(spec_->templates[static_cast<std::size_t>(t)]
                                  .clocks.size());
    return clock_base_[static_cast<std::size_t>(t)] + (instance - 1) * nc +
           clock + 1;
}

int ZoneContext::state_of(const SymState& s, int t, int instance) const {
    return s.states[static_cast<std::size_t>(
        offset_[static_cast<std::size_t>(t)] + instance - 1)];
}

void ZoneContext::intersect_invariants(
    DBM& zone, const std::vector<std::uint8_t>& states) const {
    for (std::size_t l = 0; l < resolved_.size() && !zone.is_empty(); ++l) {
        for (int i = 0; i < sizes_[l]; ++i) {
            int st = states[static_cast<std::size_t>(
                offset_[l] + i)];
            for (const auto& a :
                 resolved_[l].invariants[static_cast<std::size_t>(st)])
                zone.constrain_atom(
                    clock_row(static_cast<int>(l), i + 1, a.clock), a.op,
                    a.bound.as_integer());
        }
    }
}

void ZoneContext::close_and_extrapolate(
    DBM& zone, const std::vector<std::uint8_t>& states) const {
    zone.up();
    intersect_invariants(zone, states);
    zone.extrapolate(max_const_);
}

SymState ZoneContext::initial() const {
    SymState s;
    int total = 0;
    for (int n : sizes_) total += n;
    s.states.assign(static_cast<std::size_t>(total), 0);
    for (std::size_t l = 0; l < resolved_.size(); ++l) {
        int init = spec_->templates[l].initial;
        for (int i = 0; i < sizes_[l]; ++i)
            s.states[static_cast<std::size_t>(offset_[l] + i)] =
                static_cast<std::uint8_t>(init);
    }
    s.zone = DBM::zero(num_clocks_);
    close_and_extrapolate(s.zone, s.states);
    return s;
}

bool ZoneContext::sync_guard_holds(const std::vector<std::uint8_t>& states,
                                   const ResolvedTransition& tr, int owner_t,
                                   int owner_i) const {
    for (std::size_t h = 0; h < tr.allowed.size(); ++h) {
        const auto& mask = tr.allowed[h];
        if (mask.empty()) continue;
        for (int j = 0; j < sizes_[h]; ++j) {
            if (static_cast<int>(h) == owner_t && j + 1 == owner_i) continue;
            if (!mask[states[static_cast<std::size_t>(offset_[h] + j)]])
                return false;
        }
    }
    return true;
}

std::vector<ZoneEdge> ZoneContext::successors(const SymState& s) const {
    std::vector<ZoneEdge> edges;
    for (std::size_t l = 0; l < resolved_.size(); ++l) {
        for (int i = 0; i < sizes_[l]; ++i) {
            int st = s.states[static_cast<std::size_t>(offset_[l] + i)];
            for (const auto& tr : resolved_[l].transitions) {
                if (tr.source != st) continue;
                if (!sync_guard_holds(s.states, tr, static_cast<int>(l), i + 1))
                    continue;
                DBM z = s.zone;
                for (const auto& a : tr.guard)
                    z.constrain_atom(clock_row(static_cast<int>(l), i + 1,
                                               a.clock),
                                     a.op, a.bound.as_integer());
                if (z.is_empty()) continue;
                std::vector<int> rows;
                rows.reserve(tr.resets.size());
                for (int c : tr.resets)
                    rows.push_back(clock_row(static_cast<int>(l), i + 1, c));
                z.reset(rows);
                for (const auto& a :
                     resolved_[l].invariants[static_cast<std::size_t>(
                         tr.target)])
                    z.constrain_atom(clock_row(static_cast<int>(l), i + 1,
                                               a.clock),
                                     a.op, a.bound.as_integer());
                if (z.is_empty()) continue;

                ZoneEdge e;
                e.template_index = static_cast<int>(l);
                e.instance = i + 1;
                e.transition = tr.index;
                e.entry_zone = z;
                e.target.states = s.states;
                e.target.states[static_cast<std::size_t>(offset_[l] + i)] =
                    static_cast<std::uint8_t>(tr.target);
                e.target.zone = std::move(z);
                close_and_extrapolate(e.target.zone, e.target.states);
                if (e.target.zone.is_empty()) continue;
                edges.push_back(std::move(e));
            }
        }
    }
    return edges;
}

bool ZoneContext::eval(const GroundFormula& f,
                       const std::vector<std::uint8_t>& states) const {
    using K = StateFormula::Kind;
    switch (f.kind) {
        case K::True: return true;
        case K::Atom:
            return states[static_cast<std::size_t>(
                       offset_[static_cast<std::size_t>(
                           f.atom.template_index)] +
                       f.atom.instance - 1)] == f.atom.state;
        case K::Not: return !eval(f.children.front(), states);
        case K::And:
            for (const auto& c : f.children)
                if (!eval(c, states)) return false;
            return true;
        case K::Or:
            for (const auto& c : f.children)
                if (eval(c, states)) return true;
            return false;
    }
    return false;
}

bool ZoneContext::bound_satisfiable(const DBM& zone,
                                    const TimeBound& bound) const {
    if (zone.is_empty()) return false;
    if (z_row_ == 0) return true;  // trivial bound: no clock was allocated
    DBM z = zone;
    constrain_bound(z, bound);
    return !z.is_empty();
}

void ZoneContext::constrain_bound(DBM& zone, const TimeBound& bound) const {
    if (z_row_ == 0) return;
    zone.constrain_atom(z_row_, bound.op, bound.value.as_integer());
}

void ZoneContext::canonicalize(SymState& s) const {
    const int dim = s.zone.dim();

    // Rows usable in sort keys without depending on instance order: the
    // reference row, the formula clock, and templates sorted in earlier
    // iterations of the outer loop (their permutation is applied before the
    // next template reads the zone).
    std::vector<int> fixed{0};
    if (z_row_ > 0) fixed.push_back(z_row_);

    for (std::size_t l = 0; l < spec_->templates.size(); ++l) {
        const DBM& z = s.zone;
        int n = sizes_[l];
        int nc = static_cast<int>(spec_->templates[l].clocks.size());
        if (n >= 2) {
            struct Key {
                std::vector<std::int64_t> base;
                std::vector<std::vector<std::int64_t>> rel;
                int inst;  // 0-based
            };
            std::vector<Key> keys(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                Key& k = keys[static_cast<std::size_t>(i)];
                k.inst = i;
                k.base.push_back(
                    s.states[static_cast<std::size_t>(offset_[l] + i)]);
                for (int c = 0; c < nc; ++c) {
                    int r = clock_row(static_cast<int>(l), i + 1, c);
                    k.base.push_back(z.at(r, 0));
                    k.base.push_back(z.at(0, r));
                    for (int f : fixed) {
                        if (f == 0) continue;
                        k.base.push_back(z.at(r, f));
                        k.base.push_back(z.at(f, r));
                    }
                }
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    std::vector<std::int64_t> rel;
                    rel.push_back(
                        s.states[static_cast<std::size_t>(offset_[l] + j)]);
                    for (int ca = 0; ca < nc; ++ca) {
                        int ra = clock_row(static_cast<int>(l), i + 1, ca);
                        for (int cb = 0; cb < nc; ++cb) {
                            int rb = clock_row(static_cast<int>(l), j + 1, cb);
                            rel.push_back(z.at(ra, rb));
                            rel.push_back(z.at(rb, ra));
                            rel.push_back(z.at(rb, 0));
                            rel.push_back(z.at(0, rb));
                        }
                    }
                    k.rel.push_back(std::move(rel));
                }
                std::sort(k.rel.begin(), k.rel.end());
            }
            std::stable_sort(keys.begin(), keys.end(),
                             [](const Key& a, const Key& b) {
                                 if (a.base != b.base) return a.base < b.base;
                                 return a.rel < b.rel;
                             });
            bool moved = false;
            for (int p = 0; p < n; ++p)
                if (keys[static_cast<std::size_t>(p)].inst != p) moved = true;
            if (moved) {
                std::vector<int> row_map(static_cast<std::size_t>(dim));
                for (int r = 0; r < dim; ++r)
                    row_map[static_cast<std::size_t>(r)] = r;
                std::vector<std::uint8_t> block(static_cast<std::size_t>(n));
                for (int p = 0; p < n; ++p) {
                    int old = keys[static_cast<std::size_t>(p)].inst;
                    block[static_cast<std::size_t>(p)] =
                        s.states[static_cast<std::size_t>(offset_[l] + old)];
                    for (int c = 0; c < nc; ++c)
                        row_map[static_cast<std::size_t>(
                            clock_row(static_cast<int>(l), old + 1, c))] =
                            clock_row(static_cast<int>(l), p + 1, c);
                }
                for (int p = 0; p < n; ++p)
                    s.states[static_cast<std::size_t>(offset_[l] + p)] =
                        block[static_cast<std::size_t>(p)];
                s.zone = s.zone.permuted(row_map);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < nc; ++c)
                fixed.push_back(clock_row(static_cast<int>(l), i + 1, c));
    }
}

bool ZoneContext::divergent_idle(const SymState& s) const {
    for (std::size_t l = 0; l < resolved_.size(); ++l)
        for (int i = 0; i < sizes_[l]; ++i) {
            int st = s.states[static_cast<std::size_t>(offset_[l] + i)];
            for (const auto& a :
                 resolved_[l].invariants[static_cast<std::size_t>(st)])
                if (a.op == RelOp::Le || a.op == RelOp::Lt ||
                    a.op == RelOp::Eq)
                    return false;
        }
    return true;
}

std::optional<DBM> ZoneContext::deadlocked_piece(const SymState& s) const {
    // Candidate transitions enabled from s's discrete part, as zones over the
    // same clock space: guard ∩ (target invariant pulled back through resets).
    std::vector<DBM> enabled;
    for (std::size_t l = 0; l < resolved_.size(); ++l) {
        for (int i = 0; i < sizes_[l]; ++i) {
            int st = s.states[static_cast<std::size_t>(offset_[l] + i)];
            for (const auto& tr : resolved_[l].transitions) {
                if (tr.source != st) continue;
                if (!sync_guard_holds(s.states, tr, static_cast<int>(l), i + 1))
                    continue;
                DBM g = DBM::universal(num_clocks_);
                for (const auto& a : tr.guard)
                    g.constrain_atom(clock_row(static_cast<int>(l), i + 1,
                                               a.clock),
                                     a.op, a.bound.as_integer());
                bool feasible = true;
                for (const auto& a :
                     resolved_[l].invariants[static_cast<std::size_t>(
                         tr.target)]) {
                    bool reset = false;
                    for (int c : tr.resets) reset |= (c == a.clock);
                    if (reset) {
                        // the clock is 0 on entry: the atom is a constant
                        Rational zero(0);
                        bool ok = true;
                        switch (a.op) {
                            case RelOp::Lt: ok = zero < a.bound; break;
                            case RelOp::Le: ok = zero <= a.bound; break;
                            case RelOp::Gt: ok = zero > a.bound; break;
                            case RelOp::Ge: ok = zero >= a.bound; break;
                            case RelOp::Eq: ok = zero == a.bound; break;
                        }
                        if (!ok) { feasible = false; break; }
                    } else {
                        g.constrain_atom(clock_row(static_cast<int>(l), i + 1,
                                                   a.clock),
                                         a.op, a.bound.as_integer());
                    }
                }
                if (feasible && !g.is_empty()) enabled.push_back(std::move(g));
            }
        }
    }

    // Delay is blocked exactly where some closed invariant upper bound is
    // tight. Slice the zone along each such boundary and look for a part no
    // enabled transition covers.
    for (std::size_t l = 0; l < resolved_.size(); ++l) {
        for (int i = 0; i < sizes_[l]; ++i) {
            int st = s.states[static_cast<std::size_t>(offset_[l] + i)];
            for (const auto& a :
                 resolved_[l].invariants[static_cast<std::size_t>(st)]) {
                if (a.op != RelOp::Le && a.op != RelOp::Eq) continue;
                DBM slice = s.zone;
                slice.constrain_atom(
                    clock_row(static_cast<int>(l), i + 1, a.clock), RelOp::Eq,
                    a.bound.as_integer());
                if (slice.is_empty()) continue;
                if (auto piece = uncovered_part(slice, enabled)) return piece;
            }
        }
    }
    return std::nullopt;
}

std::string ZoneContext::state_str(const SymState& s) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t l = 0; l < resolved_.size(); ++l) {
        const Template& t = spec_->templates[l];
        for (int i = 0; i < sizes_[l]; ++i) {
            if (!first) os << " ";
            first = false;
            os << t.name << "[" << (i + 1) << "]="
               << t.states[s.states[static_cast<std::size_t>(offset_[l] + i)]];
        }
    }
    return os.str();
}

}  // namespace pnta
