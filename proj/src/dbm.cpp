#include "pnta/dbm.hpp"

#include "pnta/errors.hpp"

namespace pnta {

DBM::DBM(int num_clocks) : dim_(num_clocks + 1) {
    m_.assign(static_cast<std::size_t>(dim_) * dim_, kBoundInf);
    for (int i = 0; i < dim_; ++i) set(i, i, kLeZero);
    for (int i = 1; i < dim_; ++i) set(0, i, kLeZero);  // clocks non-negative
}

DBM DBM::zero(int num_clocks) {
    DBM d(num_clocks);
    for (int i = 0; i < d.dim_; ++i)
        for (int j = 0; j < d.dim_; ++j) d.set(i, j, kLeZero);
    return d;
}

DBM DBM::universal(int num_clocks) { return DBM(num_clocks); }

void DBM::canonicalize() {
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i) {
            Bound ik = at(i, k);
            if (ik == kBoundInf) continue;
            for (int j = 0; j < dim_; ++j) {
                Bound kj = at(k, j);
                if (kj == kBoundInf) continue;
                Bound through = bound_add(ik, kj);
                if (through < at(i, j)) set(i, j, through);
            }
        }
    for (int i = 0; i < dim_; ++i)
        if (at(i, i) < kLeZero) {
            empty_ = true;
            return;
        }
    empty_ = false;
}

void DBM::up() {
    for (int i = 1; i < dim_; ++i) set(i, 0, kBoundInf);
}

void DBM::reset(const std::vector<int>& clock_rows) {
    for (int c : clock_rows) {
        for (int j = 0; j < dim_; ++j) {
            set(c, j, at(0, j));
            set(j, c, at(j, 0));
        }
        set(c, c, kLeZero);
        set(c, 0, kLeZero);
        set(0, c, kLeZero);
    }
}

void DBM::constrain(int i, int j, Bound b) {
    if (empty_ || b >= at(i, j)) return;
    set(i, j, b);
    if (bound_add(at(j, i), b) < kLeZero) {
        empty_ = true;
        return;
    }
    // Incremental tightening: only paths through the touched edge can improve.
    for (int a = 0; a < dim_; ++a) {
        Bound ai = at(a, i);
        if (ai == kBoundInf) continue;
        Bound aj = bound_add(ai, b);
        if (aj < at(a, j)) set(a, j, aj);
    }
    for (int a = 0; a < dim_; ++a) {
        Bound ja = at(j, a);
        if (ja == kBoundInf) continue;
        for (int c = 0; c < dim_; ++c) {
            Bound cj = at(c, j);
            if (cj == kBoundInf) continue;
            Bound ca = bound_add(cj, ja);
            if (ca < at(c, a)) set(c, a, ca);
        }
    }
}

void DBM::constrain_atom(int row, RelOp op, std::int64_t q) {
    auto v = static_cast<std::int32_t>(q);
    switch (op) {
        case RelOp::Le: constrain(row, 0, make_bound(v, false)); break;
        case RelOp::Lt: constrain(row, 0, make_bound(v, true)); break;
        case RelOp::Ge: constrain(0, row, make_bound(-v, false)); break;
        case RelOp::Gt: constrain(0, row, make_bound(-v, true)); break;
        case RelOp::Eq:
            constrain(row, 0, make_bound(v, false));
            constrain(0, row, make_bound(-v, false));
            break;
    }
}

void DBM::extrapolate(const std::vector<std::int64_t>& max_const) {
    if (empty_) return;
    bool changed = false;
    for (int i = 1; i < dim_; ++i) {
        auto mi = static_cast<std::int32_t>(max_const.at(i - 1));
        for (int j = 0; j < dim_; ++j) {
            if (i == j) continue;
            Bound b = at(i, j);
            if (b != kBoundInf && bound_value(b) > mi) {
                set(i, j, kBoundInf);
                changed = true;
            }
        }
    }
    for (int j = 1; j < dim_; ++j) {
        auto mj = static_cast<std::int32_t>(max_const.at(j - 1));
        for (int i = 0; i < dim_; ++i) {
            if (i == j) continue;
            Bound b = at(i, j);
            if (b != kBoundInf && bound_value(b) < -mj) {
                set(i, j, make_bound(-mj, true));
                changed = true;
            }
        }
    }
    if (changed) canonicalize();
}

DBM DBM::permuted(const std::vector<int>& row_map) const {
    DBM out(num_clocks());
    out.empty_ = empty_;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            out.set(row_map[static_cast<std::size_t>(i)],
                    row_map[static_cast<std::size_t>(j)], at(i, j));
    return out;
}

bool DBM::includes(const DBM& other) const {
    if (other.empty_) return true;
    if (empty_) return false;
    for (std::size_t k = 0; k < m_.size(); ++k)
        if (m_[k] < other.m_[k]) return false;
    return true;
}

bool DBM::contains(const std::vector<Rational>& point) const {
    if (empty_) return false;
    auto value = [&](int i) { return i == 0 ? Rational(0) : point.at(i); };
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            Bound b = at(i, j);
            if (b == kBoundInf) continue;
            Rational diff = value(i) - value(j);
            Rational bv(bound_value(b));
            if (bound_strict(b) ? !(diff < bv) : !(diff <= bv)) return false;
        }
    return true;
}

std::vector<Rational> DBM::sample_point() const {
    if (empty_)
        throw Error(ErrorKind::Internal, "sample_point on empty zone");
    std::vector<Rational> point(static_cast<std::size_t>(dim_), Rational(0));
    // Fix clocks one at a time; canonical form guarantees each partial choice
    // extends. Bounds against already-fixed clocks shrink the feasible
    // interval for the next one.
    for (int i = 1; i < dim_; ++i) {
        bool has_hi = false, hi_strict = false;
        Rational hi;
        bool lo_strict = false;
        Rational lo(0);
        for (int j = 0; j < i; ++j) {
            Bound ub = at(i, j);  // x_i <= x_j + ub
            if (ub != kBoundInf) {
                Rational cand = point[j] + Rational(bound_value(ub));
                if (!has_hi || cand < hi || (cand == hi && bound_strict(ub))) {
                    hi = cand;
                    hi_strict = bound_strict(ub);
                    has_hi = true;
                }
            }
            Bound lb = at(j, i);  // x_i >= x_j - lb
            if (lb != kBoundInf) {
                Rational cand = point[j] - Rational(bound_value(lb));
                if (cand > lo || (cand == lo && bound_strict(lb))) {
                    lo = cand;
                    lo_strict = bound_strict(lb);
                }
            }
        }
        if (!lo_strict)
            point[i] = lo;
        else if (has_hi)
            point[i] = lo + (hi - lo) / Rational(2);
        else
            point[i] = lo + Rational(1, 2);
        (void)hi_strict;
    }
    return point;
}

bool DBM::is_unbounded() const {
    if (empty_) return false;
    for (int i = 1; i < dim_; ++i)
        if (at(i, 0) != kBoundInf) return false;
    return true;
}

std::size_t DBM::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (Bound b : m_) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(b));
        h *= 1099511628211ull;
    }
    return h;
}

std::optional<DBM> uncovered_part(const DBM& zone, const std::vector<DBM>& covers) {
    if (zone.is_empty()) return std::nullopt;
    if (covers.empty()) return zone;

    const DBM& g = covers.front();
    std::vector<DBM> rest(covers.begin() + 1, covers.end());
    if (g.is_empty()) return uncovered_part(zone, rest);

    // Split zone \ g into disjoint pieces, one per violated facet of g;
    // each piece must be covered by the remaining zones.
    DBM remainder = zone;
    for (int i = 0; i < g.dim() && !remainder.is_empty(); ++i)
        for (int j = 0; j < g.dim(); ++j) {
            if (i == j) continue;
            Bound b = g.at(i, j);
            if (b == kBoundInf) continue;
            DBM piece = remainder;
            piece.constrain(j, i, bound_negate(b));
            if (!piece.is_empty())
                if (auto leftover = uncovered_part(piece, rest)) return leftover;
            remainder.constrain(i, j, b);
        }
    return std::nullopt;
}

bool covered_by_union(const DBM& zone, const std::vector<DBM>& covers) {
    return !uncovered_part(zone, covers).has_value();
}

}  // namespace pnta
