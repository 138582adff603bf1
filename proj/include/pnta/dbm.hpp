#ifndef PNTA_DBM_HPP
#define PNTA_DBM_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pnta/model.hpp"
#include "pnta/rational.hpp"

namespace pnta {

// Difference bound encoded as 2*value + (1 if weak '<=' else 0), so raw
// integer comparison orders bounds correctly and INF is a large sentinel.
using Bound = std::int32_t;

constexpr Bound kBoundInf = std::numeric_limits<Bound>::max();
constexpr Bound kLeZero = 1;  // (0, <=)

constexpr Bound make_bound(std::int32_t value, bool strict) {
    return static_cast<Bound>(2 * value + (strict ? 0 : 1));
}
constexpr std::int32_t bound_value(Bound b) {
    return static_cast<std::int32_t>(b >> 1);
}
constexpr bool bound_strict(Bound b) { return (b & 1) == 0; }

inline Bound bound_add(Bound a, Bound b) {
    if (a == kBoundInf || b == kBoundInf) return kBoundInf;
    return a + b - ((a | b) & 1);
}

// ¬(x-y ~ b) as a bound on y-x.
inline Bound bound_negate(Bound b) {
    return make_bound(-bound_value(b), !bound_strict(b));
}

// Canonical DBM over clocks x_1..x_m plus the reference clock x_0 = 0.
// at(i,j) bounds x_i - x_j. Kept canonical (shortest-path closed) by every
// public operation; an empty zone is flagged, not an error.
class DBM {
public:
    DBM() : DBM(0) {}  // zero-clock placeholder
    explicit DBM(int num_clocks);

    static DBM zero(int num_clocks);       // origin point, all clocks = 0
    static DBM universal(int num_clocks);  // all non-negative valuations

    int num_clocks() const { return dim_ - 1; }
    int dim() const { return dim_; }

    Bound at(int i, int j) const { return m_[static_cast<std::size_t>(i) * dim_ + j]; }
    void set(int i, int j, Bound b) { m_[static_cast<std::size_t>(i) * dim_ + j] = b; }

    bool is_empty() const { return empty_; }

    // All-pairs tightening; idempotent; detects emptiness.
    void canonicalize();

    // Future closure: drops individual upper bounds, preserves differences.
    void up();

    // Listed clocks (1-based rows) to zero; other clocks and their mutual
    // differences preserved. Requires canonical input.
    void reset(const std::vector<int>& clock_rows);

    // Tightens x_i - x_j by b and restores canonical form incrementally.
    void constrain(int i, int j, Bound b);

    // One non-diagonal atom against 1-based row `row`; the bound must be an
    // integer (scaled spec). Diagonal atoms are the caller's problem.
    void constrain_atom(int row, RelOp op, std::int64_t q);

    // Classic per-clock max-constant extrapolation; re-canonicalizes.
    void extrapolate(const std::vector<std::int64_t>& max_const);

    // Relabels clocks: entry (i,j) moves to (row_map[i], row_map[j]).
    // row_map must be a permutation of 0..dim-1 fixing 0. Canonical form and
    // emptiness are invariant under relabeling.
    DBM permuted(const std::vector<int>& row_map) const;

    bool includes(const DBM& other) const;  // superset, both canonical
    bool contains(const std::vector<Rational>& point) const;  // point[0] unused

    // Some valuation inside a canonical non-empty zone.
    std::vector<Rational> sample_point() const;

    // True iff the zone has no finite upper bound on any clock (time can
    // diverge without leaving it).
    bool is_unbounded() const;

    bool operator==(const DBM& other) const { return m_ == other.m_; }
    const std::vector<Bound>& raw() const { return m_; }
    std::size_t hash() const;

private:
    int dim_;
    bool empty_ = false;
    std::vector<Bound> m_;
};

// Z ⊆ G_1 ∪ ... ∪ G_r, exact, via recursive difference splitting. All inputs
// canonical; Z may be empty (trivially covered).
bool covered_by_union(const DBM& zone, const std::vector<DBM>& covers);

// A non-empty convex piece of Z \ (G_1 ∪ ... ∪ G_r), or nullopt when covered.
std::optional<DBM> uncovered_part(const DBM& zone, const std::vector<DBM>& covers);

}  // namespace pnta

#endif  // PNTA_DBM_HPP
