#ifndef PNTA_SEMANTICS_HPP
#define PNTA_SEMANTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "pnta/model.hpp"
#include "pnta/rational.hpp"

namespace pnta {

// Per-instance snapshot: current state plus exact clock valuation.
struct InstanceState {
    int state = 0;
    std::vector<Rational> clocks;

    bool operator==(const InstanceState&) const = default;
};

// Global snapshot of a concrete instantiation, indexed [template][instance].
struct Configuration {
    std::vector<std::vector<InstanceState>> inst;

    bool operator==(const Configuration&) const = default;
    int size_of(int tmpl) const { return static_cast<int>(inst[tmpl].size()); }
};

enum class RunClass { Infinite, Deadlocked, FinitePrefix };

struct RunStep {
    enum class Kind { Delay, Sync };
    Kind kind = Kind::Delay;
    Rational delay;                         // Delay
    int template_index = -1, instance = -1; // Sync (instance is 1-based)
    int transition = -1;                    // index into the template's list
};

// Finite presentation of a timed computation: configs[0] is the start,
// configs[i+1] the result of steps[i]. A lasso marks the step index the
// cycle re-enters.
struct Run {
    std::vector<Configuration> configs;
    std::vector<Rational> times;  // parallel to configs, times[0] = 0
    std::vector<RunStep> steps;
    RunClass klass = RunClass::FinitePrefix;
    int cycle_start = -1;  // step index, only for Infinite lassos
};

struct SyncSuccessor {
    int template_index = -1;
    int instance = -1;  // 1-based
    int transition = -1;
    Configuration config;
};

// --- operational semantics ------------------------------------------------

Configuration initial_configuration(const NetworkSpec& spec, const SizeVector& sizes);

// Clock-constraint satisfaction at an exact valuation (diagonals included).
bool eval_constraint(const ClockConstraint& c, const std::vector<Rational>& clocks);

// γ holds iff every other instance of each restricted template occupies an
// allowed state. The owner is exempt from its own template's entry.
bool eval_guard(const Configuration& config, const NetworkSpec& spec,
                const ConjunctiveGuard& guard, int owner_template, int owner_instance);

// Supremum of admissible delay from `config` (nullopt = unbounded). Requires
// convex (normalized) invariants. A supremum produced by a strict bound is
// not itself admissible; is_deadlocked only needs positivity.
std::optional<Rational> admissible_delay(const Configuration& config,
                                         const NetworkSpec& spec);

// Advances every clock by d > 0; throws InvariantViolated naming the first
// failing instance and the supremum admissible delay.
Configuration delay_successor(const Configuration& config, const NetworkSpec& spec,
                              const Rational& d);

std::vector<SyncSuccessor> sync_successors(const Configuration& config,
                                           const NetworkSpec& spec);

// No sync successor and no positive delay. Time-divergent idling counts as
// live, not deadlocked.
bool is_deadlocked(const Configuration& config, const NetworkSpec& spec);

// Replays a run step by step; returns an error description on the first step
// that does not reproduce the recorded configuration, or nullopt if the whole
// run replays.
std::optional<std::string> replay_run(const Run& run, const NetworkSpec& spec);

}  // namespace pnta

#endif  // PNTA_SEMANTICS_HPP
