/**
 * The incentive loop. Each round the principal proposes an arm, the player
 * would take the greedy arm, and when the two differ the principal pays
 * the posted-mean difference. A compensated pull credits the arm with the
 * reward plus drift f(compensation).
 */

#ifndef DRIFTBANDIT_MECHANISM_HPP
#define DRIFTBANDIT_MECHANISM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "driftbandit/core.hpp"
#include "driftbandit/policies.hpp"

namespace driftbandit {

class RandomSource;

struct RoundRecord {
    std::uint64_t t = 0;
    std::size_t chosen = 0;   // I_t
    std::size_t greedy = 0;   // G_t (equals chosen during warm start)
    bool compensated = false;
    double compensation = 0.0;
    double drift = 0.0;
    double raw_reward = 0.0;
    double feedback = 0.0;    // value credited to the chosen arm
    double regret_increment = 0.0;
    double cum_regret = 0.0;
    double cum_compensation = 0.0;
};

struct MechanismOptions {
    /** Clip credited feedback to [0, 1]. drift_sum still receives the unclipped drift. */
    bool project_feedback = false;
    /** Count violations of the UCB compensation/drift inequalities (ucb policy only). */
    bool check_ucb_bounds = false;
};

/** Projection on for egreedy, off otherwise. */
MechanismOptions default_options(const PolicyKind& policy);

struct Diagnostics {
    std::uint64_t projection_binding = 0;
    std::uint64_t ucb_rounds_checked = 0;
    std::uint64_t ucb_compensation_violations = 0;
    std::uint64_t ucb_drift_violations = 0;
};

struct Trajectory {
    std::vector<RoundRecord> rounds;
    SimState final_state;
    Diagnostics diagnostics;
};

/** Pulls arm t-1 at round t for t = 1..K, uncompensated. State must be fresh. */
std::vector<RoundRecord> warm_start(SimState& state, const BanditInstance& instance,
                                    const MechanismOptions& options, RandomSource& rng);

RoundRecord step(SimState& state, const PolicyKind& policy, const DriftModel& drift,
                 const BanditInstance& instance, const MechanismOptions& options,
                 RandomSource& rng, Diagnostics* diagnostics = nullptr);

using RoundObserver = std::function<void(const RoundRecord&)>;

/**
 * Warm start followed by T-K steps, reporting every round to `observer`.
 * Returns the final state; diagnostics are accumulated into `diagnostics`.
 */
SimState simulate(const BanditInstance& instance, const PolicyKind& policy,
                  const DriftModel& drift, const MechanismOptions& options, std::uint64_t horizon,
                  RandomSource& rng, const RoundObserver& observer, Diagnostics& diagnostics);

Trajectory run(const BanditInstance& instance, const PolicyKind& policy, const DriftModel& drift,
               const MechanismOptions& options, std::uint64_t horizon, RandomSource& rng);

/** Seeded run using SeededRandom(seed). */
Trajectory run(const BanditInstance& instance, const PolicyKind& policy, const DriftModel& drift,
               const MechanismOptions& options, std::uint64_t horizon, std::uint64_t seed);

/** Header plus one row per round, reals with 9 significant digits. */
void write_trajectory_csv(std::ostream& out, const std::vector<RoundRecord>& rounds);

}  // namespace driftbandit

#endif  // DRIFTBANDIT_MECHANISM_HPP
