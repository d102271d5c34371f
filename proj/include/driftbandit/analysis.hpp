/**
 * Closed-form regret and compensation bounds for the three incentivized
 * policies, and per-run summary metrics.
 *
 * All logarithms are natural. The bounds are evaluated as printed,
 * including their loose constants; they are meant for compliance checks,
 * not as predictions.
 */

#ifndef DRIFTBANDIT_ANALYSIS_HPP
#define DRIFTBANDIT_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "driftbandit/core.hpp"
#include "driftbandit/mechanism.hpp"

namespace driftbandit {

struct BoundInputs {
    std::uint64_t num_arms = 0;
    double horizon = 0.0;  // T; real so that T = e can be evaluated
    double l = 0.0;
    std::vector<double> gaps;  // suboptimal gaps Δ_i > 0 (best arm excluded)
    double delta_min = 0.0;    // Δ
    double delta_lower = 0.0;  // Δ̲, posted-mean separation
    double c = 0.0;            // egreedy constant
};

/**
 * Inputs for an instance. delta_lower defaults to the smallest pairwise
 * separation of the true means.
 */
BoundInputs bound_inputs(const BanditInstance& instance, double l, double c, double horizon,
                         std::optional<double> delta_lower = std::nullopt);

// UCB
double ucb_regret_bound(const BoundInputs& in);
double ucb_compensation_bound(const BoundInputs& in);

// ε-greedy
/** 1.5 + 3(1 + sqrt(3/c)) l + 18c/Δ_i². */
double egreedy_s_term(double c, double l, double gap);
double egreedy_regret_bound(const BoundInputs& in);
/** max(l,1)(c + sqrt(3c)) K (ln T + 1). */
double egreedy_compensation_bound(const BoundInputs& in);

// Thompson sampling
/** 18 ln(T Δ_i²)/Δ_i², clamped at 0. */
double thompson_p_term(double gap, double horizon);
/** ⌈9/(2Δ_i²)((1 + 4Δ_i l/(3Δ̲²)) ln T + sqrt(1 + 8Δ_i l ln T/(3Δ̲²)))⌉. */
double thompson_q_term(double gap, double delta_lower, double l, double horizon);
double thompson_regret_bound(const BoundInputs& in);
double thompson_compensation_bound(const BoundInputs& in);

/** Per-arm bound on compensated pulls under Thompson sampling: 2 ln T / Δ̲². */
double thompson_comp_frequency_bound(double delta_lower, double horizon);

/** c >= 36/Δ, the regime where the ε-greedy bounds are stated. */
bool check_c_condition(double c, double delta);

double regret_bound(const PolicyKind& policy, const BoundInputs& in);
double compensation_bound(const PolicyKind& policy, const BoundInputs& in);

struct ArmSummary {
    std::uint64_t pulls = 0;
    std::uint64_t comp_count = 0;
    double drift_sum = 0.0;
};

struct SummaryMetrics {
    double regret = 0.0;
    double compensation = 0.0;
    std::uint64_t comp_rounds = 0;
    double arm1_rel_error = 0.0;  // |posted mean of best arm - μ_best| / μ_best
    std::vector<ArmSummary> per_arm;
};

SummaryMetrics summarize(const SimState& final_state, const BanditInstance& instance);
SummaryMetrics summarize(const Trajectory& trajectory, const BanditInstance& instance);

}  // namespace driftbandit

#endif  // DRIFTBANDIT_ANALYSIS_HPP
