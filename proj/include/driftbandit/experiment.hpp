/**
 * Replicated experiments over (policy, drift coefficient) grids.
 *
 * Every replication gets its own seed from derive_seed(), so results do not
 * depend on how work is split across threads.
 */

#ifndef DRIFTBANDIT_EXPERIMENT_HPP
#define DRIFTBANDIT_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "driftbandit/analysis.hpp"
#include "driftbandit/core.hpp"
#include "driftbandit/policies.hpp"

namespace driftbandit {

struct PolicySetup {
    PolicyKind policy;
    std::optional<bool> project_feedback;  // unset: default_options(policy)
};

struct ExperimentConfig {
    std::vector<double> means;
    Noise noise;
    std::vector<PolicySetup> policies;
    DriftModel::Kind drift_kind = DriftModel::Kind::linear;
    double drift_cap = 0.0;
    std::vector<double> l_values;
    std::uint64_t horizon = 20000;
    std::uint64_t replications = 50;
    std::uint64_t master_seed = 0;
    bool capture_trajectories = false;
    std::uint64_t trajectory_stride = 10;
    bool check_ucb_bounds = false;

    /** Throws invalid_argument naming the first broken field. */
    void validate() const;
};

/** Configuration matching the published 9-arm Gaussian experiment. */
ExperimentConfig reference_config();

struct MetricStats {
    double mean = 0.0;
    double std = 0.0;
};

struct CellResult {
    std::size_t policy_index = 0;
    PolicyKind policy;
    std::size_t l_index = 0;
    double l = 0.0;
    MetricStats regret;
    MetricStats compensation;
    MetricStats comp_rounds;
    MetricStats arm1_rel_error;
    /** Mean over replications of every per-replication ArmSummary field. */
    std::vector<double> mean_pulls;
    std::vector<double> mean_comp_count;
    std::vector<double> mean_drift_sum;
    Diagnostics diagnostics;  // summed over replications
    /** Sample rounds t = stride, 2·stride, ..., plus T if not a multiple. */
    std::vector<std::uint64_t> curve_t;
    std::vector<double> curve_regret;
    std::vector<double> curve_compensation;
};

struct AggregateResult {
    std::vector<CellResult> cells;  // policy-major, then l

    const CellResult& cell(std::size_t policy_index, std::size_t l_index) const;
};

/**
 * 64-bit seed for one replication. Each input is folded in with a
 * splitmix64 finalizer:
 *
 *   h = mix(master); h = mix(h ^ policy_id); h = mix(h ^ l_index); h = mix(h ^ rep)
 *   mix(z): z += 0x9E3779B97F4A7C15; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
 *           z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
 */
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t policy_id, std::uint64_t l_index,
                          std::uint64_t rep);

/** Mean and sample std (n-1 denominator; 0 when n = 1). */
MetricStats aggregate(std::span<const double> samples);

struct AggregateSummary {
    MetricStats regret;
    MetricStats compensation;
    MetricStats comp_rounds;
    MetricStats arm1_rel_error;
};

AggregateSummary aggregate(std::span<const SummaryMetrics> samples);

/** Number of curve points for horizon T and stride k: ceil(T/k). */
std::size_t curve_length(std::uint64_t horizon, std::uint64_t stride);

/** `jobs` = 0 uses the hardware concurrency. */
AggregateResult run_experiment(const ExperimentConfig& config, unsigned jobs = 1);

}  // namespace driftbandit

#endif  // DRIFTBANDIT_EXPERIMENT_HPP
