/**
 * Environment, drift model and per-arm bookkeeping for incentivized
 * bandits with compensation-induced reward drift.
 *
 * The simulator owns the true arm means. Everything a principal or a
 * player may look at is derived from the drifted feedback sums kept in
 * ArmState, see posted_mean().
 */

#ifndef DRIFTBANDIT_CORE_HPP
#define DRIFTBANDIT_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftbandit {

class RandomSource;

enum class ErrorCode {
    invalid_argument,
    undefined_statistic,   // mean of an arm that was never pulled
    non_unique_optimum,
    warm_start_incomplete,
    state_not_fresh,
    script_exhausted,
};

/** Single exception type for the library; code() tells callers what went wrong. */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct Noise {
    enum class Kind { bernoulli, gaussian };

    Kind kind = Kind::gaussian;
    double sigma = 1.0;  // gaussian only

    static Noise bernoulli() { return {Kind::bernoulli, 0.0}; }
    static Noise gaussian(double sigma);
};

/** Gaps to the best arm. per_arm[best] is 0; min is the smallest positive gap. */
struct Gaps {
    std::vector<double> per_arm;
    double min = 0.0;
};

Gaps gaps(std::span<const double> means);

/**
 * Ground truth of a stochastic bandit: K >= 2 arm means in [0,1] with a
 * unique maximum, plus the reward noise model.
 */
class BanditInstance {
public:
    BanditInstance(std::vector<double> arm_means, Noise noise);

    std::size_t num_arms() const noexcept { return means_.size(); }
    std::span<const double> means() const noexcept { return means_; }
    double mean(std::size_t arm) const { return means_.at(arm); }
    const Noise& noise() const noexcept { return noise_; }
    std::size_t best_arm() const noexcept { return best_; }
    /** Δ_i for every arm. */
    std::span<const double> gap_per_arm() const noexcept { return gaps_.per_arm; }
    double gap(std::size_t arm) const { return gaps_.per_arm.at(arm); }
    double min_gap() const noexcept { return gaps_.min; }
    /** Smallest separation between any two distinct arm means. */
    double min_pairwise_gap() const noexcept;

private:
    std::vector<double> means_;
    Noise noise_;
    std::size_t best_ = 0;
    Gaps gaps_;
};

Gaps gaps(const BanditInstance& instance);

/**
 * Time-invariant drift f(x) applied to the feedback of a compensated pull.
 * Every kind satisfies f(0) = 0, monotonicity and the Lipschitz bound with
 * constant `lipschitz`.
 */
struct DriftModel {
    enum class Kind { zero, linear, clipped_linear };

    Kind kind = Kind::zero;
    double lipschitz = 0.0;
    double cap = 0.0;  // clipped_linear only

    static DriftModel zero() { return {}; }
    static DriftModel linear(double l);
    static DriftModel clipped_linear(double l, double cap);
};

double drift_apply(const DriftModel& model, double compensation);

std::string to_string(DriftModel::Kind kind);
DriftModel::Kind drift_kind_from_string(const std::string& name);
DriftModel make_drift(DriftModel::Kind kind, double l, double cap = 0.0);

struct ArmState {
    std::uint64_t pulls = 0;
    double feedback_sum = 0.0;   // drifted feedback credited to this arm
    double drift_sum = 0.0;      // B_i
    std::uint64_t comp_count = 0;
    double comp_sum = 0.0;       // C_i
};

/** Average drifted feedback. The only per-arm statistic policies see. */
double posted_mean(const ArmState& arm);

/** Average of the undrifted rewards. Diagnostic only. */
double true_empirical_mean(const ArmState& arm);

struct SimState {
    std::uint64_t round = 1;  // 1-based index of the next round to play
    std::vector<ArmState> arms;
    double cum_regret = 0.0;
    double cum_compensation = 0.0;

    explicit SimState(std::size_t num_arms) : arms(num_arms) {}

    std::size_t num_arms() const noexcept { return arms.size(); }
    bool fresh() const noexcept;
};

/** One reward draw. Gaussian noise with sigma == 0 consumes no randomness. */
double sample_reward(const BanditInstance& instance, std::size_t arm, RandomSource& rng);

}  // namespace driftbandit

#endif  // DRIFTBANDIT_CORE_HPP
