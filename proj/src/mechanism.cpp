#include "driftbandit/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "driftbandit/io.hpp"
#include "driftbandit/random.hpp"

namespace driftbandit {

namespace {

// slack for round-off in the UCB diagnostics
constexpr double kCheckTolerance = 1e-12;

double project_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void credit(SimState& state, RoundRecord& rec) {
    ArmState& arm = state.arms[rec.chosen];
    arm.pulls += 1;
    arm.feedback_sum += rec.feedback;
    arm.drift_sum += rec.drift;
    if (rec.compensated) {
        arm.comp_count += 1;
        arm.comp_sum += rec.compensation;
    }
    state.cum_regret += rec.regret_increment;
    state.cum_compensation += rec.compensation;
    rec.cum_regret = state.cum_regret;
    rec.cum_compensation = state.cum_compensation;
    state.round += 1;
}

}  // namespace

MechanismOptions default_options(const PolicyKind& policy) {
    MechanismOptions options;
    options.project_feedback = policy.kind == PolicyKind::Kind::egreedy;
    return options;
}

std::vector<RoundRecord> warm_start(SimState& state, const BanditInstance& instance,
                                    const MechanismOptions& options, RandomSource& rng) {
    if (state.num_arms() != instance.num_arms()) {
        throw Error(ErrorCode::invalid_argument, "warm_start: state and instance disagree on K");
    }
    if (!state.fresh()) {
        throw Error(ErrorCode::state_not_fresh, "warm_start: state has already been played");
    }
    std::vector<RoundRecord> records;
    records.reserve(instance.num_arms());
    for (std::size_t arm = 0; arm < instance.num_arms(); ++arm) {
        RoundRecord rec;
        rec.t = state.round;
        rec.chosen = arm;
        rec.greedy = arm;
        rec.raw_reward = sample_reward(instance, arm, rng);
        rec.feedback = options.project_feedback ? project_unit(rec.raw_reward) : rec.raw_reward;
        rec.regret_increment = instance.gap(arm);
        credit(state, rec);
        records.push_back(rec);
    }
    return records;
}

RoundRecord step(SimState& state, const PolicyKind& policy, const DriftModel& drift,
                 const BanditInstance& instance, const MechanismOptions& options,
                 RandomSource& rng, Diagnostics* diagnostics) {
    if (state.num_arms() != instance.num_arms()) {
        throw Error(ErrorCode::invalid_argument, "step: state and instance disagree on K");
    }
    const PostedView view(state);
    view.require_warm();

    RoundRecord rec;
    rec.t = state.round;
    rec.chosen = select_arm(policy, view, rng);
    rec.greedy = greedy_choice(view);
    if (rec.chosen != rec.greedy) {
        rec.compensated = true;
        rec.compensation = view.posted_mean(rec.greedy) - view.posted_mean(rec.chosen);
        rec.drift = drift_apply(drift, rec.compensation);
    }
    rec.raw_reward = sample_reward(instance, rec.chosen, rng);
    double feedback = rec.raw_reward + rec.drift;
    if (options.project_feedback) {
        rec.feedback = project_unit(feedback);
        if (diagnostics && rec.feedback != feedback) diagnostics->projection_binding += 1;
    } else {
        rec.feedback = feedback;
    }
    rec.regret_increment = instance.gap(rec.chosen);

    const bool check_ucb = diagnostics && options.check_ucb_bounds &&
                           policy.kind == PolicyKind::Kind::ucb && rec.compensated;
    double log_t = std::log(static_cast<double>(rec.t));
    if (check_ucb) {
        diagnostics->ucb_rounds_checked += 1;
        double n_before = static_cast<double>(state.arms[rec.chosen].pulls);
        double width = std::sqrt(2.0 * log_t / n_before);
        if (rec.compensation > width + kCheckTolerance) {
            diagnostics->ucb_compensation_violations += 1;
        }
    }

    credit(state, rec);

    if (check_ucb) {
        const ArmState& arm = state.arms[rec.chosen];
        double bound = 2.0 * drift.lipschitz * std::sqrt(2.0 * static_cast<double>(arm.pulls) * log_t);
        if (arm.drift_sum > bound + kCheckTolerance) diagnostics->ucb_drift_violations += 1;
    }
    return rec;
}

SimState simulate(const BanditInstance& instance, const PolicyKind& policy,
                  const DriftModel& drift, const MechanismOptions& options, std::uint64_t horizon,
                  RandomSource& rng, const RoundObserver& observer, Diagnostics& diagnostics) {
    if (horizon < instance.num_arms()) {
        throw Error(ErrorCode::invalid_argument, "run: horizon T must be >= number of arms");
    }
    SimState state(instance.num_arms());
    for (const RoundRecord& rec : warm_start(state, instance, options, rng)) {
        if (observer) observer(rec);
    }
    while (state.round <= horizon) {
        RoundRecord rec = step(state, policy, drift, instance, options, rng, &diagnostics);
        if (observer) observer(rec);
    }
    return state;
}

Trajectory run(const BanditInstance& instance, const PolicyKind& policy, const DriftModel& drift,
               const MechanismOptions& options, std::uint64_t horizon, RandomSource& rng) {
    std::vector<RoundRecord> rounds;
    rounds.reserve(horizon);
    Diagnostics diagnostics;
    SimState final_state = simulate(
        instance, policy, drift, options, horizon, rng,
        [&rounds](const RoundRecord& rec) { rounds.push_back(rec); }, diagnostics);
    return {std::move(rounds), std::move(final_state), diagnostics};
}

Trajectory run(const BanditInstance& instance, const PolicyKind& policy, const DriftModel& drift,
               const MechanismOptions& options, std::uint64_t horizon, std::uint64_t seed) {
    SeededRandom rng(seed);
    return run(instance, policy, drift, options, horizon, rng);
}

void write_trajectory_csv(std::ostream& out, const std::vector<RoundRecord>& rounds) {
    out << "t,chosen,greedy,compensated,compensation,drift,raw_reward,feedback,cum_regret,"
           "cum_compensation\n";
    for (const RoundRecord& r : rounds) {
        out << r.t << ',' << r.chosen << ',' << r.greedy << ',' << (r.compensated ? 1 : 0) << ','
            << format_real(r.compensation) << ',' << format_real(r.drift) << ','
            << format_real(r.raw_reward) << ',' << format_real(r.feedback) << ','
            << format_real(r.cum_regret) << ',' << format_real(r.cum_compensation) << '\n';
    }
}

}  // namespace driftbandit
