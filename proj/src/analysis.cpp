#include "driftbandit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace driftbandit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_gaps(const BoundInputs& in) {
    for (double g : in.gaps) {
        if (!(g > 0.0)) {
            throw Error(ErrorCode::invalid_argument, "bound: every suboptimal gap must be > 0");
        }
    }
}

double log_horizon(const BoundInputs& in) {
    if (!(in.horizon >= 1.0)) throw Error(ErrorCode::invalid_argument, "bound: T must be >= 1");
    return std::log(in.horizon);
}

}  // namespace

BoundInputs bound_inputs(const BanditInstance& instance, double l, double c, double horizon,
                         std::optional<double> delta_lower) {
    BoundInputs in;
    in.num_arms = instance.num_arms();
    in.horizon = horizon;
    in.l = l;
    in.c = c;
    for (std::size_t i = 0; i < instance.num_arms(); ++i) {
        if (i != instance.best_arm()) in.gaps.push_back(instance.gap(i));
    }
    in.delta_min = instance.min_gap();
    in.delta_lower = delta_lower.value_or(instance.min_pairwise_gap());
    return in;
}

double ucb_regret_bound(const BoundInputs& in) {
    require_gaps(in);
    double log_t = log_horizon(in);
    double k = static_cast<double>(in.num_arms);
    double total = 0.0;
    for (double gap : in.gaps) {
        total += 8.0 * (in.l + 1.0) * (in.l + 1.0) * log_t / gap + gap * (k - 1.0) * kPi * kPi / 3.0;
    }
    return total;
}

double ucb_compensation_bound(const BoundInputs& in) {
    require_gaps(in);
    double log_t = log_horizon(in);
    double k = static_cast<double>(in.num_arms);
    double total = 0.0;
    for (double gap : in.gaps) total += 16.0 * (in.l + 1.0) * log_t / gap;
    total += 16.0 * (in.l + 1.0) * log_t / in.delta_min;
    total += 2.0 * kPi * k * std::sqrt(2.0 * log_t / 3.0);
    return total;
}

double egreedy_s_term(double c, double l, double gap) {
    return 1.5 + 3.0 * (1.0 + std::sqrt(3.0 / c)) * l + 18.0 * c / (gap * gap);
}

double egreedy_regret_bound(const BoundInputs& in) {
    require_gaps(in);
    if (!(in.c > 0.0)) throw Error(ErrorCode::invalid_argument, "bound: c must be > 0");
    double log_t = log_horizon(in);
    double k = static_cast<double>(in.num_arms);
    double total = 0.0;
    for (double gap : in.gaps) total += in.c * egreedy_s_term(in.c, in.l, gap) * (log_t + 1.0);
    total += in.c * (k - 1.0) * (k + kPi * kPi / 6.0);
    return total;
}

double egreedy_compensation_bound(const BoundInputs& in) {
    if (!(in.c > 0.0)) throw Error(ErrorCode::invalid_argument, "bound: c must be > 0");
    double log_t = log_horizon(in);
    return std::max(in.l, 1.0) * (in.c + std::sqrt(3.0 * in.c)) * static_cast<double>(in.num_arms) *
           (log_t + 1.0);
}

double thompson_p_term(double gap, double horizon) {
    double g2 = gap * gap;
    return std::max(0.0, 18.0 * std::log(horizon * g2) / g2);
}

double thompson_q_term(double gap, double delta_lower, double l, double horizon) {
    double log_t = std::log(horizon);
    double dl2 = delta_lower * delta_lower;
    double linear = (1.0 + 4.0 * gap * l / (3.0 * dl2)) * log_t;
    double root = std::sqrt(1.0 + 8.0 * gap * l * log_t / (3.0 * dl2));
    return std::ceil(9.0 / (2.0 * gap * gap) * (linear + root));
}

double thompson_regret_bound(const BoundInputs& in) {
    require_gaps(in);
    if (!(in.delta_lower > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "bound: delta_lower must be > 0");
    }
    log_horizon(in);
    const double p_coeff = 4.0 * std::exp(11.0) + 21.0;
    double total = 0.0;
    for (double gap : in.gaps) {
        total += p_coeff * thompson_p_term(gap, in.horizon) + 5.0 / (gap * gap) +
                 thompson_q_term(gap, in.delta_lower, in.l, in.horizon) + kPi * kPi / 6.0;
    }
    return total;
}

double thompson_compensation_bound(const BoundInputs& in) {
    if (!(in.delta_lower > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "bound: delta_lower must be > 0");
    }
    double log_t = log_horizon(in);
    return 2.0 * std::max(in.l, 1.0) * static_cast<double>(in.num_arms) * log_t /
           (in.delta_lower * in.delta_lower);
}

double thompson_comp_frequency_bound(double delta_lower, double horizon) {
    if (!(delta_lower > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "bound: delta_lower must be > 0");
    }
    return 2.0 * std::log(horizon) / (delta_lower * delta_lower);
}

// Gaps like 0.9 - 0.8 come out a few ulps short of 0.1.
bool check_c_condition(double c, double delta) { return c * delta >= 36.0 * (1.0 - 1e-9); }

double regret_bound(const PolicyKind& policy, const BoundInputs& in) {
    switch (policy.kind) {
        case PolicyKind::Kind::ucb:
            return ucb_regret_bound(in);
        case PolicyKind::Kind::egreedy:
            return egreedy_regret_bound(in);
        case PolicyKind::Kind::thompson:
            return thompson_regret_bound(in);
        case PolicyKind::Kind::greedy:
            break;
    }
    throw Error(ErrorCode::invalid_argument, "no regret bound for policy " + policy.name());
}

double compensation_bound(const PolicyKind& policy, const BoundInputs& in) {
    switch (policy.kind) {
        case PolicyKind::Kind::ucb:
            return ucb_compensation_bound(in);
        case PolicyKind::Kind::egreedy:
            return egreedy_compensation_bound(in);
        case PolicyKind::Kind::thompson:
            return thompson_compensation_bound(in);
        case PolicyKind::Kind::greedy:
            break;
    }
    throw Error(ErrorCode::invalid_argument, "no compensation bound for policy " + policy.name());
}

SummaryMetrics summarize(const SimState& final_state, const BanditInstance& instance) {
    SummaryMetrics m;
    m.regret = final_state.cum_regret;
    m.compensation = final_state.cum_compensation;
    m.per_arm.reserve(final_state.num_arms());
    for (const ArmState& arm : final_state.arms) {
        m.comp_rounds += arm.comp_count;
        m.per_arm.push_back({arm.pulls, arm.comp_count, arm.drift_sum});
    }
    double mu_best = instance.mean(instance.best_arm());
    double posted = posted_mean(final_state.arms.at(instance.best_arm()));
    m.arm1_rel_error = std::abs(posted - mu_best) / mu_best;
    return m;
}

SummaryMetrics summarize(const Trajectory& trajectory, const BanditInstance& instance) {
    return summarize(trajectory.final_state, instance);
}

}  // namespace driftbandit
