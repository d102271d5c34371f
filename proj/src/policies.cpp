#include "driftbandit/policies.hpp"

#include <algorithm>
#include <cmath>

#include "driftbandit/random.hpp"

namespace driftbandit {

namespace {

template <typename Score>
std::size_t argmax(std::size_t n, Score score) {
    std::size_t best = 0;
    double best_value = score(0);
    for (std::size_t i = 1; i < n; ++i) {
        double v = score(i);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

}  // namespace

PolicyKind PolicyKind::egreedy(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorCode::invalid_argument, "egreedy requires c > 0");
    }
    return {Kind::egreedy, c};
}

std::string PolicyKind::name() const {
    switch (kind) {
        case Kind::ucb:
            return "ucb";
        case Kind::egreedy:
            return "egreedy";
        case Kind::thompson:
            return "thompson";
        case Kind::greedy:
            return "greedy";
    }
    return "?";
}

PolicyKind PolicyKind::parse(const std::string& name, double c) {
    if (name == "ucb") return ucb();
    if (name == "egreedy") return egreedy(c);
    if (name == "thompson") return thompson();
    if (name == "greedy") return greedy();
    throw Error(ErrorCode::invalid_argument, "unknown policy '" + name + "'");
}

void PostedView::require_warm() const {
    for (const ArmState& arm : state_->arms) {
        if (arm.pulls == 0) {
            throw Error(ErrorCode::warm_start_incomplete,
                        "every arm must be pulled once before a policy can select");
        }
    }
}

double ucb_index(double posted, std::uint64_t pulls, std::uint64_t t) {
    if (pulls == 0) throw Error(ErrorCode::invalid_argument, "ucb_index: pulls must be >= 1");
    if (t == 0) throw Error(ErrorCode::invalid_argument, "ucb_index: t must be >= 1");
    return posted + std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(pulls));
}

std::size_t ucb_select(const PostedView& view) {
    view.require_warm();
    std::uint64_t t = view.round();
    return argmax(view.num_arms(),
                  [&](std::size_t i) { return ucb_index(view.posted_mean(i), view.pulls(i), t); });
}

double epsilon_schedule(double c, std::size_t num_arms, std::uint64_t t) {
    return std::min(1.0, c * static_cast<double>(num_arms) / static_cast<double>(t));
}

std::size_t egreedy_select(const PostedView& view, double c, RandomSource& rng) {
    view.require_warm();
    const std::size_t k = view.num_arms();
    double eps = epsilon_schedule(c, k, view.round());
    if (rng.uniform() < eps) {
        auto arm = static_cast<std::size_t>(std::floor(rng.uniform() * static_cast<double>(k)));
        return std::min(arm, k - 1);
    }
    return greedy_choice(view);
}

double thompson_theta(double posted, std::uint64_t pulls, double z) {
    return posted + z / std::sqrt(static_cast<double>(pulls) + 1.0);
}

std::size_t thompson_sample(const PostedView& view, RandomSource& rng) {
    view.require_warm();
    const std::size_t k = view.num_arms();
    std::size_t best = 0;
    double best_theta = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double theta = thompson_theta(view.posted_mean(i), view.pulls(i), rng.normal());
        if (i == 0 || theta > best_theta) {
            best_theta = theta;
            best = i;
        }
    }
    return best;
}

std::size_t greedy_choice(const PostedView& view) {
    view.require_warm();
    return argmax(view.num_arms(), [&](std::size_t i) { return view.posted_mean(i); });
}

std::size_t select_arm(const PolicyKind& policy, const PostedView& view, RandomSource& rng) {
    switch (policy.kind) {
        case PolicyKind::Kind::ucb:
            return ucb_select(view);
        case PolicyKind::Kind::egreedy:
            return egreedy_select(view, policy.c, rng);
        case PolicyKind::Kind::thompson:
            return thompson_sample(view, rng);
        case PolicyKind::Kind::greedy:
            return greedy_choice(view);
    }
    throw Error(ErrorCode::invalid_argument, "unknown policy kind");
}

}  // namespace driftbandit
