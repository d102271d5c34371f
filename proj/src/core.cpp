#include "driftbandit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftbandit/random.hpp"

namespace driftbandit {

Noise Noise::gaussian(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::invalid_argument, "gaussian noise sigma must be finite and >= 0");
    }
    return {Kind::gaussian, sigma};
}

Gaps gaps(std::span<const double> means) {
    if (means.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "a bandit instance needs at least 2 arms");
    }
    auto best_it = std::max_element(means.begin(), means.end());
    double best = *best_it;
    if (std::count(means.begin(), means.end(), best) != 1) {
        throw Error(ErrorCode::non_unique_optimum, "best arm is not unique");
    }
    Gaps out;
    out.per_arm.reserve(means.size());
    out.min = std::numeric_limits<double>::infinity();
    for (double mu : means) {
        double gap = best - mu;
        out.per_arm.push_back(gap);
        if (gap > 0.0) out.min = std::min(out.min, gap);
    }
    return out;
}

BanditInstance::BanditInstance(std::vector<double> arm_means, Noise noise)
    : means_(std::move(arm_means)), noise_(noise) {
    for (double mu : means_) {
        if (!(mu >= 0.0 && mu <= 1.0)) {
            throw Error(ErrorCode::invalid_argument, "arm means must lie in [0, 1]");
        }
    }
    if (noise_.kind == Noise::Kind::gaussian && !(noise_.sigma >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "gaussian noise sigma must be >= 0");
    }
    gaps_ = gaps(std::span<const double>(means_));
    best_ = static_cast<std::size_t>(
        std::max_element(means_.begin(), means_.end()) - means_.begin());
}

double BanditInstance::min_pairwise_gap() const noexcept {
    std::vector<double> sorted = means_;
    std::sort(sorted.begin(), sorted.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        double d = sorted[i] - sorted[i - 1];
        if (d > 0.0) best = std::min(best, d);
    }
    return best;
}

Gaps gaps(const BanditInstance& instance) { return gaps(instance.means()); }

DriftModel DriftModel::linear(double l) { return make_drift(Kind::linear, l); }

DriftModel DriftModel::clipped_linear(double l, double cap) {
    return make_drift(Kind::clipped_linear, l, cap);
}

DriftModel make_drift(DriftModel::Kind kind, double l, double cap) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
        throw Error(ErrorCode::invalid_argument,
                    "drift coefficient l must be finite and >= 0 (f is non-decreasing)");
    }
    if (!(cap >= 0.0) || !std::isfinite(cap)) {
        throw Error(ErrorCode::invalid_argument, "drift cap must be finite and >= 0");
    }
    switch (kind) {
        case DriftModel::Kind::zero:
            return {DriftModel::Kind::zero, 0.0, 0.0};
        case DriftModel::Kind::linear:
            return {DriftModel::Kind::linear, l, 0.0};
        case DriftModel::Kind::clipped_linear:
            return {DriftModel::Kind::clipped_linear, l, cap};
    }
    throw Error(ErrorCode::invalid_argument, "unknown drift kind");
}

double drift_apply(const DriftModel& model, double compensation) {
    if (!(compensation >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "drift_apply: compensation must be >= 0");
    }
    switch (model.kind) {
        case DriftModel::Kind::zero:
            return 0.0;
        case DriftModel::Kind::linear:
            return model.lipschitz * compensation;
        case DriftModel::Kind::clipped_linear:
            return std::min(model.lipschitz * compensation, model.cap);
    }
    return 0.0;
}

std::string to_string(DriftModel::Kind kind) {
    switch (kind) {
        case DriftModel::Kind::zero:
            return "zero";
        case DriftModel::Kind::linear:
            return "linear";
        case DriftModel::Kind::clipped_linear:
            return "clipped_linear";
    }
    return "?";
}

DriftModel::Kind drift_kind_from_string(const std::string& name) {
    if (name == "zero") return DriftModel::Kind::zero;
    if (name == "linear") return DriftModel::Kind::linear;
    if (name == "clipped_linear" || name == "clipped") return DriftModel::Kind::clipped_linear;
    throw Error(ErrorCode::invalid_argument, "unknown drift kind '" + name + "'");
}

double posted_mean(const ArmState& arm) {
    if (arm.pulls == 0) {
        throw Error(ErrorCode::undefined_statistic, "posted_mean: arm has never been pulled");
    }
    return arm.feedback_sum / static_cast<double>(arm.pulls);
}

double true_empirical_mean(const ArmState& arm) {
    if (arm.pulls == 0) {
        throw Error(ErrorCode::undefined_statistic,
                    "true_empirical_mean: arm has never been pulled");
    }
    return (arm.feedback_sum - arm.drift_sum) / static_cast<double>(arm.pulls);
}

bool SimState::fresh() const noexcept {
    if (round != 1 || cum_regret != 0.0 || cum_compensation != 0.0) return false;
    return std::all_of(arms.begin(), arms.end(), [](const ArmState& a) {
        return a.pulls == 0 && a.feedback_sum == 0.0 && a.drift_sum == 0.0 &&
               a.comp_count == 0 && a.comp_sum == 0.0;
    });
}

double sample_reward(const BanditInstance& instance, std::size_t arm, RandomSource& rng) {
    if (arm >= instance.num_arms()) {
        throw Error(ErrorCode::invalid_argument, "sample_reward: arm index out of range");
    }
    double mu = instance.mean(arm);
    const Noise& noise = instance.noise();
    if (noise.kind == Noise::Kind::bernoulli) {
        return rng.uniform() < mu ? 1.0 : 0.0;
    }
    if (noise.sigma == 0.0) return mu;
    return mu + noise.sigma * rng.normal();
}

}  // namespace driftbandit
