/**
 * Principal arm-selection rules and the myopic player's greedy rule.
 *
 * Every rule works on a PostedView, which exposes posted means and pull
 * counts only. True means and undrifted averages are not reachable from
 * here. Ties are broken towards the lowest arm index.
 */

#ifndef DRIFTBANDIT_POLICIES_HPP
#define DRIFTBANDIT_POLICIES_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "driftbandit/core.hpp"

namespace driftbandit {

class RandomSource;

struct PolicyKind {
    enum class Kind {
        ucb,
        egreedy,
        thompson,
        greedy,  // baseline: principal always agrees with the player
    };

    Kind kind = Kind::ucb;
    double c = 0.0;  // egreedy only

    static PolicyKind ucb() { return {Kind::ucb, 0.0}; }
    static PolicyKind egreedy(double c);
    static PolicyKind thompson() { return {Kind::thompson, 0.0}; }
    static PolicyKind greedy() { return {Kind::greedy, 0.0}; }

    std::string name() const;
    static PolicyKind parse(const std::string& name, double c = 4.0);
};

/** Read-only window onto a SimState restricted to what the principal may see. */
class PostedView {
public:
    explicit PostedView(const SimState& state) : state_(&state) {}

    std::size_t num_arms() const noexcept { return state_->num_arms(); }
    std::uint64_t round() const noexcept { return state_->round; }
    std::uint64_t pulls(std::size_t arm) const { return state_->arms.at(arm).pulls; }
    double posted_mean(std::size_t arm) const { return driftbandit::posted_mean(state_->arms.at(arm)); }

    /** Throws warm_start_incomplete unless every arm has been pulled. */
    void require_warm() const;

private:
    const SimState* state_;
};

/** posted + sqrt(2 ln t / pulls). */
double ucb_index(double posted, std::uint64_t pulls, std::uint64_t t);

std::size_t ucb_select(const PostedView& view);

/** min(1, cK/t). */
double epsilon_schedule(double c, std::size_t num_arms, std::uint64_t t);

/**
 * Draws one uniform for the explore coin (explore iff u < ε_t) and, when
 * exploring, one more uniform u mapped to arm floor(u·K).
 */
std::size_t egreedy_select(const PostedView& view, double c, RandomSource& rng);

/** posted + z / sqrt(pulls + 1): one posterior sample for a given standard normal z. */
double thompson_theta(double posted, std::uint64_t pulls, double z);

/** θ_i = thompson_theta(posted_i, pulls_i, z_i), z drawn in arm order. */
std::size_t thompson_sample(const PostedView& view, RandomSource& rng);

std::size_t greedy_choice(const PostedView& view);

std::size_t select_arm(const PolicyKind& policy, const PostedView& view, RandomSource& rng);

}  // namespace driftbandit

#endif  // DRIFTBANDIT_POLICIES_HPP
