/**
 * Random streams used by policies and the environment.
 *
 * Uniform and normal variates are produced by our own conversions on top of
 * std::mt19937_64 (whose output is fixed by the standard), so a seed gives
 * the same run on every platform. The std distributions are not used
 * because their algorithms are implementation-defined.
 */

#ifndef DRIFTBANDIT_RANDOM_HPP
#define DRIFTBANDIT_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace driftbandit {

class RandomSource {
public:
    virtual ~RandomSource() = default;

    /** Uniform in [0, 1). */
    virtual double uniform() = 0;
    /** Standard normal. */
    virtual double normal() = 0;
};

class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

    double uniform() override;
    /** Box-Muller; the second variate of each pair is cached. */
    double normal() override;

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/**
 * Replays a fixed list of draws in order. Each uniform() or normal() call
 * consumes the next number verbatim. Past the end it returns 0 and counts the
 * shortfall so callers can report exactly how many draws were missing.
 */
class ScriptedRandom final : public RandomSource {
public:
    explicit ScriptedRandom(std::vector<double> draws) : draws_(std::move(draws)) {}

    double uniform() override { return next(); }
    double normal() override { return next(); }

    std::size_t supplied() const noexcept { return draws_.size(); }
    std::size_t consumed() const noexcept { return consumed_; }
    std::size_t deficit() const noexcept {
        return consumed_ > draws_.size() ? consumed_ - draws_.size() : 0;
    }

private:
    double next();

    std::vector<double> draws_;
    std::size_t consumed_ = 0;
};

}  // namespace driftbandit

#endif  // DRIFTBANDIT_RANDOM_HPP
