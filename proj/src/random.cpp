#include "driftbandit/random.hpp"

#include <cmath>
#include <numbers>

namespace driftbandit {

double SeededRandom::uniform() {
    // top 53 bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRandom::normal() {
    if (spare_) {
        double z = *spare_;
        spare_.reset();
        return z;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 == 0.0);
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

double ScriptedRandom::next() {
    std::size_t index = consumed_++;
    return index < draws_.size() ? draws_[index] : 0.0;
}

}  // namespace driftbandit
