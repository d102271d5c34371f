#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "driftbandit/analysis.hpp"
#include "driftbandit/mechanism.hpp"
#include "driftbandit/random.hpp"

using namespace driftbandit;

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;
const std::vector<double> kReferenceMeans{0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};

BoundInputs two_arm(double l, double horizon, double c = 4.0) {
    BoundInputs in;
    in.num_arms = 2;
    in.horizon = horizon;
    in.l = l;
    in.gaps = {0.5};
    in.delta_min = 0.5;
    in.delta_lower = 0.5;
    in.c = c;
    return in;
}

BoundInputs reference(double l, double horizon, double c = 4.0) {
    return bound_inputs(BanditInstance(kReferenceMeans, Noise::bernoulli()), l, c, horizon, 0.1);
}

}  // namespace

// Expected values below were computed with an independent Python evaluation
// of the printed formulas.

TEST_CASE("UCB bounds") {
    CHECK(ucb_regret_bound(two_arm(0.0, kE)) == doctest::Approx(17.644934).epsilon(1e-7));
    CHECK(ucb_regret_bound(two_arm(1.0, kE)) == doctest::Approx(65.644934).epsilon(1e-7));
    // ln T = 0 leaves only the constant term
    CHECK(ucb_regret_bound(two_arm(1.0, 1.0)) == doctest::Approx(0.5 * kPi * kPi / 3.0));
    CHECK(ucb_compensation_bound(two_arm(0.0, kE)) == doctest::Approx(74.260399).epsilon(1e-7));

    SUBCASE("log terms are linear in l + 1") {
        BoundInputs l0 = two_arm(0.0, kE), l1 = two_arm(1.0, kE);
        double tail = 2.0 * kPi * 2.0 * std::sqrt(2.0 / 3.0);
        CHECK((ucb_compensation_bound(l1) - tail) / (ucb_compensation_bound(l0) - tail) ==
              doctest::Approx(2.0));
    }
    SUBCASE("reference instance is finite and positive") {
        double b = ucb_compensation_bound(reference(1.1, 20000));
        CHECK(std::isfinite(b));
        CHECK(b > 0.0);
        CHECK(ucb_regret_bound(reference(0.0, 20000)) == doctest::Approx(2248.04935).epsilon(1e-8));
    }
}

TEST_CASE("egreedy bounds") {
    SUBCASE("S term without drift") {
        double c = 36.0 / 0.5;
        CHECK(egreedy_s_term(c, 0.0, 0.5) == doctest::Approx(1.5 + 18.0 * c / 0.25));
    }
    CHECK(egreedy_regret_bound(two_arm(0.0, kE, 72.0)) == doctest::Approx(746974.435).epsilon(1e-8));
    CHECK(egreedy_compensation_bound(reference(1.1, 20000, 4.0)) ==
          doctest::Approx(805.708917).epsilon(1e-8));
    SUBCASE("max(l, 1) clamp") {
        CHECK(egreedy_compensation_bound(two_arm(0.5, 100.0, 3.0)) ==
              doctest::Approx(egreedy_compensation_bound(two_arm(0.0, 100.0, 3.0))));
        // c = 3: c + sqrt(3c) = 6
        CHECK(egreedy_compensation_bound(two_arm(0.0, kE, 3.0)) == doctest::Approx(6.0 * 2.0 * 2.0));
    }
    SUBCASE("S term increases with l") {
        for (double l = 0.0; l < 5.0; l += 0.25) {
            CHECK(egreedy_s_term(4.0, l + 0.25, 0.3) > egreedy_s_term(4.0, l, 0.3));
        }
    }
}

TEST_CASE("Thompson bounds") {
    CHECK(thompson_p_term(0.5, 4.0) == 0.0);  // T Δ² = 1
    CHECK(thompson_p_term(0.5, 2.0) == 0.0);  // clamped
    double t3 = std::exp(3.0);
    CHECK(thompson_p_term(0.5, t3) == doctest::Approx(116.186806).epsilon(1e-8));
    CHECK(thompson_q_term(0.5, 0.5, 1.0, t3) == 273.0);
    CHECK(thompson_q_term(0.5, 0.5, 0.0, t3) == std::ceil(9.0 / (2.0 * 0.25) * (3.0 + 1.0)));
    CHECK(thompson_regret_bound(two_arm(1.0, t3)) == doctest::Approx(27829075.7192).epsilon(1e-9));

    CHECK(thompson_compensation_bound(reference(0.0, 20000)) == doctest::Approx(17826.2776).epsilon(1e-8));
    SUBCASE("inverse square in delta_lower, linear in max(l,1)") {
        BoundInputs in = reference(1.0, 20000);
        double base = thompson_compensation_bound(in);
        in.delta_lower *= 2.0;
        CHECK(thompson_compensation_bound(in) == doctest::Approx(base / 4.0));
        CHECK(thompson_compensation_bound(reference(2.0, 20000)) ==
              doctest::Approx(2.0 * thompson_compensation_bound(reference(1.0, 20000))));
    }
    CHECK(thompson_comp_frequency_bound(0.1, 20000) == doctest::Approx(1980.69751).epsilon(1e-8));
    CHECK(thompson_comp_frequency_bound(0.1, 1.0) == 0.0);
    // Table 2 TS(N) values all sit below the per-arm bound times K
    for (double n : {60.0, 79.0, 58.0, 98.0, 131.0, 109.0, 106.0}) {
        CHECK(n < 9.0 * thompson_comp_frequency_bound(0.1, 20000));
    }
}

TEST_CASE("check_c_condition") {
    CHECK(check_c_condition(360.0, 0.1));
    CHECK_FALSE(check_c_condition(4.0, 0.1));
    CHECK(check_c_condition(36.0, 1.0));
    CHECK(check_c_condition(360.0, 0.9 - 0.8));
    CHECK_FALSE(check_c_condition(359.9, 0.1));
}

TEST_CASE("bounds are monotone in T and l") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> gap(0.05, 0.9);
    std::uniform_real_distribution<double> coeff(0.0, 2.0);
    std::uniform_real_distribution<double> cc(0.5, 50.0);
    for (int trial = 0; trial < 300; ++trial) {
        BoundInputs in;
        in.num_arms = 2 + gen() % 8;
        for (std::uint64_t i = 1; i < in.num_arms; ++i) in.gaps.push_back(gap(gen));
        in.delta_min = *std::min_element(in.gaps.begin(), in.gaps.end());
        in.delta_lower = std::min(in.delta_min, gap(gen));
        in.c = cc(gen);
        in.l = coeff(gen);
        // past every log-positivity threshold (T Δ_i² > 1)
        in.horizon = 1.0 / (in.delta_min * in.delta_min) + 10.0 + 1000.0 * coeff(gen);

        using Bound = double (*)(const BoundInputs&);
        for (Bound f : {ucb_regret_bound, ucb_compensation_bound, egreedy_regret_bound,
                        egreedy_compensation_bound, thompson_regret_bound,
                        thompson_compensation_bound}) {
            BoundInputs later = in;
            later.horizon *= 1.5;
            BoundInputs drifted = in;
            drifted.l += 0.3;
            CHECK(f(later) >= f(in));
            CHECK(f(drifted) >= f(in));
        }
        CHECK(thompson_comp_frequency_bound(in.delta_lower, in.horizon * 2.0) >=
              thompson_comp_frequency_bound(in.delta_lower, in.horizon));
    }
}

TEST_CASE("bound_inputs") {
    BoundInputs in = bound_inputs(BanditInstance({0.2, 0.9, 0.55}, Noise::bernoulli()), 0.5, 2.0, 100.0);
    CHECK(in.num_arms == 3);
    REQUIRE(in.gaps.size() == 2);
    CHECK(in.gaps[0] == doctest::Approx(0.7));
    CHECK(in.gaps[1] == doctest::Approx(0.35));
    CHECK(in.delta_min == doctest::Approx(0.35));
    CHECK(in.delta_lower == doctest::Approx(0.35));
    CHECK(bound_inputs(BanditInstance({0.2, 0.9}, Noise::bernoulli()), 0, 1, 10, 0.05).delta_lower == 0.05);
    CHECK_THROWS_AS(regret_bound(PolicyKind::greedy(), in), Error);
}

TEST_CASE("summarize") {
    SUBCASE("zero noise greedy run on two arms") {
        BanditInstance inst({0.9, 0.8}, Noise::gaussian(0.0));
        ScriptedRandom rng({});
        Trajectory tr = run(inst, PolicyKind::greedy(), DriftModel::zero(), MechanismOptions{}, 50, rng);
        SummaryMetrics m = summarize(tr, inst);
        CHECK(m.regret == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(m.comp_rounds == 0);
        CHECK(m.arm1_rel_error == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(m.compensation == 0.0);
    }
    SUBCASE("comp_rounds and regret identity on seeded runs") {
        BanditInstance inst(kReferenceMeans, Noise::gaussian(1.0));
        for (PolicyKind p : {PolicyKind::ucb(), PolicyKind::egreedy(4.0), PolicyKind::thompson()}) {
            Trajectory tr = run(inst, p, DriftModel::linear(0.7), MechanismOptions{}, 4000, 8);
            SummaryMetrics m = summarize(tr, inst);
            std::uint64_t flagged = 0;
            for (const RoundRecord& r : tr.rounds) flagged += r.compensated ? 1 : 0;
            CHECK(m.comp_rounds == flagged);
            double identity = 0.0;
            for (std::size_t i = 0; i < m.per_arm.size(); ++i) {
                identity += inst.gap(i) * static_cast<double>(m.per_arm[i].pulls);
            }
            CHECK(std::abs(m.regret - identity) <= 1e-9 * identity);
            CHECK(m.regret >= 0.0);
            CHECK(m.arm1_rel_error >= 0.0);
        }
    }
}
