#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "driftbandit/experiment.hpp"

using namespace driftbandit;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.means = {0.9, 0.6, 0.3};
    config.noise = Noise::gaussian(1.0);
    config.policies = {{PolicyKind::ucb(), std::nullopt},
                       {PolicyKind::egreedy(2.0), std::nullopt},
                       {PolicyKind::thompson(), std::nullopt}};
    config.l_values = {0.0, 0.5};
    config.horizon = 500;
    config.replications = 4;
    config.master_seed = 11;
    return config;
}

void check_same(const AggregateResult& a, const AggregateResult& b) {
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].regret.mean == b.cells[i].regret.mean);
        CHECK(a.cells[i].regret.std == b.cells[i].regret.std);
        CHECK(a.cells[i].compensation.mean == b.cells[i].compensation.mean);
        CHECK(a.cells[i].comp_rounds.mean == b.cells[i].comp_rounds.mean);
        CHECK(a.cells[i].arm1_rel_error.mean == b.cells[i].arm1_rel_error.mean);
        CHECK(a.cells[i].curve_regret == b.cells[i].curve_regret);
    }
}

}  // namespace

TEST_CASE("aggregate") {
    std::vector<double> two{2.0, 4.0};
    MetricStats s = aggregate(two);
    CHECK(s.mean == 3.0);
    CHECK(s.std == doctest::Approx(std::sqrt(2.0)));

    std::vector<double> one{5.0};
    CHECK(aggregate(one).std == 0.0);
    CHECK(aggregate(one).mean == 5.0);

    std::vector<double> flat(17, 0.25);
    CHECK(aggregate(flat).std == doctest::Approx(0.0));

    std::mt19937_64 gen(5);
    std::normal_distribution<double> normal(3.0, 2.0);
    std::vector<double> xs(200);
    for (double& x : xs) x = normal(gen);
    MetricStats before = aggregate(xs);
    std::shuffle(xs.begin(), xs.end(), gen);
    MetricStats after = aggregate(xs);
    CHECK(after.mean == doctest::Approx(before.mean).epsilon(1e-12));
    CHECK(after.std == doctest::Approx(before.std).epsilon(1e-12));
}

TEST_CASE("derive_seed") {
    // reference values from an independent Python implementation
    CHECK(derive_seed(0, 0, 0, 0) == 2391539541053276776ULL);
    CHECK(derive_seed(20200101, 0, 0, 0) == 14033036955967367278ULL);
    CHECK(derive_seed(20200101, 2, 6, 49) == 7770955049570538525ULL);
    CHECK(derive_seed(1, 1, 2, 3) == 7725364555548041738ULL);

    std::set<std::uint64_t> seen;
    std::set<std::uint64_t> other;
    for (std::uint64_t p = 0; p < 4; ++p) {
        for (std::uint64_t l = 0; l < 7; ++l) {
            for (std::uint64_t r = 0; r < 50; ++r) {
                seen.insert(derive_seed(20200101, p, l, r));
                other.insert(derive_seed(20200102, p, l, r));
            }
        }
    }
    CHECK(seen.size() == 4 * 7 * 50);
    for (std::uint64_t s : other) CHECK(seen.count(s) == 0);
}

TEST_CASE("curve_length") {
    CHECK(curve_length(20000, 10) == 2000);
    CHECK(curve_length(25, 10) == 3);
    CHECK(curve_length(7, 1) == 7);
    CHECK(curve_length(3, 10) == 1);
}

TEST_CASE("config validation") {
    ExperimentConfig config = small_config();
    CHECK_NOTHROW(config.validate());
    CHECK_NOTHROW(reference_config().validate());

    auto expect_invalid = [](const ExperimentConfig& c) {
        try {
            c.validate();
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_argument);
        }
    };
    ExperimentConfig bad = config;
    bad.l_values.clear();
    expect_invalid(bad);
    bad = config;
    bad.l_values = {0.1, -0.2};
    expect_invalid(bad);
    bad = config;
    bad.policies.clear();
    expect_invalid(bad);
    bad = config;
    bad.replications = 0;
    expect_invalid(bad);
    bad = config;
    bad.horizon = 2;
    expect_invalid(bad);
    bad = config;
    bad.trajectory_stride = 0;
    expect_invalid(bad);

    bad = config;
    bad.means = {0.5, 0.5};
    try {
        bad.validate();
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::non_unique_optimum);
    }
    CHECK_THROWS_AS(run_experiment(bad), Error);
}

TEST_CASE("reference_config") {
    ExperimentConfig ref = reference_config();
    CHECK(ref.means.size() == 9);
    CHECK(ref.horizon == 20000);
    CHECK(ref.replications == 50);
    CHECK(ref.l_values == std::vector<double>{0.0, 0.05, 0.1, 0.4, 0.7, 0.9, 1.1});
    REQUIRE(ref.policies.size() == 3);
    CHECK(ref.policies[1].policy.c == 4.0);
}

TEST_CASE("run_experiment") {
    ExperimentConfig config = small_config();
    config.capture_trajectories = true;
    config.trajectory_stride = 7;
    AggregateResult a = run_experiment(config, 1);
    REQUIRE(a.cells.size() == 6);

    SUBCASE("cells are policy-major") {
        CHECK(a.cells[0].policy.kind == PolicyKind::Kind::ucb);
        CHECK(a.cells[1].l == 0.5);
        CHECK(a.cells[2].policy.kind == PolicyKind::Kind::egreedy);
        CHECK(&a.cell(2, 1) == &a.cells[5]);
        CHECK_THROWS_AS(a.cell(3, 0), Error);
    }
    SUBCASE("deterministic and independent of thread count") {
        check_same(a, run_experiment(config, 1));
        check_same(a, run_experiment(config, 3));
    }
    SUBCASE("curves") {
        for (const CellResult& c : a.cells) {
            REQUIRE(c.curve_t.size() == curve_length(500, 7));
            CHECK(c.curve_t.front() == 7);
            CHECK(c.curve_t.back() == 500);
            CHECK(c.curve_regret.size() == c.curve_t.size());
            CHECK(c.curve_regret.back() == doctest::Approx(c.regret.mean));
            CHECK(c.curve_compensation.back() == doctest::Approx(c.compensation.mean));
            CHECK(std::is_sorted(c.curve_regret.begin(), c.curve_regret.end()));
            CHECK(std::is_sorted(c.curve_compensation.begin(), c.curve_compensation.end()));
        }
    }
    SUBCASE("per-arm means") {
        for (const CellResult& c : a.cells) {
            double pulls = 0.0;
            for (double p : c.mean_pulls) pulls += p;
            CHECK(pulls == doctest::Approx(500.0));
            double comp = 0.0;
            for (double n : c.mean_comp_count) comp += n;
            CHECK(comp == doctest::Approx(c.comp_rounds.mean));
        }
    }
    SUBCASE("stride 1 covers every round") {
        ExperimentConfig every = config;
        every.horizon = 40;
        every.trajectory_stride = 1;
        every.replications = 1;
        AggregateResult r = run_experiment(every);
        CHECK(r.cells[0].curve_t.size() == 40);
        CHECK(r.cells[0].curve_t.front() == 1);
    }
}

TEST_CASE("single replication has zero spread") {
    ExperimentConfig config = small_config();
    config.replications = 1;
    AggregateResult r = run_experiment(config);
    for (const CellResult& c : r.cells) {
        CHECK(c.regret.std == 0.0);
        CHECK(c.compensation.std == 0.0);
    }
}

TEST_CASE("policy seeds follow list position") {
    ExperimentConfig one = small_config();
    one.policies = {{PolicyKind::thompson(), std::nullopt}};
    ExperimentConfig three = small_config();  // thompson sits at index 2
    AggregateResult a = run_experiment(one);
    AggregateResult b = run_experiment(three);
    CHECK(a.cell(0, 0).regret.mean != b.cell(2, 0).regret.mean);

    three.policies = {{PolicyKind::thompson(), std::nullopt}, three.policies[0]};
    check_same(a, AggregateResult{{run_experiment(three).cell(0, 0), run_experiment(three).cell(0, 1)}});
}
