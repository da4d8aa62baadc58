#include <doctest.h>

#include <cmath>

#include "freshmarket/simulation.hpp"

using namespace freshmarket;

TEST_CASE("sample_scenario: truncation, point mass, determinism") {
    ScenarioDistribution dist;
    dist.trials = 1;
    dist.seed = 42;

    SUBCASE("defaults stay inside the truncation box") {
        for (std::size_t i = 0; i < 500; ++i) {
            const auto [kappa, c] = sample_scenario(dist, i);
            CHECK(kappa >= 1.0);
            CHECK(kappa <= 2.0);
            CHECK(c >= 2.0);
            CHECK(c <= 10.0);
        }
    }
    SUBCASE("degenerate range is a point mass") {
        dist.kappa_min = dist.kappa_max = 1.5;
        const auto [kappa, c] = sample_scenario(dist, 3);
        CHECK(kappa == 1.5);
        (void)c;
    }
    SUBCASE("same (seed, trial) gives the same draw") {
        const auto a = sample_scenario(dist, 0);
        const auto b = sample_scenario(dist, 0);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
        const auto other = sample_scenario(dist, 1);
        CHECK(a.first != other.first);
    }
}

TEST_CASE("run_trial with fixed parameters matches the closed forms") {
    ScenarioDistribution dist;
    dist.kappa_min = dist.kappa_max = dist.kappa_mean = 1.0;
    dist.c_min = dist.c_max = dist.c_mean = 6.0;
    dist.trials = 1;

    const auto rec = run_trial(dist, 0);
    CHECK(rec.kappa == 1.0);
    CHECK(rec.c == 6.0);
    CHECK(rec.viable);

    const auto& none = rec.metrics(Scheme::None);
    CHECK(none.aggregate_aoi == doctest::Approx(450.0));
    CHECK(none.aoi_cost == doctest::Approx(450.0));
    CHECK(none.profit == 0.0);
    CHECK(none.payment == 0.0);

    const auto& time = rec.metrics(Scheme::Time);
    CHECK(time.aggregate_aoi == doctest::Approx(225.0));
    CHECK(time.aoi_cost == doctest::Approx(225.0));
    CHECK(time.payment == doctest::Approx(225.0));
    CHECK(time.profit == doctest::Approx(219.0));
    CHECK(time.social_cost == doctest::Approx(231.0));

    // kappa=1, c=6: the count scan picks K*=2
    const auto& quantity = rec.metrics(Scheme::Quantity);
    CHECK(quantity.aggregate_aoi == doctest::Approx(900.0 / 6.0));
    CHECK(quantity.aoi_cost == doctest::Approx(150.0));
    CHECK(quantity.payment == doctest::Approx(300.0));
    CHECK(quantity.profit == doctest::Approx(252.0));
    CHECK(quantity.social_cost == doctest::Approx(198.0));
}

TEST_CASE("degenerate trial collapses every scheme to no-update") {
    ScenarioDistribution dist;
    dist.horizon = 2.0;
    dist.kappa_min = dist.kappa_max = dist.kappa_mean = 1.0;
    dist.c_min = dist.c_max = dist.c_mean = 1000.0;
    dist.op_cost_degree = 1;

    const auto rec = run_trial(dist, 0);
    CHECK_FALSE(rec.viable);
    for (const auto scheme : {Scheme::None, Scheme::Time, Scheme::Quantity}) {
        const auto& m = rec.metrics(scheme);
        CHECK(m.profit == 0.0);
        CHECK(m.payment == 0.0);
        CHECK(m.aoi_cost == doctest::Approx(2.0));
    }
}

TEST_CASE("per-trial scheme dominance") {
    ScenarioDistribution dist;
    dist.trials = 200;
    dist.seed = 11;
    const auto result = run_monte_carlo(dist);
    REQUIRE(result.records.size() == 200);
    for (const auto& rec : result.records) {
        const auto& none = rec.metrics(Scheme::None);
        const auto& time = rec.metrics(Scheme::Time);
        const auto& quantity = rec.metrics(Scheme::Quantity);
        CHECK(quantity.profit >= time.profit - 1e-9);
        CHECK(time.profit >= 0.0);
        CHECK(quantity.profit < 2.0 * time.profit + 1e-9);
        CHECK(quantity.social_cost <= time.social_cost + 1e-9);
        CHECK(time.social_cost <= none.social_cost + 1e-9);
        if (quantity.payment > 0.0) {
            CHECK(quantity.aggregate_aoi <= time.aggregate_aoi + 1e-9);
            CHECK(time.aggregate_aoi < none.aggregate_aoi);
        }
    }
}

TEST_CASE("single-trial summary equals the record") {
    ScenarioDistribution dist;
    dist.kappa_min = dist.kappa_max = dist.kappa_mean = 1.5;
    dist.c_min = dist.c_max = dist.c_mean = 6.0;
    dist.trials = 1;
    const auto result = run_monte_carlo(dist);
    const auto& rec = result.records[0];
    for (int s = 0; s < 3; ++s) {
        CHECK(result.summary.stats[s][3].mean ==
              doctest::Approx(rec.schemes[s].profit));
        CHECK(result.summary.stats[s][3].sd == 0.0);
    }
}

TEST_CASE("Monte Carlo records are deterministic across runs and threading") {
    ScenarioDistribution dist;
    dist.trials = 64;
    dist.seed = 7;
    const auto a = run_monte_carlo(dist);
    const auto b = run_monte_carlo(dist);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].kappa == b.records[i].kappa);
        CHECK(a.records[i].c == b.records[i].c);
        for (int s = 0; s < 3; ++s) {
            CHECK(a.records[i].schemes[s].profit == b.records[i].schemes[s].profit);
            CHECK(a.records[i].schemes[s].social_cost == b.records[i].schemes[s].social_cost);
        }
    }
}

TEST_CASE("distribution validation") {
    ScenarioDistribution dist;
    dist.trials = 0;
    CHECK_THROWS_AS(dist.validate(), std::invalid_argument);
    dist.trials = 1;
    dist.kappa_sd = 0.0;
    CHECK_THROWS_AS(dist.validate(), std::invalid_argument);
}
