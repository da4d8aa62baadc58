#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "freshmarket/destination_response.hpp"
#include "freshmarket/pricing_solvers.hpp"

using namespace freshmarket;

namespace {

MarketInstance quadratic_instance() {
    return MarketInstance(5.0, AgeCostModel::power_law(2.0),
                          OperationalCostModel::monomial(1.0 / 6.0, 2));
}

MarketInstance linear_instance() {
    return MarketInstance(30.0, AgeCostModel::linear(), OperationalCostModel::monomial(6.0, 3));
}

// Exact equilibrium schedule for the quadratic instance: cumulative sums hit the
// no-update saving F(5) - (k+1) F(5/(k+1)) at every count.
const double kSaving1 = 31.25;
const double kSaving2 = 1000.0 / 27.0; // 37.037...
const double kSaving3 = 39.0625;
const std::vector<double> kQuadraticPrices = {kSaving1, kSaving2 - kSaving1, kSaving3 - kSaving2};

} // namespace

TEST_CASE("upsilon examples") {
    const auto f6 = quadratic_instance();
    CHECK(upsilon(f6, std::vector<double>{1.0}, 0) == doctest::Approx(125.0 / 3.0));
    CHECK(upsilon(f6, kQuadraticPrices, 3) == doctest::Approx(41.6667).epsilon(1e-4));
    const auto lin = linear_instance();
    CHECK(upsilon(lin, std::vector<double>{10.0, 10.0}, 2) == doctest::Approx(170.0));
}

TEST_CASE("upsilon matches evaluate_outcome on equal-spaced policies") {
    const auto f6 = quadratic_instance();
    const auto scheme = PricingScheme::quantity_based(kQuadraticPrices);
    for (std::size_t k = 0; k <= 6; ++k) {
        const auto outcome =
            evaluate_outcome(f6, scheme, UpdatePolicy::equal_spaced(k, f6.horizon));
        CHECK(upsilon(f6, kQuadraticPrices, k) ==
              doctest::Approx(outcome.destination_cost).epsilon(1e-9));
    }
}

TEST_CASE("quantity_best_response examples") {
    const auto f6 = quadratic_instance();
    const double f_t = cumulative_age_cost(f6.age_cost, f6.horizon);

    SUBCASE("prohibitive prices: no updates") {
        const auto r = quantity_best_response(f6, std::vector<double>{2.0 * f_t});
        CHECK(r.policy.count() == 0);
        CHECK(r.overall_cost == doctest::Approx(f_t));
        CHECK_FALSE(r.cap_hit);
    }
    SUBCASE("equilibrium prices: three updates, indifference resolved to the source") {
        const auto r = quantity_best_response(f6, kQuadraticPrices);
        REQUIRE(r.policy.count() == 3);
        CHECK(r.policy.times()[0] == doctest::Approx(1.25));
        CHECK(r.policy.times()[1] == doctest::Approx(2.5));
        CHECK(r.policy.times()[2] == doctest::Approx(3.75));
    }
    SUBCASE("free updates: cap hit") {
        const auto lin = linear_instance();
        const auto r = quantity_best_response(lin, std::vector<double>{0.0}, 50);
        CHECK(r.policy.count() == 50);
        CHECK(r.cap_hit);
    }
}

TEST_CASE("grid_best_response examples") {
    const auto lin = linear_instance();

    SUBCASE("sentinel price: never update") {
        const auto scheme = PricingScheme::constant_price(sentinel_price(lin));
        const auto r = grid_best_response(lin, scheme, 200, 16);
        CHECK(r.policy.count() == 0);
        CHECK(r.overall_cost == doctest::Approx(450.0));
    }
    SUBCASE("half-willingness constant price: single update at midpoint") {
        const auto scheme = PricingScheme::constant_price(112.5);
        const auto r = grid_best_response(lin, scheme, 600, 32);
        REQUIRE(r.policy.count() == 1);
        CHECK(std::abs(r.policy.times()[0] - 15.0) <= 30.0 / 600.0 + 1e-12);
    }
    SUBCASE("equilibrium quantity prices certify the closed form") {
        const auto f6 = quadratic_instance();
        const auto eq = solve_quantity_based(f6);
        REQUIRE(eq.k_star == 3);
        const auto cert = certify_quantity_equilibrium(f6, eq, 500);
        CHECK(cert.oracle_n == 500); // already a multiple of k_star + 1
        CHECK(cert.k_match);
        CHECK(cert.spread_ok);
        CHECK(cert.cost_ok);
        CHECK(cert.pass);
    }
}

TEST_CASE("oracle agrees with the analytic response on random price lists") {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> kappa(1.0, 2.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = 500;
    int checked = 0;
    for (int i = 0; i < 30 && checked < 12; ++i) {
        MarketInstance inst(10.0, AgeCostModel::power_law(kappa(rng)),
                            OperationalCostModel::monomial(1.0, 2));
        const double f_t = cumulative_age_cost(inst.age_cost, inst.horizon);
        std::vector<double> prices(6);
        for (auto& p : prices) p = 0.4 * f_t * unif(rng);
        std::sort(prices.rbegin(), prices.rend());

        const auto analytic = quantity_best_response(inst, prices, 64);
        // only assert when the analytic minimum is clearly separated, so
        // grid resolution cannot flip the count
        const double margin = 5.0 * age_cost(inst.age_cost, inst.horizon) * inst.horizon /
                              static_cast<double>(n);
        bool separated = true;
        for (std::size_t k = 0; k <= 24; ++k) {
            if (k == analytic.policy.count()) continue;
            if (upsilon(inst, prices, k) < analytic.overall_cost + 2.0 * margin)
                separated = false;
        }
        if (!separated) continue;
        ++checked;

        const auto oracle =
            grid_best_response(inst, PricingScheme::quantity_based(prices), n, 24);
        CHECK(oracle.policy.count() == analytic.policy.count());
        CHECK(std::abs(oracle.overall_cost - analytic.overall_cost) <= margin);

        // equal spacing at grid resolution
        const auto xs = oracle.policy.intervals(inst.horizon);
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        CHECK(*hi - *lo <= 2.0 * inst.horizon / static_cast<double>(n) + 1e-12);
    }
    CHECK(checked >= 8);
}

TEST_CASE("doubling the oracle grid never increases the optimal cost") {
    const auto f6 = quadratic_instance();
    const auto scheme = PricingScheme::quantity_based({8.0, 4.0, 2.0, 1.0});
    double prev = grid_best_response(f6, scheme, 50, 16).overall_cost;
    for (std::size_t n = 100; n <= 400; n *= 2) {
        const double cost = grid_best_response(f6, scheme, n, 16).overall_cost;
        CHECK(cost <= prev + 1e-12);
        prev = cost;
    }
}

TEST_CASE("oracle rejects degenerate grids") {
    CHECK_THROWS_AS(
        grid_best_response(quadratic_instance(), PricingScheme::constant_price(1.0), 1, 4),
        std::invalid_argument);
}
