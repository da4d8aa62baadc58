#include <doctest.h>

#include "freshmarket/json_io.hpp"

using namespace freshmarket;

TEST_CASE("instance config parses and rejects unknown fields") {
    const auto j = json::parse(R"({
        "horizon": 5,
        "age_cost": {"power_law": {"kappa": 2}},
        "op_cost": {"monomial": {"c": 0.16666666666666666, "d": 2}},
        "solver": {"k_cap": 50, "epsilon_rel": 1e-8, "grid_n": 400}
    })");
    const auto cfg = parse_instance_config(j);
    CHECK(cfg.horizon == 5.0);
    CHECK(cfg.solver.k_cap == 50);
    CHECK(cfg.solver.epsilon_rel == 1e-8);
    CHECK(cfg.solver.grid_n == 400);
    const auto instance = make_instance(cfg);
    CHECK(cumulative_age_cost(instance.age_cost, 5.0) == doctest::Approx(125.0 / 3.0));
    CHECK(operational_cost(instance.op_cost, 3.0) == doctest::Approx(1.5));

    auto bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_AS(parse_instance_config(bad), std::invalid_argument);

    auto bad_nested = j;
    bad_nested["age_cost"]["power_law"]["typo"] = 1;
    CHECK_THROWS_AS(parse_instance_config(bad_nested), std::invalid_argument);
}

TEST_CASE("sampled and polynomial variants parse") {
    const auto j = json::parse(R"({
        "horizon": 4,
        "age_cost": {"sampled": {"grid": [0, 1, 2, 4], "values": [0, 1, 4, 16]}},
        "op_cost": {"polynomial": {"coefficients": [2, 0.5]}}
    })");
    const auto instance = make_instance(parse_instance_config(j));
    CHECK(age_cost(instance.age_cost, 3.0) == doctest::Approx(10.0));
    CHECK(operational_cost(instance.op_cost, 2.0) == doctest::Approx(6.0));
}

TEST_CASE("round12 and formatting") {
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(round12(1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(format_double(225.0) == "225");
}

TEST_CASE("equilibrium JSON round-trips under the schema") {
    const MarketInstance instance(5.0, AgeCostModel::power_law(2.0),
                                  OperationalCostModel::monomial(1.0 / 6.0, 2));
    const auto qb = solve_quantity_based(instance);
    const auto j = to_json(qb);
    const auto parsed = json::parse(j.dump());
    CHECK(parsed.at("k_star").get<std::size_t>() == 3);
    CHECK(parsed.at("prices").size() == 3);
    CHECK(parsed.at("policy").at("times").size() == 3);
    CHECK(parsed.at("profit").get<double>() == doctest::Approx(37.5625).epsilon(1e-9));

    const auto td = to_json(solve_time_dependent(instance));
    CHECK(json::parse(td.dump()).at("update_time").get<double>() == doctest::Approx(2.5));
}

TEST_CASE("simulation CSV shape") {
    ScenarioDistribution dist;
    dist.trials = 3;
    dist.seed = 5;
    const auto result = run_monte_carlo(dist);
    const auto csv = simulation_csv(result.records);
    // header + 3 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind("trial,kappa,c,none_aggregate_aoi", 0) == 0);
    const auto summary = to_json(result.summary);
    CHECK(json::parse(summary.dump()).at("profit_ratio").is_number());
}
