// Command-line front end: solve equilibria for a market instance, certify
// the analytic solutions against the grid oracle, and run the Monte Carlo
// comparison of the three schemes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freshmarket/freshmarket.hpp"

namespace fm = freshmarket;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertifyFailed = 1;
constexpr int kExitUsage = 2;

fm::InstanceConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    fm::json j = fm::json::parse(in); // throws on malformed input
    return fm::parse_instance_config(j);
}

int cmd_solve(const std::string& config_path, std::size_t k_cap_override,
              double epsilon_rel_override) {
    const auto cfg = load_config(config_path);
    const auto instance = fm::make_instance(cfg);
    const std::size_t k_cap = k_cap_override ? k_cap_override : cfg.solver.k_cap;
    const double eps_rel =
        epsilon_rel_override > 0.0 ? epsilon_rel_override : cfg.solver.epsilon_rel;

    const auto td = fm::solve_time_dependent(instance);
    const auto qb = fm::solve_quantity_based(instance, k_cap, eps_rel);
    const auto so = fm::social_optimum(instance, k_cap);

    fm::json out;
    out["time_dependent"] = fm::to_json(td);
    out["quantity_based"] = fm::to_json(qb);
    out["social_optimum"] = fm::to_json(so);
    out["degenerate"] = td.degenerate;
    if (td.degenerate) {
        out["warning"] = "one-update viability fails: C(1) > DF(T/2, T/2); "
                         "no-update equilibrium reported";
        out["profit_ratio"] = 1.0;
    } else {
        out["profit_ratio"] = fm::round12(qb.profit / td.profit);
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_certify(const std::string& config_path, std::size_t n, std::size_t k_cap_flag,
                std::size_t trials, std::uint64_t seed) {
    if (n < 100) {
        std::cerr << "certify: --grid-n must be >= 100\n";
        return kExitUsage;
    }
    const auto cfg = load_config(config_path);
    const auto instance = fm::make_instance(cfg);
    const double T = instance.horizon;
    const double f_t = fm::age_cost(instance.age_cost, T);
    const double slack = 5.0 * f_t * T / static_cast<double>(n);
    const std::size_t k_cap = k_cap_flag ? k_cap_flag : fm::default_oracle_k_cap(n);

    bool all_pass = true;
    fm::json checks = fm::json::array();
    auto record = [&](const std::string& name, bool pass, fm::json detail) {
        detail["check"] = name;
        detail["pass"] = pass;
        checks.push_back(detail);
        if (!pass) all_pass = false;
        std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
    };

    const auto qb = fm::solve_quantity_based(instance, cfg.solver.k_cap, cfg.solver.epsilon_rel);
    if (qb.degenerate) {
        record("quantity_equilibrium_oracle", true,
               fm::json{{"note", "degenerate instance, nothing to certify"}});
    } else {
        const auto cert = fm::certify_quantity_equilibrium(instance, qb, n, k_cap);
        record("quantity_equilibrium_oracle", cert.pass,
               fm::json{{"k_star", qb.k_star},
                {"oracle_k", cert.oracle_k},
                {"oracle_n", cert.oracle_n},
                {"interval_spread", fm::round12(cert.interval_spread)},
                {"cost_delta", fm::round12(cert.cost_delta)},
                {"slack", fm::round12(cert.slack)}});

        // Time-dependent equilibrium: a constant price marginally below
        // DF(T/2, T/2) must induce exactly one update next to T/2.
        const auto td = fm::solve_time_dependent(instance);
        const auto td_scheme = fm::PricingScheme::constant_price(td.price * (1.0 - 1e-3));
        const auto td_oracle = fm::grid_best_response(instance, td_scheme, n, k_cap);
        const bool td_k = td_oracle.policy.count() == 1;
        const bool td_near = td_k && std::abs(td_oracle.policy.times()[0] - T / 2.0) <=
                                         T / static_cast<double>(n) + 1e-12;
        record("time_equilibrium_oracle", td_k && td_near,
               fm::json{{"oracle_k", td_oracle.policy.count()},
                {"update_time",
                 td_k ? fm::json(fm::round12(td_oracle.policy.times()[0]))
                      : fm::json(nullptr)}});

        // Profit-dominance trials: random time-quantity price grids never
        // beat the quantity-based optimum against the oracle.
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double pi_q = qb.profit;
        const double scale = fm::cumulative_age_cost(instance.age_cost, T) / 2.0;
        bool dominance = true;
        double worst_excess = -1e300;
        for (std::size_t trial = 0; trial < trials; ++trial) {
            std::vector<std::vector<double>> grid(33, std::vector<double>(8));
            for (auto& row : grid)
                for (auto& p : row) p = scale * unif(rng);
            const auto adv = fm::PricingScheme::time_quantity(std::move(grid), T);
            const auto resp = fm::grid_best_response(instance, adv, n, 16);
            const auto outcome = fm::evaluate_outcome(instance, adv, resp.policy);
            worst_excess = std::max(worst_excess, outcome.profit - pi_q);
            if (outcome.profit > pi_q + slack) dominance = false;
        }
        record("profit_dominance_trials", dominance,
               fm::json{{"trials", trials}, {"worst_excess", fm::round12(worst_excess)},
                {"slack", fm::round12(slack)}});
    }

    fm::json report{{"grid_n", n}, {"k_cap", k_cap}, {"checks", checks}, {"pass", all_pass}};
    std::cout << report.dump(2) << "\n";
    return all_pass ? kExitOk : kExitCertifyFailed;
}

int cmd_simulate(std::size_t trials, std::uint64_t seed, const std::string& csv_path,
                 const std::string& json_path) {
    fm::ScenarioDistribution dist;
    dist.trials = trials;
    dist.seed = seed;
    const auto result = fm::run_monte_carlo(dist);

    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            std::cerr << "simulate: cannot write " << csv_path << "\n";
            return kExitUsage;
        }
        out << fm::simulation_csv(result.records);
    }
    const fm::json summary = fm::to_json(result.summary);
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            std::cerr << "simulate: cannot write " << json_path << "\n";
            return kExitUsage;
        }
        out << summary.dump(2) << "\n";
    }
    std::cout << "profit_ratio " << fm::format_double(result.summary.profit_ratio) << "\n"
              << "social_cost_ratio " << fm::format_double(result.summary.social_cost_ratio)
              << "\n"
              << "aggregate_aoi_ratio "
              << fm::format_double(result.summary.aggregate_aoi_ratio) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fresh-data market equilibrium solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::size_t grid_n = 500;
    std::size_t k_cap = 0; // 0 = config/default value
    double epsilon_rel = 0.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    std::string csv_path;
    std::string json_path;

    auto* solve = app.add_subcommand("solve", "Solve both pricing equilibria");
    solve->add_option("--config", config_path, "instance configuration file")->required();
    solve->add_option("--k-cap", k_cap, "update count cap");
    solve->add_option("--epsilon-rel", epsilon_rel, "relative price slack");

    auto* certify = app.add_subcommand("certify", "Certify solvers against the grid oracle");
    certify->add_option("--config", config_path, "instance configuration file")->required();
    certify->add_option("--grid-n", grid_n, "oracle grid points (>= 100)");
    certify->add_option("--k-cap", k_cap, "oracle update count cap");
    certify->add_option("--trials", trials, "dominance trial count")->capture_default_str();
    certify->add_option("--seed", seed, "dominance trial seed");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo scheme comparison");
    simulate->add_option("--trials", trials, "trial count")->capture_default_str();
    simulate->add_option("--seed", seed, "base seed");
    simulate->add_option("--csv", csv_path, "per-trial CSV output path");
    simulate->add_option("--json", json_path, "summary JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(config_path, k_cap, epsilon_rel);
        if (certify->parsed()) {
            const std::size_t n_trials = certify->count("--trials") ? trials : 20;
            return cmd_certify(config_path, grid_n, k_cap, n_trials, seed);
        }
        if (simulate->parsed()) {
            if (trials == 0) {
                std::cerr << "simulate: --trials must be >= 1\n";
                return kExitUsage;
            }
            return cmd_simulate(trials, seed, csv_path, json_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
