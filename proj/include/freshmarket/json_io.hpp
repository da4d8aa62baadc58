#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "destination_response.hpp"
#include "market_core.hpp"
#include "pricing_solvers.hpp"
#include "simulation.hpp"

namespace freshmarket {

using json = nlohmann::ordered_json;

// All emitted floating-point values carry 12 significant digits so output
// files are stable across platforms.
inline std::string format_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_double(v));
}

inline json to_json(const UpdatePolicy& policy) {
    json times = json::array();
    for (double t : policy.times()) times.push_back(round12(t));
    return json{{"times", times}};
}

inline json to_json(const OutcomeReport& report) {
    return json{{"policy", to_json(report.policy)},
                {"payment", round12(report.payment)},
                {"aggregate_aoi_cost", round12(report.aggregate_aoi_cost)},
                {"destination_cost", round12(report.destination_cost)},
                {"profit", round12(report.profit)},
                {"social_cost", round12(report.social_cost)}};
}

inline json to_json(const BestResponse& response) {
    json j{{"policy", to_json(response.policy)},
           {"overall_cost", round12(response.overall_cost)},
           {"cap_hit", response.cap_hit}};
    if (response.optimizer_kind == OptimizerKind::Analytic) {
        j["optimizer_kind"] = "analytic";
    } else {
        j["optimizer_kind"] = "grid_oracle";
        j["grid_points"] = response.oracle.grid_points;
        j["max_count"] = response.oracle.max_count;
    }
    return j;
}

inline json to_json(const TimeDependentEquilibrium& eq) {
    return json{{"degenerate", eq.degenerate},
                {"price", round12(eq.price)},
                {"update_time", round12(eq.update_time)},
                {"profit", round12(eq.profit)},
                {"policy", to_json(eq.policy)}};
}

inline json to_json(const QuantityEquilibrium& eq) {
    json prices = json::array();
    for (double p : eq.prices) prices.push_back(round12(p));
    return json{{"degenerate", eq.degenerate},
                {"k_star", eq.k_star},
                {"k_hat", eq.k_hat},
                {"k_hat_cap_hit", eq.k_hat_cap_hit},
                {"prices", prices},
                {"policy", to_json(eq.policy)},
                {"profit", round12(eq.profit)},
                {"epsilon", round12(eq.epsilon)}};
}

inline json to_json(const SocialOptimum& opt) {
    return json{{"k", opt.k},
                {"policy", to_json(opt.policy)},
                {"social_cost", round12(opt.social_cost)}};
}

// ---- instance configuration ----

struct SolverOptions {
    std::size_t k_cap = 10000;
    double epsilon_rel = 1e-9;
    std::size_t grid_n = 500;
};

struct InstanceConfig {
    double horizon = 0.0;
    json age_cost;
    json op_cost;
    SolverOptions solver;
};

namespace detail {

inline void require_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown field \"" + key + "\" in " + where);
    }
}

} // namespace detail

inline AgeCostModel parse_age_cost(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument("config: age_cost must hold exactly one variant");
    if (j.contains("power_law")) {
        const auto& p = j.at("power_law");
        detail::require_keys(p, {"kappa"}, "age_cost.power_law");
        return AgeCostModel::power_law(p.at("kappa").get<double>());
    }
    if (j.contains("linear")) {
        detail::require_keys(j.at("linear"), {}, "age_cost.linear");
        return AgeCostModel::linear();
    }
    if (j.contains("sampled")) {
        const auto& s = j.at("sampled");
        detail::require_keys(s, {"grid", "values"}, "age_cost.sampled");
        return AgeCostModel::sampled(s.at("grid").get<std::vector<double>>(),
                                     s.at("values").get<std::vector<double>>());
    }
    throw std::invalid_argument("config: unsupported age_cost variant");
}

inline OperationalCostModel parse_op_cost(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument("config: op_cost must hold exactly one variant");
    if (j.contains("monomial")) {
        const auto& m = j.at("monomial");
        detail::require_keys(m, {"c", "d"}, "op_cost.monomial");
        return OperationalCostModel::monomial(m.at("c").get<double>(), m.at("d").get<int>());
    }
    if (j.contains("polynomial")) {
        const auto& p = j.at("polynomial");
        detail::require_keys(p, {"coefficients"}, "op_cost.polynomial");
        return OperationalCostModel::polynomial(p.at("coefficients").get<std::vector<double>>());
    }
    throw std::invalid_argument("config: unsupported op_cost variant");
}

inline InstanceConfig parse_instance_config(const json& j) {
    detail::require_keys(j, {"horizon", "age_cost", "op_cost", "solver"}, "config");
    InstanceConfig cfg;
    cfg.horizon = j.at("horizon").get<double>();
    cfg.age_cost = j.at("age_cost");
    cfg.op_cost = j.at("op_cost");
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        detail::require_keys(s, {"k_cap", "epsilon_rel", "grid_n"}, "solver");
        if (s.contains("k_cap")) cfg.solver.k_cap = s.at("k_cap").get<std::size_t>();
        if (s.contains("epsilon_rel")) cfg.solver.epsilon_rel = s.at("epsilon_rel").get<double>();
        if (s.contains("grid_n")) cfg.solver.grid_n = s.at("grid_n").get<std::size_t>();
    }
    // eager validation so malformed model blocks are rejected here
    parse_age_cost(cfg.age_cost);
    parse_op_cost(cfg.op_cost);
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
    return cfg;
}

inline MarketInstance make_instance(const InstanceConfig& cfg) {
    return MarketInstance(cfg.horizon, parse_age_cost(cfg.age_cost), parse_op_cost(cfg.op_cost));
}

// ---- simulation output ----

inline std::string simulation_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    out << "trial,kappa,c";
    for (const char* scheme : {"none", "time", "quantity"})
        for (const char* metric :
             {"aggregate_aoi", "aoi_cost", "social_cost", "profit", "payment"})
            out << ',' << scheme << '_' << metric;
    out << '\n';
    for (const auto& r : records) {
        out << r.trial << ',' << format_double(r.kappa) << ',' << format_double(r.c);
        for (const auto& s : r.schemes) {
            out << ',' << format_double(s.aggregate_aoi) << ',' << format_double(s.aoi_cost)
                << ',' << format_double(s.social_cost) << ',' << format_double(s.profit) << ','
                << format_double(s.payment);
        }
        out << '\n';
    }
    return out.str();
}

inline json to_json(const SimulationSummary& summary) {
    static const char* schemes[] = {"none", "time", "quantity"};
    static const char* metrics[] = {"aggregate_aoi", "aoi_cost", "social_cost", "profit",
                                    "payment"};
    json stats;
    for (int s = 0; s < 3; ++s) {
        json per;
        for (int m = 0; m < 5; ++m) {
            per[metrics[m]] = json{{"mean", round12(summary.stats[s][m].mean)},
                                   {"sd", round12(summary.stats[s][m].sd)}};
        }
        stats[schemes[s]] = per;
    }
    return json{{"stats", stats},
                {"profit_ratio", round12(summary.profit_ratio)},
                {"social_cost_ratio", round12(summary.social_cost_ratio)},
                {"aggregate_aoi_ratio", round12(summary.aggregate_aoi_ratio)}};
}

} // namespace freshmarket
