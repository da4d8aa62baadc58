#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "market_core.hpp"
#include "pricing_solvers.hpp"
#include "rng.hpp"

namespace freshmarket {

// Trial parameters matching the numerical study: power-law age cost with
// truncated-normal exponent, cubic operational cost with truncated-normal
// coefficient.
struct ScenarioDistribution {
    double horizon = 30.0;
    double kappa_mean = 1.5;
    double kappa_sd = 0.2;
    double kappa_min = 1.0;
    double kappa_max = 2.0;
    double c_mean = 6.0;
    double c_sd = 1.5;
    double c_min = 2.0;
    double c_max = 10.0;
    int op_cost_degree = 3;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(horizon > 0.0)) throw std::invalid_argument("ScenarioDistribution: horizon <= 0");
        if (!(kappa_sd > 0.0) || !(c_sd > 0.0))
            throw std::invalid_argument("ScenarioDistribution: sd must be > 0");
        if (!(kappa_min <= kappa_max) || !(c_min <= c_max))
            throw std::invalid_argument("ScenarioDistribution: empty truncation range");
        if (trials < 1) throw std::invalid_argument("ScenarioDistribution: trials must be >= 1");
        if (op_cost_degree < 1)
            throw std::invalid_argument("ScenarioDistribution: degree must be >= 1");
    }
};

enum class Scheme { None = 0, Time = 1, Quantity = 2 };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::None: return "none";
        case Scheme::Time: return "time";
        default: return "quantity";
    }
}

struct SchemeMetrics {
    double aggregate_aoi = 0.0; // raw integral of the age, independent of kappa
    double aoi_cost = 0.0;
    double social_cost = 0.0;
    double profit = 0.0;
    double payment = 0.0;
};

struct TrialRecord {
    std::size_t trial = 0;
    double kappa = 0.0;
    double c = 0.0;
    bool viable = true;
    std::array<SchemeMetrics, 3> schemes; // indexed by Scheme

    const SchemeMetrics& metrics(Scheme s) const { return schemes[static_cast<int>(s)]; }
};

namespace detail {

inline double truncated_normal(CounterRng& rng, double mean, double sd, double lo, double hi) {
    if (lo == hi) return lo;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double v = mean + sd * rng.normal();
        if (v >= lo && v <= hi) return v;
    }
    throw std::runtime_error("truncated_normal: rejection sampling failed");
}

// Raw aggregate AoI of an equal-spaced policy: sum of x^2/2 per interval.
inline double equal_spaced_raw_aoi(double horizon, std::size_t k) {
    const double x = horizon / static_cast<double>(k + 1);
    return static_cast<double>(k + 1) * x * x / 2.0;
}

} // namespace detail

inline std::pair<double, double> sample_scenario(const ScenarioDistribution& dist,
                                                 std::size_t trial_index) {
    dist.validate();
    CounterRng rng(dist.seed, trial_index);
    const double kappa =
        detail::truncated_normal(rng, dist.kappa_mean, dist.kappa_sd, dist.kappa_min, dist.kappa_max);
    const double c = detail::truncated_normal(rng, dist.c_mean, dist.c_sd, dist.c_min, dist.c_max);
    return {kappa, c};
}

inline TrialRecord run_trial(const ScenarioDistribution& dist, std::size_t trial_index) {
    const auto [kappa, c] = sample_scenario(dist, trial_index);
    const MarketInstance instance(dist.horizon, AgeCostModel::power_law(kappa),
                                  OperationalCostModel::monomial(c, dist.op_cost_degree));

    TrialRecord rec;
    rec.trial = trial_index;
    rec.kappa = kappa;
    rec.c = c;

    const double T = dist.horizon;
    const double f_t = cumulative_age_cost(instance.age_cost, T);

    auto& none = rec.schemes[static_cast<int>(Scheme::None)];
    none.aggregate_aoi = T * T / 2.0;
    none.aoi_cost = f_t;
    none.social_cost = f_t;

    const auto td = solve_time_dependent(instance);
    auto& time = rec.schemes[static_cast<int>(Scheme::Time)];
    if (td.degenerate) {
        rec.viable = false;
        time = none;
    } else {
        const double half_cost = 2.0 * cumulative_age_cost(instance.age_cost, T / 2.0);
        time.aggregate_aoi = T * T / 4.0;
        time.aoi_cost = half_cost;
        time.payment = td.price;
        time.profit = td.profit;
        time.social_cost = half_cost + operational_cost(instance.op_cost, 1.0);
    }

    const auto qb = solve_quantity_based(instance);
    auto& quantity = rec.schemes[static_cast<int>(Scheme::Quantity)];
    if (qb.degenerate) {
        quantity = none;
    } else {
        const std::size_t k = qb.k_star;
        const double m = static_cast<double>(k + 1);
        const double cost = m * cumulative_age_cost(instance.age_cost, T / m);
        quantity.aggregate_aoi = detail::equal_spaced_raw_aoi(T, k);
        quantity.aoi_cost = cost;
        quantity.payment = f_t - cost;
        quantity.profit = qb.profit;
        quantity.social_cost = cost + operational_cost(instance.op_cost, static_cast<double>(k));
    }
    return rec;
}

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0; // population standard deviation
};

struct SimulationSummary {
    // [scheme][metric]: metrics ordered aggregate_aoi, aoi_cost, social_cost,
    // profit, payment.
    std::array<std::array<MetricSummary, 5>, 3> stats;
    double profit_ratio = 0.0;        // mean profit quantity / time
    double social_cost_ratio = 0.0;   // mean social cost quantity / time
    double aggregate_aoi_ratio = 0.0; // mean aggregate AoI quantity / time
};

inline std::size_t worker_count() {
    if (const char* env = std::getenv("FRESHMARKET_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

struct SimulationResult {
    std::vector<TrialRecord> records;
    SimulationSummary summary;
};

inline SimulationResult run_monte_carlo(const ScenarioDistribution& dist) {
    dist.validate();
    std::vector<TrialRecord> records(dist.trials);

    const std::size_t workers = std::min(worker_count(), dist.trials);
    if (workers <= 1) {
        for (std::size_t i = 0; i < dist.trials; ++i) records[i] = run_trial(dist, i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < dist.trials; i += workers)
                    records[i] = run_trial(dist, i);
            });
        }
        for (auto& t : pool) t.join();
    }

    SimulationSummary summary;
    const double n = static_cast<double>(dist.trials);
    for (int s = 0; s < 3; ++s) {
        for (int m = 0; m < 5; ++m) {
            auto get = [&](const TrialRecord& r) {
                const auto& sm = r.schemes[s];
                switch (m) {
                    case 0: return sm.aggregate_aoi;
                    case 1: return sm.aoi_cost;
                    case 2: return sm.social_cost;
                    case 3: return sm.profit;
                    default: return sm.payment;
                }
            };
            double mean = 0.0;
            for (const auto& r : records) mean += get(r);
            mean /= n;
            double var = 0.0;
            for (const auto& r : records) {
                const double d = get(r) - mean;
                var += d * d;
            }
            summary.stats[s][m] = MetricSummary{mean, std::sqrt(var / n)};
        }
    }
    const auto& t = summary.stats[static_cast<int>(Scheme::Time)];
    const auto& q = summary.stats[static_cast<int>(Scheme::Quantity)];
    summary.profit_ratio = t[3].mean != 0.0 ? q[3].mean / t[3].mean : 0.0;
    summary.social_cost_ratio = t[2].mean != 0.0 ? q[2].mean / t[2].mean : 0.0;
    summary.aggregate_aoi_ratio = t[0].mean != 0.0 ? q[0].mean / t[0].mean : 0.0;
    return SimulationResult{std::move(records), std::move(summary)};
}

} // namespace freshmarket
