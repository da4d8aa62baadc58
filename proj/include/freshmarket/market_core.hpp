#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cost_models.hpp"

namespace freshmarket {

// One complete game instance: horizon [0, T], the destination's age-cost
// model and the source's operational-cost model.
struct MarketInstance {
    double horizon;
    AgeCostModel age_cost;
    OperationalCostModel op_cost;

    MarketInstance(double T, AgeCostModel age, OperationalCostModel op)
        : horizon(T), age_cost(std::move(age)), op_cost(std::move(op)) {
        if (!(T > 0.0)) throw std::invalid_argument("MarketInstance: horizon must be > 0");
    }

    bool viable() const; // one-update viability check, defined below
};

// The destination's strategy: strictly increasing update instants in (0, T).
class UpdatePolicy {
public:
    UpdatePolicy() = default;

    UpdatePolicy(std::vector<double> times, double horizon) : times_(std::move(times)) {
        double prev = 0.0;
        for (double t : times_) {
            if (!(t > prev) || !(t < horizon))
                throw std::invalid_argument(
                    "UpdatePolicy: times must be strictly increasing within (0, T)");
            prev = t;
        }
    }

    // Equal-spaced policy with k updates: S_i = i * T / (k + 1).
    static UpdatePolicy equal_spaced(std::size_t k, double horizon) {
        std::vector<double> times;
        times.reserve(k);
        for (std::size_t i = 1; i <= k; ++i)
            times.push_back(static_cast<double>(i) * horizon / static_cast<double>(k + 1));
        return UpdatePolicy(std::move(times), horizon);
    }

    const std::vector<double>& times() const { return times_; }
    std::size_t count() const { return times_.size(); }

    // Interarrival intervals x_1..x_{K+1} with S_0 = 0, S_{K+1} = T.
    std::vector<double> intervals(double horizon) const {
        std::vector<double> xs;
        xs.reserve(times_.size() + 1);
        double prev = 0.0;
        for (double t : times_) {
            xs.push_back(t - prev);
            prev = t;
        }
        xs.push_back(horizon - prev);
        return xs;
    }

private:
    std::vector<double> times_;
};

// Time-only price p(t): a constant, or samples on a uniform grid over [0, T]
// with nearest-point lookup (ties resolve to the earlier grid point).
struct TimeDependentPrice {
    double constant = 0.0;
    std::vector<double> samples; // empty -> constant price
    double horizon = 0.0;        // required when samples are present

    double at(double t) const {
        if (samples.empty()) return constant;
        if (samples.size() == 1) return samples[0];
        const double h = horizon / static_cast<double>(samples.size() - 1);
        double idx = std::ceil(t / h - 0.5); // round half down
        if (idx < 0.0) idx = 0.0;
        std::size_t i = static_cast<std::size_t>(idx);
        if (i >= samples.size()) i = samples.size() - 1;
        return samples[i];
    }
};

// Quantity-only price p_q(k) for k = 1..; beyond the list the last listed
// value applies.
struct QuantityPrice {
    std::vector<double> prices;

    double at(std::size_t k) const {
        if (k == 0 || prices.empty()) return 0.0;
        if (k > prices.size()) return prices.back();
        return prices[k - 1];
    }
};

// Full grid p(t, k): rows index a uniform time grid over [0, T], columns
// index the update count 1..K_max (clamped beyond).
struct TimeQuantityPrice {
    std::vector<std::vector<double>> grid; // grid[time_idx][count_idx]
    double horizon = 0.0;

    double at(double t, std::size_t k) const {
        if (grid.empty() || k == 0) return 0.0;
        std::size_t i = 0;
        if (grid.size() > 1) {
            const double h = horizon / static_cast<double>(grid.size() - 1);
            double idx = std::ceil(t / h - 0.5);
            if (idx < 0.0) idx = 0.0;
            i = static_cast<std::size_t>(idx);
            if (i >= grid.size()) i = grid.size() - 1;
        }
        const auto& row = grid[i];
        const std::size_t j = std::min(k, row.size()) - 1;
        return row[j];
    }
};

class PricingScheme {
public:
    using Variant = std::variant<TimeDependentPrice, QuantityPrice, TimeQuantityPrice>;

    static PricingScheme constant_price(double p) {
        check_price(p);
        return PricingScheme(TimeDependentPrice{p, {}, 0.0});
    }

    static PricingScheme time_dependent(std::vector<double> samples, double horizon) {
        if (samples.empty())
            throw std::invalid_argument("PricingScheme: empty time-dependent sample grid");
        for (double p : samples) check_price(p);
        if (!(horizon > 0.0)) throw std::invalid_argument("PricingScheme: horizon must be > 0");
        return PricingScheme(TimeDependentPrice{0.0, std::move(samples), horizon});
    }

    static PricingScheme quantity_based(std::vector<double> prices) {
        if (prices.empty())
            throw std::invalid_argument("PricingScheme: empty quantity price list");
        for (double p : prices) check_price(p);
        return PricingScheme(QuantityPrice{std::move(prices)});
    }

    static PricingScheme time_quantity(std::vector<std::vector<double>> grid, double horizon) {
        if (grid.empty() || grid.front().empty())
            throw std::invalid_argument("PricingScheme: empty time-quantity grid");
        const std::size_t cols = grid.front().size();
        for (const auto& row : grid) {
            if (row.size() != cols)
                throw std::invalid_argument("PricingScheme: ragged time-quantity grid");
            for (double p : row) check_price(p);
        }
        if (!(horizon > 0.0)) throw std::invalid_argument("PricingScheme: horizon must be > 0");
        return PricingScheme(TimeQuantityPrice{std::move(grid), horizon});
    }

    // p(t, k): price of the k-th update when requested at time t.
    double price(double t, std::size_t k) const {
        return std::visit(
            [&](const auto& v) -> double {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, TimeDependentPrice>) return v.at(t);
                else if constexpr (std::is_same_v<V, QuantityPrice>) return v.at(k);
                else return v.at(t, k);
            },
            variant_);
    }

    const Variant& variant() const { return variant_; }

private:
    static void check_price(double p) {
        if (!(p >= 0.0)) throw std::invalid_argument("PricingScheme: prices must be >= 0");
    }
    explicit PricingScheme(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

// Sentinel price strictly above any rational willingness to pay (total
// payment never exceeds F(T)). Stands in for an arbitrarily large
// off-equilibrium price while keeping arithmetic finite.
inline double sentinel_price(const MarketInstance& instance) {
    return 10.0 * cumulative_age_cost(instance.age_cost, instance.horizon);
}

// AoI at time t: t minus the most recent update instant no later than t.
inline double aoi_at(const UpdatePolicy& policy, double t, double horizon) {
    if (!(t >= 0.0) || !(t <= horizon)) throw std::domain_error("aoi_at: t outside [0, T]");
    double last = 0.0;
    for (double s : policy.times()) {
        if (s <= t) last = s;
        else break;
    }
    return t - last;
}

// Gamma(S) = sum of F(x_k) over the K+1 interarrival intervals.
inline double aggregate_aoi_cost(const MarketInstance& instance, const UpdatePolicy& policy) {
    double total = 0.0;
    for (double x : policy.intervals(instance.horizon))
        total += cumulative_age_cost(instance.age_cost, x);
    return total;
}

// P(S) = sum over k of p(S_k, k).
inline double payment(const PricingScheme& scheme, const UpdatePolicy& policy) {
    double total = 0.0;
    std::size_t k = 0;
    for (double s : policy.times()) total += scheme.price(s, ++k);
    return total;
}

struct OutcomeReport {
    UpdatePolicy policy;
    double payment = 0.0;
    double aggregate_aoi_cost = 0.0;
    double destination_cost = 0.0; // aggregate_aoi_cost + payment
    double profit = 0.0;           // payment - C(K)
    double social_cost = 0.0;      // aggregate_aoi_cost + C(K)
};

inline OutcomeReport evaluate_outcome(const MarketInstance& instance, const PricingScheme& scheme,
                                      const UpdatePolicy& policy) {
    OutcomeReport r;
    r.policy = policy;
    r.payment = payment(scheme, policy);
    r.aggregate_aoi_cost = aggregate_aoi_cost(instance, policy);
    r.destination_cost = r.aggregate_aoi_cost + r.payment;
    const double op = operational_cost(instance.op_cost, static_cast<double>(policy.count()));
    r.profit = r.payment - op;
    r.social_cost = r.aggregate_aoi_cost + op;
    return r;
}

// One-update viability: C(1) <= DF(T/2, T/2). When false the only equilibrium is
// the degenerate no-update one.
inline bool check_one_update_viability(const MarketInstance& instance) {
    const double half = instance.horizon / 2.0;
    return operational_cost(instance.op_cost, 1.0) <=
           differential_age_cost(instance.age_cost, half, half);
}

inline bool MarketInstance::viable() const { return check_one_update_viability(*this); }

} // namespace freshmarket
