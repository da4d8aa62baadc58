#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "market_core.hpp"

namespace freshmarket {

struct GridOracleParams {
    std::size_t grid_points = 0;
    std::size_t max_count = 0;
};

enum class OptimizerKind { Analytic, GridOracle };

struct BestResponse {
    UpdatePolicy policy;
    double overall_cost = 0.0; // aggregate AoI cost + payment
    OptimizerKind optimizer_kind = OptimizerKind::Analytic;
    GridOracleParams oracle; // populated for GridOracle results
    bool cap_hit = false;    // the count cap was binding
};

inline std::size_t default_oracle_k_cap(std::size_t n) {
    const std::size_t scaled = (2 * n + 9) / 10;
    return std::max<std::size_t>(32, scaled);
}

// Upsilon(k, p_q): the destination's overall cost with k equal-spaced
// updates, (k+1) F(T/(k+1)) + sum of the first k quantity prices.
inline double upsilon(const MarketInstance& instance, const QuantityPrice& prices,
                      std::size_t k) {
    const double m = static_cast<double>(k + 1);
    double total = m * cumulative_age_cost(instance.age_cost, instance.horizon / m);
    for (std::size_t j = 1; j <= k; ++j) total += prices.at(j);
    return total;
}

inline double upsilon(const MarketInstance& instance, const std::vector<double>& prices,
                      std::size_t k) {
    return upsilon(instance, QuantityPrice{prices}, k);
}

// Stage-II best response under quantity-based pricing: equal-spaced updates
// with the count minimizing Upsilon. Exact ties (within a ~1e-12 relative
// band, far below the equilibrium epsilon) are resolved in the source's
// favor: highest payment first, then fewest updates.
inline BestResponse quantity_best_response(const MarketInstance& instance,
                                           const QuantityPrice& prices,
                                           std::size_t k_cap = 10000) {
    const double f_t = cumulative_age_cost(instance.age_cost, instance.horizon);
    const double tie_tol = 1e-12 * std::max(f_t, 1.0);

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> curve;
    curve.reserve(k_cap + 1);
    double cum_price = 0.0;
    std::vector<double> cum_prices;
    cum_prices.reserve(k_cap + 1);
    for (std::size_t k = 0; k <= k_cap; ++k) {
        if (k > 0) cum_price += prices.at(k);
        cum_prices.push_back(cum_price);
        const double m = static_cast<double>(k + 1);
        const double u = m * cumulative_age_cost(instance.age_cost, instance.horizon / m) + cum_price;
        curve.push_back(u);
        best = std::min(best, u);
    }

    std::size_t k_star = 0;
    double best_payment = -1.0;
    for (std::size_t k = 0; k <= k_cap; ++k) {
        if (curve[k] <= best + tie_tol && cum_prices[k] > best_payment + tie_tol) {
            k_star = k;
            best_payment = cum_prices[k];
        }
    }

    BestResponse r;
    r.policy = UpdatePolicy::equal_spaced(k_star, instance.horizon);
    r.overall_cost = curve[k_star];
    r.optimizer_kind = OptimizerKind::Analytic;
    // Upsilon still strictly decreasing at the cap: prices decay too fast
    // for the response to be bounded by k_cap.
    r.cap_hit = k_cap > 0 && curve[k_cap] < curve[k_cap - 1] - tie_tol && k_star == k_cap;
    return r;
}

inline BestResponse quantity_best_response(const MarketInstance& instance,
                                           const std::vector<double>& prices,
                                           std::size_t k_cap = 10000) {
    return quantity_best_response(instance, QuantityPrice{prices}, k_cap);
}

// Exhaustive discretized Stage-II oracle: update times restricted to the
// uniform grid {i T / n}, at most k_cap updates, solved by dynamic
// programming over (last update index, count). Exact cost ties break
// toward fewer updates, then earlier times. When source_tie_tol > 0,
// counts whose best cost lies within that tolerance of the optimum are
// additionally resolved in the source's favor (highest payment).
inline BestResponse grid_best_response(const MarketInstance& instance, const PricingScheme& scheme,
                                       std::size_t n, std::size_t k_cap,
                                       double source_tie_tol = 0.0) {
    if (n < 2) throw std::invalid_argument("grid_best_response: n must be >= 2");
    const double T = instance.horizon;
    const double h = T / static_cast<double>(n);

    // F(length) for every possible grid gap, shared across DP cells.
    std::vector<double> gap_cost(n + 1);
    for (std::size_t g = 0; g <= n; ++g)
        gap_cost[g] = cumulative_age_cost(instance.age_cost, static_cast<double>(g) * h);

    const std::size_t max_updates = std::min(k_cap, n > 1 ? n - 1 : 0);
    const double inf = std::numeric_limits<double>::infinity();

    // best[j] = minimal accrued cost with the current count's last update at
    // grid index j (1..n-1); accrued = interval AoI costs so far + payments.
    std::vector<std::vector<double>> best(max_updates + 1,
                                          std::vector<double>(n, inf));
    std::vector<std::vector<std::size_t>> parent(max_updates + 1,
                                                 std::vector<std::size_t>(n, 0));

    // Per-count completed cost (with the tail interval) and its best index.
    std::vector<double> total_by_count(max_updates + 1, inf);
    std::vector<std::size_t> final_idx(max_updates + 1, 0);
    total_by_count[0] = gap_cost[n];

    for (std::size_t k = 1; k <= max_updates; ++k) {
        for (std::size_t j = k; j < n; ++j) {
            const double price = scheme.price(static_cast<double>(j) * h, k);
            double cell = inf;
            std::size_t arg = 0;
            if (k == 1) {
                cell = gap_cost[j] + price;
            } else {
                for (std::size_t i = k - 1; i < j; ++i) {
                    const double cand = best[k - 1][i] + gap_cost[j - i];
                    if (cand < cell) {
                        cell = cand;
                        arg = i;
                    }
                }
                cell += price;
            }
            best[k][j] = cell;
            parent[k][j] = arg;
            const double done = cell + gap_cost[n - j];
            if (done < total_by_count[k]) {
                total_by_count[k] = done;
                final_idx[k] = j;
            }
        }
    }

    // Pick the count: global optimum, exact ties toward fewer updates.
    std::size_t k_best = 0;
    for (std::size_t k = 1; k <= max_updates; ++k)
        if (total_by_count[k] < total_by_count[k_best]) k_best = k;

    if (source_tie_tol > 0.0) {
        auto payment_of = [&](std::size_t k) {
            double pay = 0.0;
            std::size_t j = final_idx[k];
            std::vector<std::size_t> idx(k);
            for (std::size_t q = k; q >= 1; --q) {
                idx[q - 1] = j;
                j = parent[q][j];
            }
            for (std::size_t q = 1; q <= k; ++q)
                pay += scheme.price(static_cast<double>(idx[q - 1]) * h, q);
            return pay;
        };
        double best_pay = payment_of(k_best);
        for (std::size_t k = 0; k <= max_updates; ++k) {
            if (k == k_best) continue;
            if (total_by_count[k] <= total_by_count[k_best] + source_tie_tol) {
                const double pay = payment_of(k);
                if (pay > best_pay + source_tie_tol) {
                    k_best = k;
                    best_pay = pay;
                }
            }
        }
    }

    std::vector<double> times(k_best);
    std::size_t j = final_idx[k_best];
    for (std::size_t q = k_best; q >= 1; --q) {
        times[q - 1] = static_cast<double>(j) * h;
        j = parent[q][j];
    }

    BestResponse r;
    r.policy = UpdatePolicy(std::move(times), T);
    r.overall_cost = total_by_count[k_best];
    r.optimizer_kind = OptimizerKind::GridOracle;
    r.oracle = GridOracleParams{n, k_cap};
    r.cap_hit = k_best == max_updates && max_updates > 0 &&
                total_by_count[max_updates] < total_by_count[max_updates - 1];
    return r;
}

inline BestResponse grid_best_response(const MarketInstance& instance, const PricingScheme& scheme,
                                       std::size_t n) {
    return grid_best_response(instance, scheme, n, default_oracle_k_cap(n));
}

} // namespace freshmarket
