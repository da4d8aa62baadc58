#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "destination_response.hpp"
#include "market_core.hpp"

namespace freshmarket {

// Stage-I optimum under time-only pricing: a constant price DF(T/2, T/2)
// with a single equilibrium update at T/2.
struct TimeDependentEquilibrium {
    bool degenerate = false; // one-update viability fails: no-update equilibrium
    double price = 0.0;      // DF(T/2, T/2)
    double update_time = 0.0;
    double profit = 0.0;
    PricingScheme scheme = PricingScheme::constant_price(0.0);
    UpdatePolicy policy;
};

inline TimeDependentEquilibrium solve_time_dependent(const MarketInstance& instance) {
    TimeDependentEquilibrium eq;
    if (!check_one_update_viability(instance)) {
        eq.degenerate = true;
        eq.price = sentinel_price(instance);
        eq.scheme = PricingScheme::constant_price(eq.price);
        return eq;
    }
    const double half = instance.horizon / 2.0;
    eq.price = differential_age_cost(instance.age_cost, half, half);
    eq.update_time = half;
    eq.profit = eq.price - operational_cost(instance.op_cost, 1.0);
    eq.scheme = PricingScheme::constant_price(eq.price);
    eq.policy = UpdatePolicy({half}, instance.horizon);
    return eq;
}

struct KUpdateValue {
    double value = 0.0;            // sum of DF terms minus C(k)
    std::vector<double> intervals; // the k+1 argmax intervals
};

namespace detail {

// splitmix64 finalizer; drives the deterministic multi-start seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace detail

// Best time-dependent revenue at a fixed update count: maximize
// sum_{j=1..k} DF(x_{j+1}, x_j) over positive intervals summing to T.
// Multi-start projected coordinate-descent local search (32 starts: the
// equal split plus deterministic simplex samples), shrinking step with
// tolerance 1e-8 T.
inline KUpdateValue time_dependent_k_update_value(const MarketInstance& instance, std::size_t k,
                                                  std::size_t starts = 32) {
    const double T = instance.horizon;
    KUpdateValue result;
    if (k == 0) {
        result.value = -operational_cost(instance.op_cost, 0.0);
        return result;
    }
    const std::size_t m = k + 1;
    const double op = operational_cost(instance.op_cost, static_cast<double>(k));

    auto objective = [&](const std::vector<double>& x) {
        double total = 0.0;
        for (std::size_t j = 0; j + 1 < m; ++j)
            total += differential_age_cost(instance.age_cost, x[j + 1], x[j]);
        return total - op;
    };

    const double floor_len = 1e-12 * T;
    const double step_tol = 1e-8 * T;

    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> best_x;

    for (std::size_t s = 0; s < starts; ++s) {
        std::vector<double> x(m, T / static_cast<double>(m));
        if (s > 0) {
            // Random simplex point via normalized exponential spacings.
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const std::uint64_t bits =
                    detail::mix64(0x5eedULL + 1315423911ULL * s + 2654435761ULL * (j + 1) +
                                  (static_cast<std::uint64_t>(k) << 32));
                x[j] = -std::log(1.0 - detail::unit_double(bits));
                sum += x[j];
            }
            for (double& v : x) v = std::max(v / sum * T, floor_len);
        }

        double value = objective(x);
        double step = T / 4.0;
        while (step > step_tol) {
            bool improved = false;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    if (i == j) continue;
                    if (x[j] - step <= floor_len) continue;
                    x[i] += step;
                    x[j] -= step;
                    const double cand = objective(x);
                    if (cand > value) {
                        value = cand;
                        improved = true;
                    } else {
                        x[i] -= step;
                        x[j] += step;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (value > best_value) {
            best_value = value;
            best_x = x;
        }
    }

    result.value = best_value;
    result.intervals = std::move(best_x);
    return result;
}

struct QuantityEquilibrium {
    bool degenerate = false;
    std::size_t k_star = 0;
    std::size_t k_hat = 0;
    bool k_hat_cap_hit = false; // marginal-revenue bracket not found below k_cap
    std::vector<double> prices; // p_q*(1..k_star); tail extends with the last entry
    UpdatePolicy policy;
    double profit = 0.0;
    double epsilon = 0.0;
};

// Marginal revenue in the update count: f(u) u - F(u) with u = T/(K+1).
inline double marginal_revenue(const MarketInstance& instance, double k) {
    const double u = instance.horizon / (k + 1.0);
    return age_cost(instance.age_cost, u) * u - cumulative_age_cost(instance.age_cost, u);
}

// (K+1) F(T/(K+1)) + C(K): the social-cost objective shared by the
// equilibrium count selection and the social optimum.
inline double equal_spaced_social_cost(const MarketInstance& instance, std::size_t k) {
    const double m = static_cast<double>(k + 1);
    return m * cumulative_age_cost(instance.age_cost, instance.horizon / m) +
           operational_cost(instance.op_cost, static_cast<double>(k));
}

// Full Stage-I quantity-based solution: threshold count, equilibrium count,
// and the optimal decreasing price schedule.
inline QuantityEquilibrium solve_quantity_based(const MarketInstance& instance,
                                                std::size_t k_cap = 10000,
                                                double epsilon_rel = 1e-9) {
    if (!(epsilon_rel > 0.0))
        throw std::invalid_argument("solve_quantity_based: epsilon_rel must be > 0");
    QuantityEquilibrium eq;
    const double f_t = cumulative_age_cost(instance.age_cost, instance.horizon);
    eq.epsilon = epsilon_rel * f_t;

    if (!check_one_update_viability(instance)) {
        eq.degenerate = true;
        eq.prices = {sentinel_price(instance)};
        return eq;
    }

    // Threshold count: marginal revenue is strictly decreasing in K and the
    // marginal cost is non-decreasing, so the first K where revenue drops
    // below cost brackets the unique threshold.
    std::size_t k_hat = 0;
    bool found = false;
    for (std::size_t k = 0; k <= k_cap; ++k) {
        const double mr = marginal_revenue(instance, static_cast<double>(k));
        const double mc = marginal_operational_cost(instance.op_cost, static_cast<double>(k));
        if (mr >= mc) {
            k_hat = k;
            found = true;
        } else {
            break;
        }
    }
    if (!found) {
        eq.degenerate = true;
        eq.prices = {sentinel_price(instance)};
        return eq;
    }
    eq.k_hat = k_hat;
    eq.k_hat_cap_hit = k_hat == k_cap;

    // Equilibrium count: two-point argmin, ties toward the smaller count.
    const double at_hat = equal_spaced_social_cost(instance, k_hat);
    const double at_next = equal_spaced_social_cost(instance, k_hat + 1);
    eq.k_star = at_next < at_hat ? k_hat + 1 : k_hat;

    // Price schedule: cumulative sums equal the no-update AoI saving at
    // k_star exactly, and exceed it by epsilon at every smaller count.
    auto saving = [&](std::size_t k) {
        const double m = static_cast<double>(k + 1);
        return f_t - m * cumulative_age_cost(instance.age_cost, instance.horizon / m);
    };
    if (eq.k_star == 0) {
        // Boundary tie at the viability threshold: keep the destination at
        // zero updates with the sentinel price.
        eq.prices = {sentinel_price(instance)};
        eq.profit = 0.0;
        return eq;
    }
    eq.prices.resize(eq.k_star);
    double cum = 0.0;
    for (std::size_t k = 1; k < eq.k_star; ++k) {
        eq.prices[k - 1] = saving(k) - cum + eq.epsilon;
        cum += eq.prices[k - 1];
    }
    // Closing price; also the value the schedule extends with beyond k_star.
    eq.prices[eq.k_star - 1] = saving(eq.k_star) - cum;

    eq.policy = UpdatePolicy::equal_spaced(eq.k_star, instance.horizon);
    eq.profit = saving(eq.k_star) - operational_cost(instance.op_cost,
                                                     static_cast<double>(eq.k_star));
    return eq;
}

struct EquilibriumCertification {
    std::size_t oracle_n = 0; // grid actually used (commensurate with k_star+1)
    std::size_t oracle_k = 0;
    double interval_spread = 0.0;
    double cost_delta = 0.0; // oracle cost minus Upsilon(k_star)
    double slack = 0.0;
    bool k_match = false;
    bool spread_ok = false;
    bool cost_ok = false;
    bool pass = false;
};

// Run the grid oracle against the quantity-based equilibrium. The grid is
// rounded up to the nearest multiple of k_star+1 so the equal-spaced
// equilibrium policy lies exactly on the grid; the equilibrium leaves the
// destination indifferent between 0 and k_star updates, and on an
// incommensurate grid that indifference cannot be reproduced at any finite
// resolution. The tie band 1e-10 F(T) covers accumulation noise only and
// stays well below the schedule's epsilon.
inline EquilibriumCertification certify_quantity_equilibrium(const MarketInstance& instance,
                                                             const QuantityEquilibrium& eq,
                                                             std::size_t n,
                                                             std::size_t k_cap = 32) {
    const double T = instance.horizon;
    EquilibriumCertification cert;
    const std::size_t m = eq.k_star + 1;
    cert.oracle_n = ((n + m - 1) / m) * m;
    const double f_t = cumulative_age_cost(instance.age_cost, T);
    const double tie_band = 1e-10 * std::max(f_t, 1.0);
    cert.slack = 5.0 * age_cost(instance.age_cost, T) * T / static_cast<double>(cert.oracle_n);

    const auto oracle = grid_best_response(instance, PricingScheme::quantity_based(eq.prices),
                                           cert.oracle_n, k_cap, tie_band);
    cert.oracle_k = oracle.policy.count();
    const auto xs = oracle.policy.intervals(T);
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    cert.interval_spread = *hi - *lo;
    cert.cost_delta = oracle.overall_cost - upsilon(instance, eq.prices, eq.k_star);

    cert.k_match = cert.oracle_k == eq.k_star;
    cert.spread_ok =
        cert.interval_spread <= 2.0 * T / static_cast<double>(cert.oracle_n) + 1e-12;
    cert.cost_ok = std::abs(cert.cost_delta) <= cert.slack;
    cert.pass = cert.k_match && cert.spread_ok && cert.cost_ok;
    return cert;
}

struct SocialOptimum {
    std::size_t k = 0;
    UpdatePolicy policy;
    double social_cost = 0.0;
};

// Exhaustive scan of (K+1) F(T/(K+1)) + C(K); equal spacing is optimal for
// every fixed count by convexity.
inline SocialOptimum social_optimum(const MarketInstance& instance, std::size_t k_cap = 10000) {
    SocialOptimum best;
    best.social_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= k_cap; ++k) {
        const double cost = equal_spaced_social_cost(instance, k);
        if (cost < best.social_cost) {
            best.social_cost = cost;
            best.k = k;
        }
    }
    best.policy = UpdatePolicy::equal_spaced(best.k, instance.horizon);
    return best;
}

// Max over counts of F(T) - (K+1) F(T/(K+1)) - C(K): the profit ceiling
// over every p(t, k) scheme, attained by the quantity-based optimum.
inline double profit_upper_bound(const MarketInstance& instance, std::size_t k_cap = 10000) {
    if (!check_one_update_viability(instance)) return 0.0;
    const double f_t = cumulative_age_cost(instance.age_cost, instance.horizon);
    double best = 0.0;
    for (std::size_t k = 0; k <= k_cap; ++k) {
        const double m = static_cast<double>(k + 1);
        const double value = f_t - m * cumulative_age_cost(instance.age_cost, instance.horizon / m) -
                             operational_cost(instance.op_cost, static_cast<double>(k));
        best = std::max(best, value);
    }
    return best;
}

struct ProfitComparison {
    double pi_t = 0.0;
    double pi_q = 0.0;
    double ratio = 1.0; // pi_q / pi_t
};

// Both profits plus their ratio; enforces the sandwich pi_t <= pi_q < 2 pi_t.
inline ProfitComparison compare_profits(const MarketInstance& instance,
                                        std::size_t k_cap = 10000) {
    ProfitComparison c;
    const auto td = solve_time_dependent(instance);
    const auto qb = solve_quantity_based(instance, k_cap);
    c.pi_t = td.degenerate ? 0.0 : td.profit;
    c.pi_q = qb.degenerate ? 0.0 : qb.profit;
    if (c.pi_t == 0.0 && c.pi_q > 0.0)
        throw std::runtime_error("compare_profits: profit bound violated (pi_t = 0, pi_q > 0)");
    c.ratio = c.pi_t > 0.0 ? c.pi_q / c.pi_t : 1.0;
    return c;
}

} // namespace freshmarket
