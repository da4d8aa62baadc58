#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "quadrature.hpp"

namespace freshmarket {

// Instantaneous age-cost f(delta) = delta^kappa, kappa >= 1.
struct PowerLawAgeCost {
    double kappa = 1.0;
};

// Tabulated age cost: piecewise-linear interpolation over a strictly
// increasing grid starting at 0. Values must be non-negative,
// non-decreasing, and discretely convex.
struct SampledAgeCost {
    std::vector<double> grid;
    std::vector<double> values;
};

class AgeCostModel {
public:
    using Variant = std::variant<PowerLawAgeCost, SampledAgeCost>;

    static AgeCostModel power_law(double kappa) {
        if (!(kappa >= 1.0)) throw std::invalid_argument("AgeCostModel: kappa must be >= 1");
        return AgeCostModel(PowerLawAgeCost{kappa});
    }

    static AgeCostModel linear() { return power_law(1.0); }

    static AgeCostModel sampled(std::vector<double> grid, std::vector<double> values) {
        if (grid.size() < 2 || grid.size() != values.size())
            throw std::invalid_argument("AgeCostModel: sampled grid needs >= 2 matching points");
        if (grid.front() != 0.0)
            throw std::invalid_argument("AgeCostModel: sampled grid must start at 0");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw std::invalid_argument("AgeCostModel: sampled grid must be strictly increasing");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] >= 0.0))
                throw std::invalid_argument("AgeCostModel: sampled values must be non-negative");
            if (i > 0 && values[i] < values[i - 1])
                throw std::invalid_argument("AgeCostModel: sampled values must be non-decreasing");
        }
        // Discrete convexity: chord slopes must be non-decreasing.
        double prev_slope = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double slope = (values[i] - values[i - 1]) / (grid[i] - grid[i - 1]);
            if (slope < prev_slope - 1e-12 * std::max(1.0, std::abs(prev_slope)))
                throw std::invalid_argument("AgeCostModel: sampled values must be convex");
            prev_slope = slope;
        }
        return AgeCostModel(SampledAgeCost{std::move(grid), std::move(values)});
    }

    const Variant& variant() const { return variant_; }

    bool is_power_law() const { return std::holds_alternative<PowerLawAgeCost>(variant_); }

    double power_law_kappa() const { return std::get<PowerLawAgeCost>(variant_).kappa; }

private:
    explicit AgeCostModel(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

// f(delta)
inline double age_cost(const AgeCostModel& model, double delta) {
    if (!(delta >= 0.0)) throw std::domain_error("age_cost: delta must be >= 0");
    if (model.is_power_law()) {
        return std::pow(delta, model.power_law_kappa());
    }
    const auto& s = std::get<SampledAgeCost>(model.variant());
    if (delta > s.grid.back())
        throw std::domain_error("age_cost: delta beyond sampled grid range");
    auto it = std::lower_bound(s.grid.begin(), s.grid.end(), delta);
    const std::size_t hi = static_cast<std::size_t>(it - s.grid.begin());
    if (hi == 0 || s.grid[hi] == delta) return s.values[hi == 0 ? 0 : hi];
    const std::size_t lo = hi - 1;
    const double w = (delta - s.grid[lo]) / (s.grid[hi] - s.grid[lo]);
    return s.values[lo] + w * (s.values[hi] - s.values[lo]);
}

// F(x) = integral of f over [0, x]
inline double cumulative_age_cost(const AgeCostModel& model, double x) {
    if (!(x >= 0.0)) throw std::domain_error("cumulative_age_cost: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (model.is_power_law()) {
        const double k = model.power_law_kappa();
        return std::pow(x, k + 1.0) / (k + 1.0);
    }
    return integrate([&](double t) { return age_cost(model, t); }, 0.0, x);
}

// DF(x, y) = integral of f(t + y) - f(t) over [0, x].
// Computed via the identity F(x+y) - F(y) - F(x) so the telescoping
// relations used by the equilibrium checks hold exactly.
inline double differential_age_cost(const AgeCostModel& model, double x, double y) {
    if (!(x >= 0.0) || !(y >= 0.0))
        throw std::domain_error("differential_age_cost: arguments must be >= 0");
    return cumulative_age_cost(model, x + y) - cumulative_age_cost(model, y) -
           cumulative_age_cost(model, x);
}

struct MonomialOperationalCost {
    double c = 0.0; // coefficient, >= 0
    int d = 1;      // degree, >= 1
};

// C(k) = sum_i coeffs[i] * k^(i+1); constant term forced to zero.
struct PolynomialOperationalCost {
    std::vector<double> coeffs; // coeffs[i] multiplies k^(i+1)
};

class OperationalCostModel {
public:
    using Variant = std::variant<MonomialOperationalCost, PolynomialOperationalCost>;

    static OperationalCostModel monomial(double c, int d) {
        if (!(c >= 0.0)) throw std::invalid_argument("OperationalCostModel: c must be >= 0");
        if (d < 1) throw std::invalid_argument("OperationalCostModel: degree must be >= 1");
        return OperationalCostModel(MonomialOperationalCost{c, d});
    }

    static OperationalCostModel polynomial(std::vector<double> coeffs) {
        if (coeffs.empty())
            throw std::invalid_argument("OperationalCostModel: empty coefficient list");
        for (double c : coeffs)
            if (!(c >= 0.0))
                throw std::invalid_argument("OperationalCostModel: coefficients must be >= 0");
        return OperationalCostModel(PolynomialOperationalCost{std::move(coeffs)});
    }

    const Variant& variant() const { return variant_; }

private:
    explicit OperationalCostModel(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

// C(k); continuous extension evaluated at real k.
inline double operational_cost(const OperationalCostModel& model, double k) {
    if (!(k >= 0.0)) throw std::domain_error("operational_cost: k must be >= 0");
    if (const auto* m = std::get_if<MonomialOperationalCost>(&model.variant())) {
        return m->c * std::pow(k, static_cast<double>(m->d));
    }
    const auto& p = std::get<PolynomialOperationalCost>(model.variant());
    double total = 0.0;
    double pk = k;
    for (double c : p.coeffs) {
        total += c * pk;
        pk *= k;
    }
    return total;
}

// C'(k) of the continuous extension.
inline double marginal_operational_cost(const OperationalCostModel& model, double k) {
    if (!(k >= 0.0)) throw std::domain_error("marginal_operational_cost: k must be >= 0");
    if (const auto* m = std::get_if<MonomialOperationalCost>(&model.variant())) {
        if (m->d == 1) return m->c;
        return m->c * m->d * std::pow(k, static_cast<double>(m->d - 1));
    }
    const auto& p = std::get<PolynomialOperationalCost>(model.variant());
    double total = 0.0;
    double pk = 1.0;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        total += p.coeffs[i] * static_cast<double>(i + 1) * pk;
        pk *= k;
    }
    return total;
}

} // namespace freshmarket
