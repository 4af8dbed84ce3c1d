#include "eoclab/conditions.hpp"

#include <cmath>
#include <limits>

#include "eoclab/errors.hpp"

namespace eoclab {

ConditionReport check_conditions(const Activation& phi, std::span<const double> sigma_b_grid,
                                 int x_grid_size, const QuadratureConfig& cfg) {
    if (sigma_b_grid.empty()) throw ConfigError("check_conditions: empty sigma_b grid");
    for (std::size_t i = 1; i < sigma_b_grid.size(); ++i) {
        if (sigma_b_grid[i] <= sigma_b_grid[i - 1]) {
            throw ConfigError("check_conditions: sigma_b grid must be ascending");
        }
    }
    if (x_grid_size < 2) throw ConfigError("check_conditions: x_grid_size must be >= 2");

    ConditionReport rep;
    rep.activation_id = phi.id;

    // (i) phi(0) = 0, one-sided slopes at 0 not both zero, |phi(x)/x| bounded
    // (bounded = the grid sup stops growing when the domain doubles)
    const bool zero_ok = std::abs(phi.value(0.0)) < 1e-12;
    const bool slope_ok = phi.d1_at_zero_right != 0.0 || phi.d1_at_zero_left != 0.0;
    const double k_half = growth_bound(phi, 50.0);
    const double k_full = growth_bound(phi, 100.0);
    rep.growth_bound_k = k_full;
    rep.cond_i = zero_ok && slope_ok && std::isfinite(k_full) && k_full <= k_half * 1.01 + 1e-9;

    // (ii) an EOC point per grid value
    std::vector<EocPoint> points;
    points.reserve(sigma_b_grid.size());
    rep.cond_ii_ok = true;
    for (double sb : sigma_b_grid) {
        points.push_back(eoc_solve(sb, phi, cfg));
        rep.cond_ii.push_back({sb, points.back().status});
        if (points.back().status == EocStatus::not_found) rep.cond_ii_ok = false;
    }

    // (iii) F non-decreasing on [0, 2q] and q -> 0 with sigma_b
    rep.cond_iii_monotone = true;
    rep.min_variance_slope = std::numeric_limits<double>::infinity();
    for (const EocPoint& pt : points) {
        if (pt.status == EocStatus::not_found) continue;
        const MeanFieldParams p{pt.sigma_b * pt.sigma_b, pt.sigma_w * pt.sigma_w};
        const double hi = 2.0 * std::max(pt.q, 1e-6);
        for (int j = 1; j < x_grid_size; ++j) {
            const double x = hi * j / (x_grid_size - 1);
            const double slope = variance_map_derivative(x, p, phi, cfg);
            rep.min_variance_slope = std::min(rep.min_variance_slope, slope);
        }
        rep.cond_iii_qlimit.push_back({pt.sigma_b, pt.q});
    }
    rep.cond_iii_monotone = rep.min_variance_slope >= -1e-8;
    rep.cond_iii_qlimit_ok = !rep.cond_iii_qlimit.empty();
    for (std::size_t i = 1; i < rep.cond_iii_qlimit.size(); ++i) {
        if (rep.cond_iii_qlimit[i].q <= rep.cond_iii_qlimit[i - 1].q) {
            rep.cond_iii_qlimit_ok = false;  // must increase with sigma_b
        }
    }
    if (!rep.cond_iii_qlimit.empty()) {
        // proxy for lim q = 0: q at the smallest sigma_b below 5 sigma_b
        // (q scales linearly in sigma_b near 0 for the activations here)
        const auto& first = rep.cond_iii_qlimit.front();
        if (!(first.q < 5.0 * first.sigma_b)) rep.cond_iii_qlimit_ok = false;
    }

    // (iv) convexity of f on [0, 0.99]
    rep.min_correlation_second = std::numeric_limits<double>::infinity();
    for (const EocPoint& pt : points) {
        if (pt.status == EocStatus::not_found || !(pt.q > 0.0)) continue;
        const MeanFieldParams p{pt.sigma_b * pt.sigma_b, pt.sigma_w * pt.sigma_w};
        for (int j = 0; j < x_grid_size; ++j) {
            const double x = rep.convexity_x_max * j / (x_grid_size - 1);
            const double f2 = correlation_map_second(x, pt.q, p, phi, cfg).value;
            rep.min_correlation_second = std::min(rep.min_correlation_second, f2);
        }
    }
    rep.cond_iv_convex = rep.min_correlation_second >= rep.convexity_tolerance;

    for (const EocPoint& pt : points) {
        if (pt.status == EocStatus::not_found || !(pt.q > 0.0)) continue;
        const SupDeviation d = sup_deviation(phi, pt, x_grid_size, cfg);
        rep.sup_dev.push_back({pt.sigma_b, d.sup_dev, d.bound});
    }
    return rep;
}

SupDeviation sup_deviation(const Activation& phi, const EocPoint& point, int x_grid_size,
                           const QuadratureConfig& cfg) {
    if (point.status == EocStatus::not_found) {
        throw std::domain_error("sup_deviation: EOC point not found");
    }
    if (!(point.q > 0.0)) throw std::domain_error("sup_deviation: q must be > 0");
    const MeanFieldParams p{point.sigma_b * point.sigma_b, point.sigma_w * point.sigma_w};
    double sup = 0.0;
    for (int j = 0; j < x_grid_size; ++j) {
        const double x = static_cast<double>(j) / (x_grid_size - 1);
        sup = std::max(sup, std::abs(correlation_map(x, point.q, p, phi, cfg) - x));
    }
    return {sup, point.sigma_b * point.sigma_b / point.q};
}

double tail_exponent(const Activation& phi, double x_lo, double x_hi, int points,
                     const QuadratureConfig& cfg) {
    if (!(x_lo > 1.0) || !(x_hi <= 1e3) || !(x_hi > x_lo)) {
        throw std::domain_error("tail_exponent: range must satisfy 1 < x_lo < x_hi <= 1e3");
    }
    if (points < 2) throw ConfigError("tail_exponent: needs at least 2 points");
    // split points resolving mass concentrated near the origin at large scale
    std::vector<double> split = phi.kinks;
    for (double t : {-10.0, -1.0, 1.0, 10.0}) split.push_back(t);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (int i = 0; i < points; ++i) {
        const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (points - 1));
        const double e = expect1([&](double t) { return phi.d1(t) * phi.d1(t); }, x, cfg, split);
        if (!(e > 1e-280)) continue;  // underflow: truncate the range
        const double lx = std::log(x), ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw NumericError("tail_exponent: expectation underflowed over the whole range");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -0.5 * slope;
}

}  // namespace eoclab
