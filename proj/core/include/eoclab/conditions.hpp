#pragma once

#include <span>
#include <string>
#include <vector>

#include "eoclab/eoc.hpp"
#include "eoclab/meanfield.hpp"

namespace eoclab {

// Numerical verification of the sufficient conditions for a non-degenerate
// EOC with correlation map close to the identity:
//   (i)   phi(0) = 0, one-sided derivatives at 0 (not both zero), |phi(x)/x| bounded
//   (ii)  an EOC point exists for every sigma_b on the grid
//   (iii) F non-decreasing on [0, 2q]; q decreases to 0 as sigma_b decreases
//   (iv)  the correlation map is convex (f'' >= -1e-6 on [0, 0.99])
// Every pass/fail is backed by the stored numeric evidence.
struct ConditionReport {
    std::string activation_id;

    bool cond_i = false;
    double growth_bound_k = 0.0;

    struct EocEntry {
        double sigma_b;
        EocStatus status;
    };
    std::vector<EocEntry> cond_ii;
    bool cond_ii_ok = false;

    bool cond_iii_monotone = false;
    double min_variance_slope = 0.0;
    struct QEntry {
        double sigma_b;
        double q;
    };
    std::vector<QEntry> cond_iii_qlimit;
    bool cond_iii_qlimit_ok = false;

    bool cond_iv_convex = false;
    double min_correlation_second = 0.0;

    struct DevEntry {
        double sigma_b;
        double sup_dev;
        double bound;  // sigma_b^2 / q
    };
    std::vector<DevEntry> sup_dev;

    double convexity_tolerance = -1e-6;
    double convexity_x_max = 0.99;

    bool all_pass() const {
        return cond_i && cond_ii_ok && cond_iii_monotone && cond_iii_qlimit_ok && cond_iv_convex;
    }
};

ConditionReport check_conditions(const Activation& phi, std::span<const double> sigma_b_grid,
                                 int x_grid_size = 101, const QuadratureConfig& cfg = {});

struct SupDeviation {
    double sup_dev = 0.0;  // max over the grid of |f(x) - x|
    double bound = 0.0;    // sigma_b^2 / q (tight only for odd activations)
};

SupDeviation sup_deviation(const Activation& phi, const EocPoint& point, int x_grid_size = 101,
                           const QuadratureConfig& cfg = {});

// Least-squares slope of log E[phi'(xZ)^2] against log x over [x_lo, x_hi];
// returns -slope/2, the empirical tail exponent beta.
double tail_exponent(const Activation& phi, double x_lo, double x_hi, int points = 25,
                     const QuadratureConfig& cfg = {});

}  // namespace eoclab
