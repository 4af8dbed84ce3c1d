#include "eoclab/closedform.hpp"

#include <cmath>
#include <stdexcept>

namespace eoclab {

namespace {

constexpr double kPi = 3.14159265358979323846264338;
constexpr double kInvSqrt2 = 0.70710678118654752440084436;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994606;

// leading Taylor coefficient of f(x) - x at 1: 2 sqrt(2) / (3 pi)
constexpr double kGapCoeff = 0.30010543871903536;

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double relu_corr(double x) {
    if (std::abs(x) > 1.0) throw std::domain_error("relu_corr: |x| must be <= 1");
    return (x * std::asin(x) + std::sqrt((1.0 - x) * (1.0 + x))) / kPi + 0.5 * x;
}

double relu_corr_prime(double x) {
    if (std::abs(x) > 1.0) throw std::domain_error("relu_corr_prime: |x| must be <= 1");
    return std::asin(x) / kPi + 0.5;
}

double relu_corr_second(double x) {
    if (std::abs(x) >= 1.0) throw std::domain_error("relu_corr_second: |x| must be < 1");
    return 1.0 / (kPi * std::sqrt((1.0 - x) * (1.0 + x)));
}

double relu_gap_taylor(double x) {
    const double g = 1.0 - x;
    return kGapCoeff * g * std::sqrt(g);
}

double relu_rate_constant() { return 4.5 * kPi * kPi; }

std::vector<double> relu_gap_sequence(double c0, int depth) {
    if (depth < 1) throw std::domain_error("relu_gap_sequence: depth must be >= 1");
    std::vector<double> gaps;
    gaps.reserve(depth);
    double gap = 1.0 - c0;
    gaps.push_back(gap);
    for (int l = 1; l < depth; ++l) {
        if (gap > 1e-6) {
            const double c = 1.0 - gap;
            gap -= relu_corr(c) - c;
        } else {
            // f(c) - c by its leading Taylor term: no cancellation, relative
            // error O(gap)
            gap -= kGapCoeff * gap * std::sqrt(gap);
        }
        gaps.push_back(gap);
    }
    return gaps;
}

HardTanhVariance hardtanh_variance_map(double x, const MeanFieldParams& p) {
    if (!(x > 0.0)) throw std::domain_error("hardtanh_variance_map: x must be > 0");
    HardTanhVariance out;
    const double sx = std::sqrt(x);
    out.displayed = p.sigma_b2 +
                p.sigma_w2 * (1.0 - (2.0 / sx) * std::exp(-1.0 / x) * kInvSqrt2Pi);
    const double c = 1.0 / sx;
    const double e =
        x * (2.0 * normal_cdf(c) - 1.0) - 2.0 * sx * normal_pdf(c) + 2.0 * (1.0 - normal_cdf(c));
    out.exact = p.sigma_b2 + p.sigma_w2 * e;
    return out;
}

double hardtanh_f_second(double x, double q, double sigma_w2) {
    if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("hardtanh_f_second: x must be in [0, 1)");
    if (!(q > 0.0)) throw std::domain_error("hardtanh_f_second: q must be > 0");
    const double a2 = 1.0 / q;
    return sigma_w2 / (kPi * std::sqrt((1.0 - x) * (1.0 + x))) *
           (std::exp(-a2 / (1.0 + x)) - std::exp(-a2 / (1.0 - x)));
}

}  // namespace eoclab
