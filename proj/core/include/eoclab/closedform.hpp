#pragma once

#include <vector>

#include "eoclab/meanfield.hpp"

namespace eoclab {

double normal_pdf(double x);
double normal_cdf(double x);

// Correlation map of a ReLU network at (sigma_b^2, sigma_w^2) = (0, 2):
// f(x) = (x asin(x) + sqrt(1-x^2)) / pi + x / 2, |x| <= 1.
double relu_corr(double x);

// f'(x) = asin(x)/pi + 1/2.
double relu_corr_prime(double x);

// f''(x) = 1 / (pi sqrt(1-x^2)), |x| < 1.
double relu_corr_second(double x);

// Leading term of f(x) - x near 1: (2 sqrt(2) / 3 pi) (1-x)^{3/2}.
double relu_gap_taylor(double x);

// 9 pi^2 / 2, the constant in l^2 (1 - c^l) -> 9 pi^2 / 2.
double relu_rate_constant();

// Gaps 1 - c^l, l = 1..depth, iterating c <- relu_corr(c) from c^1 = c0.
// Switches to the Taylor form of the gap once 1 - c < 1e-6 so the decay stays
// accurate to l = 1e5 and beyond.
std::vector<double> relu_gap_sequence(double c0, int depth);

struct HardTanhVariance {
    double displayed = 0.0;  // the displayed map sigma_b^2 + sigma_w^2 (1 - (2/sqrt(x)) e^{-1/x} / sqrt(2 pi))
    double exact = 0.0;  // direct piecewise-Gaussian integration of E[HT(sqrt(x) Z)^2]
};

// Both closed forms for the Hard-Tanh variance map at x > 0; they disagree
// away from x ~ 1 and `exact` is the one validated against quadrature.
HardTanhVariance hardtanh_variance_map(double x, const MeanFieldParams& p);

// f''(x) = sigma_w^2 / (pi sqrt(1-x^2)) (e^{-1/(q(1+x))} - e^{-1/(q(1-x))}),
// x in [0, 1), q > 0.
double hardtanh_f_second(double x, double q, double sigma_w2);

}  // namespace eoclab
