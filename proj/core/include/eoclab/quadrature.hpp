#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace eoclab {

struct QuadratureConfig {
    int order = 200;         // Gauss-Hermite node count
    bool kink_split = true;  // split integrals at integrand kinks
};

struct McConfig {
    std::int64_t samples = 1000000;
    std::uint64_t seed = 0;
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

using RealFn = std::function<double(double)>;

// E[g(scale * Z)], Z ~ N(0,1). `kinks` are non-smooth points of g in its own
// argument; with cfg.kink_split they trigger piecewise Gauss-Legendre against
// the Gaussian density, truncated at |z| = 12. Plain Gauss-Hermite otherwise
// (exact for polynomials of degree < 2 * order).
double expect1(const RealFn& g, double scale, const QuadratureConfig& cfg = {},
               std::span<const double> kinks = {});

// E[g(sqrt(qa) Z1) * h(sqrt(qb) (c Z1 + sqrt(1-c^2) Z2))]. |c| within 1e-12 of
// 1 collapses to the one-dimensional integral of the product.
double expect2(const RealFn& g, const RealFn& h, double qa, double qb, double c,
               const QuadratureConfig& cfg = {}, std::span<const double> kinks_g = {},
               std::span<const double> kinks_h = {});

// Monte-Carlo counterpart of expect2 (oracle): unbiased sample mean and
// standard error, deterministic for a fixed seed.
McEstimate mc_expect2(const RealFn& g, const RealFn& h, double qa, double qb, double c,
                      const McConfig& cfg);

// Cached quadrature rules (thread-safe).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Probabilists' Gauss-Hermite rule of the given order; weights sum to 1.
const GaussRule& gauss_hermite(int order);

// Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre(int order);

}  // namespace eoclab
