#pragma once

#include <vector>

#include "eoclab/activation.hpp"
#include "eoclab/quadrature.hpp"

namespace eoclab {

// Bias variance sigma_b^2 and weight variance sigma_w^2.
struct MeanFieldParams {
    double sigma_b2 = 0.0;
    double sigma_w2 = 1.0;
};

// Per-layer variances of two inputs and their correlation.
struct KernelState {
    int layer = 1;
    double q_a = 0.0;
    double q_b = 0.0;
    double c_ab = 0.0;
};

// chi1 = slope of the correlation map at 1, alpha = slope of the variance map
// at its fixed point. eps = -1/log(rate); +inf within 1e-9 of criticality,
// negative in the chaotic phase (escape scale).
struct DepthScales {
    double chi1 = 0.0;
    double alpha = 0.0;
    double eps_c = 0.0;
    double eps_q = 0.0;
};

enum class FixedPointStatus { converged, diverged, max_iters };

struct FixedPointResult {
    double q = 0.0;
    int iters = 0;
    FixedPointStatus status = FixedPointStatus::converged;
};

// Variance map F(x) = sigma_b^2 + sigma_w^2 E[phi(sqrt(x) Z)^2], x >= 0.
double variance_map(double x, const MeanFieldParams& p, const Activation& phi,
                    const QuadratureConfig& cfg = {});

// F'(x) via the Z-form sigma_w^2 E[Z phi'(sqrt(x) Z) phi(sqrt(x) Z)] / sqrt(x),
// well-defined for kinked activations too. x > 0.
double variance_map_derivative(double x, const MeanFieldParams& p, const Activation& phi,
                               const QuadratureConfig& cfg = {});

// Picard iteration x <- F(x) from x0 until |dx| < 1e-12 (1 + x), at most 1e4
// steps; diverged when x > 1e12. The minimal fixed point is reached from
// x0 = 1e-8 (F is non-decreasing for the activations here).
FixedPointResult variance_fixed_point(const MeanFieldParams& p, const Activation& phi,
                                      double x0, const QuadratureConfig& cfg = {});

// Correlation map f(x) = (sigma_b^2 + sigma_w^2 E[phi(U1) phi(U2(x))]) / q
// with U1 = sqrt(q) Z1, U2(x) = sqrt(q) (x Z1 + sqrt(1-x^2) Z2). q > 0.
double correlation_map(double x, double q, const MeanFieldParams& p, const Activation& phi,
                       const QuadratureConfig& cfg = {});

// f'(x) = sigma_w^2 E[phi'(U1) phi'(U2(x))].
double correlation_map_derivative(double x, double q, const MeanFieldParams& p,
                                  const Activation& phi, const QuadratureConfig& cfg = {});

struct SecondDerivative {
    double value = 0.0;
    bool analytic = false;  // true: sigma_w^2 q E[phi''(U1) phi''(U2)]; false: FD of f'
};

// f''(x); uses phi'' when available, otherwise a central difference of f'.
SecondDerivative correlation_map_second(double x, double q, const MeanFieldParams& p,
                                        const Activation& phi, const QuadratureConfig& cfg = {});

// chi1 = sigma_w^2 E[phi'(sqrt(q) Z)^2]; at q = 0 the one-sided limit
// sigma_w^2 (phi'(0+)^2 + phi'(0-)^2) / 2.
double chi1(double q, const MeanFieldParams& p, const Activation& phi,
            const QuadratureConfig& cfg = {});

// alpha = F'(q). Smooth activations use chi1 + sigma_w^2 E[phi'' phi]; kinked
// ones the Z-form derivative. alpha = chi1 at q = 0.
double alpha(double q, const MeanFieldParams& p, const Activation& phi,
             const QuadratureConfig& cfg = {});

DepthScales depth_scales(double q, const MeanFieldParams& p, const Activation& phi,
                         const QuadratureConfig& cfg = {});

enum class IterateMode { layerwise, homogeneous };

struct KernelTrajectory {
    std::vector<KernelState> states;
    bool diverged = false;
};

// Layerwise mode propagates (q_a, q_b, c) jointly by the exact one-layer
// recursion; homogeneous mode holds q fixed (it must be a fixed point of F)
// and iterates c <- f(c). Output has `depth` states following `initial`.
KernelTrajectory iterate_kernel(const KernelState& initial, int depth, const MeanFieldParams& p,
                                const Activation& phi, IterateMode mode,
                                const QuadratureConfig& cfg = {});

// Gaps 1 - c^l for l = 1..depth under c <- f(c) at a fixed-point q, tracked
// directly so ordered-phase decay stays resolvable below double epsilon
// (update linearizes to gap <- chi1 * gap once gap < 1e-8).
std::vector<double> homogeneous_gap_sequence(double c0, int depth, double q,
                                             const MeanFieldParams& p, const Activation& phi,
                                             const QuadratureConfig& cfg = {});

// sup over scales s in [0, x_max] of E[|phi'(sZ)^2 + phi''(sZ) phi(sZ)|]
// (kinked activations use the absolute Z-form integrand).
double m_phi_sup(const Activation& phi, double x_max = 10.0, int grid = 400,
                 const QuadratureConfig& cfg = {});

// sup over x,y in [0, q_max], |x-y| <= delta, c in [0,1] of
// E[|phi'(x Z1) phi'(y (c Z1 + sqrt(1-c^2) Z2))|].
double c_phi_sup(const Activation& phi, double delta, double q_max = 10.0, int grid = 400,
                 const QuadratureConfig& cfg = {});

}  // namespace eoclab
