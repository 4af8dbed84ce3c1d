#pragma once

#include <span>
#include <string>
#include <vector>

#include "eoclab/activation.hpp"
#include "eoclab/meanfield.hpp"

namespace eoclab {

enum class EocStatus { exact, numeric, not_found };

// A solved edge-of-chaos point: sigma_w such that chi1 = 1 at the limiting
// variance q, together with the depth-scale data at that point.
struct EocPoint {
    double sigma_b = 0.0;
    double sigma_w = 0.0;
    double q = 0.0;
    double chi1 = 0.0;
    double alpha = 0.0;
    double eps_q = 0.0;
    double eps_c = 0.0;
    EocStatus status = EocStatus::not_found;
    std::string diagnostics;
};

// Bisection over sigma_w in [1e-3, 10] on r(sigma_w) = chi1(q(sigma_w)) - 1,
// where q(sigma_w) is the minimal fixed point of F. Candidates whose fixed
// point diverges (or fails to converge) count as the r > 0 side. Activations
// whose chi1 never reaches 1 on the stable branch terminate at the variance-
// criticality boundary (alpha -> 1); the point's diagnostics say so.
// Relu-like activations bypass the numeric path (their EOC is one point).
EocPoint eoc_solve(double sigma_b, const Activation& phi, const QuadratureConfig& cfg = {});

struct EocCurve {
    std::vector<EocPoint> points;
    std::vector<std::string> diagnostics;  // e.g. monotonicity notes
};

EocCurve eoc_curve(std::span<const double> sigma_b_grid, const Activation& phi,
                   const QuadratureConfig& cfg = {});

// Closed form: sigma_b = 0, sigma_w = sqrt(2 / (lambda^2 + beta^2)). The
// reported q is the probe-input convention q = 1 (on this EOC every variance
// is a fixed point).
EocPoint relu_like_eoc(const ReluLikeParams& params);

}  // namespace eoclab
