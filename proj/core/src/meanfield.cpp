#include "eoclab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eoclab {

namespace {

constexpr double kDivergenceGuard = 1e12;
constexpr int kMaxFixedPointIters = 10000;
constexpr double kFixedPointTol = 1e-12;

double sq(double v) { return v * v; }

}  // namespace

double variance_map(double x, const MeanFieldParams& p, const Activation& phi,
                    const QuadratureConfig& cfg) {
    if (!(x >= 0.0)) throw std::domain_error("variance_map: x must be >= 0");
    const double e = expect1([&](double t) { return sq(phi.value(t)); }, std::sqrt(x), cfg,
                             phi.kinks);
    return p.sigma_b2 + p.sigma_w2 * e;
}

double variance_map_derivative(double x, const MeanFieldParams& p, const Activation& phi,
                               const QuadratureConfig& cfg) {
    if (!(x > 0.0)) throw std::domain_error("variance_map_derivative: x must be > 0");
    // F'(x) = sigma_w^2 E[(Z/sqrt(x)) phi'(sqrt(x) Z) phi(sqrt(x) Z)]; in the
    // argument t = sqrt(x) z the integrand is (t/x) phi'(t) phi(t).
    const double e = expect1([&](double t) { return (t / x) * phi.d1(t) * phi.value(t); },
                             std::sqrt(x), cfg, phi.kinks);
    return p.sigma_w2 * e;
}

FixedPointResult variance_fixed_point(const MeanFieldParams& p, const Activation& phi, double x0,
                                      const QuadratureConfig& cfg) {
    if (!(x0 >= 0.0)) throw std::domain_error("variance_fixed_point: x0 must be >= 0");
    double x = x0;
    for (int iter = 1; iter <= kMaxFixedPointIters; ++iter) {
        const double xn = variance_map(x, p, phi, cfg);
        if (xn > kDivergenceGuard) return {xn, iter, FixedPointStatus::diverged};
        if (std::abs(xn - x) < kFixedPointTol * (1.0 + xn)) {
            return {xn, iter, FixedPointStatus::converged};
        }
        x = xn;
    }
    return {x, kMaxFixedPointIters, FixedPointStatus::max_iters};
}

double correlation_map(double x, double q, const MeanFieldParams& p, const Activation& phi,
                       const QuadratureConfig& cfg) {
    if (!(q > 0.0)) throw std::domain_error("correlation_map: q must be > 0");
    const double e = expect2(phi.value, phi.value, q, q, x, cfg, phi.kinks, phi.kinks);
    return (p.sigma_b2 + p.sigma_w2 * e) / q;
}

double correlation_map_derivative(double x, double q, const MeanFieldParams& p,
                                  const Activation& phi, const QuadratureConfig& cfg) {
    if (!(q > 0.0)) throw std::domain_error("correlation_map_derivative: q must be > 0");
    return p.sigma_w2 * expect2(phi.d1, phi.d1, q, q, x, cfg, phi.kinks, phi.kinks);
}

SecondDerivative correlation_map_second(double x, double q, const MeanFieldParams& p,
                                        const Activation& phi, const QuadratureConfig& cfg) {
    if (!(q > 0.0)) throw std::domain_error("correlation_map_second: q must be > 0");
    if (phi.has_d2()) {
        const double e = expect2(phi.d2, phi.d2, q, q, x, cfg, phi.kinks, phi.kinks);
        return {p.sigma_w2 * q * e, true};
    }
    // central difference of f' (one-sided at the x -> 1 boundary)
    const double h = 1e-4;
    double d;
    if (x + h <= 1.0) {
        d = (correlation_map_derivative(x + h, q, p, phi, cfg) -
             correlation_map_derivative(x - h, q, p, phi, cfg)) /
            (2.0 * h);
    } else {
        d = (3.0 * correlation_map_derivative(x, q, p, phi, cfg) -
             4.0 * correlation_map_derivative(x - h, q, p, phi, cfg) +
             correlation_map_derivative(x - 2.0 * h, q, p, phi, cfg)) /
            (2.0 * h);
    }
    return {d, false};
}

double chi1(double q, const MeanFieldParams& p, const Activation& phi,
            const QuadratureConfig& cfg) {
    if (!(q >= 0.0)) throw std::domain_error("chi1: q must be >= 0");
    if (q == 0.0) {
        return p.sigma_w2 * 0.5 * (sq(phi.d1_at_zero_right) + sq(phi.d1_at_zero_left));
    }
    return p.sigma_w2 * expect1([&](double t) { return sq(phi.d1(t)); }, std::sqrt(q), cfg,
                                phi.kinks);
}

double alpha(double q, const MeanFieldParams& p, const Activation& phi,
             const QuadratureConfig& cfg) {
    if (!(q >= 0.0)) throw std::domain_error("alpha: q must be >= 0");
    if (q == 0.0) return chi1(q, p, phi, cfg);
    if (!phi.has_d2()) {
        // phi'' is distributional; F'(q) via the Z-form is always defined
        return variance_map_derivative(q, p, phi, cfg);
    }
    const double e = expect1([&](double t) { return phi.d2(t) * phi.value(t); }, std::sqrt(q),
                             cfg, phi.kinks);
    return chi1(q, p, phi, cfg) + p.sigma_w2 * e;
}

namespace {

double rate_to_depth_scale(double rate) {
    if (std::abs(rate - 1.0) < 1e-9) return std::numeric_limits<double>::infinity();
    if (rate <= 0.0) return 0.0;
    return -1.0 / std::log(rate);  // negative in the chaotic phase
}

}  // namespace

DepthScales depth_scales(double q, const MeanFieldParams& p, const Activation& phi,
                         const QuadratureConfig& cfg) {
    DepthScales d;
    d.chi1 = chi1(q, p, phi, cfg);
    d.alpha = alpha(q, p, phi, cfg);
    d.eps_c = rate_to_depth_scale(d.chi1);
    d.eps_q = rate_to_depth_scale(d.alpha);
    return d;
}

KernelTrajectory iterate_kernel(const KernelState& initial, int depth, const MeanFieldParams& p,
                                const Activation& phi, IterateMode mode,
                                const QuadratureConfig& cfg) {
    if (depth < 1) throw std::domain_error("iterate_kernel: depth must be >= 1");
    KernelTrajectory out;
    out.states.reserve(depth);
    if (mode == IterateMode::homogeneous) {
        const double q = initial.q_a;
        const auto gaps = homogeneous_gap_sequence(initial.c_ab, depth, q, p, phi, cfg);
        for (int l = 0; l < depth; ++l) {
            out.states.push_back({initial.layer + l + 1, q, q, 1.0 - gaps[l]});
        }
        return out;
    }
    KernelState s = initial;
    for (int l = 0; l < depth; ++l) {
        const double qab = p.sigma_b2 + p.sigma_w2 * expect2(phi.value, phi.value, s.q_a, s.q_b,
                                                             s.c_ab, cfg, phi.kinks, phi.kinks);
        KernelState next;
        next.layer = s.layer + 1;
        next.q_a = variance_map(s.q_a, p, phi, cfg);
        next.q_b = variance_map(s.q_b, p, phi, cfg);
        if (next.q_a > kDivergenceGuard || next.q_b > kDivergenceGuard) {
            out.diverged = true;
            break;
        }
        next.c_ab = std::clamp(qab / std::sqrt(next.q_a * next.q_b), -1.0, 1.0);
        out.states.push_back(next);
        s = next;
    }
    return out;
}

std::vector<double> homogeneous_gap_sequence(double c0, int depth, double q,
                                             const MeanFieldParams& p, const Activation& phi,
                                             const QuadratureConfig& cfg) {
    if (depth < 1) throw std::domain_error("homogeneous_gap_sequence: depth must be >= 1");
    if (!(q > 0.0)) throw std::domain_error("homogeneous_gap_sequence: q must be > 0");
    const double fq = variance_map(q, p, phi, cfg);
    if (std::abs(fq - q) > 1e-6 * (1.0 + q)) {
        throw std::domain_error("homogeneous iteration requires q to be a fixed point of the "
                                "variance map");
    }
    const double slope1 = chi1(q, p, phi, cfg);
    std::vector<double> gaps;
    gaps.reserve(depth);
    double gap = 1.0 - c0;
    gaps.push_back(gap);
    for (int l = 1; l < depth; ++l) {
        if (gap > 1e-8) {
            gap = std::max(0.0, 1.0 - correlation_map(1.0 - gap, q, p, phi, cfg));
        } else {
            gap *= slope1;  // linearized update, exact to O(gap^2)
        }
        gaps.push_back(gap);
    }
    return gaps;
}

double m_phi_sup(const Activation& phi, double x_max, int grid, const QuadratureConfig& cfg) {
    if (!(x_max > 0.0) || grid < 2) throw std::domain_error("m_phi_sup: bad grid");
    double sup = phi.zero_at_zero
                     ? 0.5 * (sq(phi.d1_at_zero_right) + sq(phi.d1_at_zero_left))
                     : 0.0;  // s -> 0 limit
    for (int i = 1; i <= grid; ++i) {
        const double s = x_max * i / grid;
        double e;
        if (phi.has_d2()) {
            e = expect1([&](double t) { return std::abs(sq(phi.d1(t)) + phi.d2(t) * phi.value(t)); },
                        s, cfg, phi.kinks);
        } else {
            const double s2 = s * s;
            e = expect1([&](double t) { return std::abs(t * phi.d1(t) * phi.value(t)) / s2; }, s,
                        cfg, phi.kinks);
        }
        sup = std::max(sup, e);
    }
    return sup;
}

double c_phi_sup(const Activation& phi, double delta, double q_max, int grid,
                 const QuadratureConfig& cfg) {
    if (!(q_max > 0.0) || grid < 2 || !(delta >= 0.0)) throw std::domain_error("c_phi_sup: bad grid");
    QuadratureConfig scan = cfg;
    scan.order = std::min(cfg.order, 64);  // grid-search sup, 2-D tensor per point
    const auto abs_d1 = [&](double t) { return std::abs(phi.d1(t)); };
    double sup = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double x = q_max * i / grid;
        for (double y : {x - delta, x, x + delta}) {
            if (y < 0.0 || y > q_max) continue;
            for (int ci = 0; ci <= 10; ++ci) {
                const double c = ci / 10.0;
                sup = std::max(sup, expect2(abs_d1, abs_d1, x * x, y * y, c, scan, phi.kinks,
                                            phi.kinks));
            }
        }
    }
    return sup;
}

}  // namespace eoclab
