#include "eoclab/eoc.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace eoclab {

namespace {

constexpr double kSigmaWLo = 1e-3;
constexpr double kSigmaWHi = 10.0;
constexpr int kBracketCandidates = 40;
constexpr double kSigmaWTol = 1e-9;

struct Residual {
    double value = 1.0;  // sentinel: non-converged candidates sit on the r > 0 side
    bool converged = false;
    double q = 0.0;
};

Residual residual_at(double sigma_w, double sigma_b, const Activation& phi,
                     const QuadratureConfig& cfg, int& bad_candidates) {
    const MeanFieldParams p{sigma_b * sigma_b, sigma_w * sigma_w};
    const FixedPointResult fp = variance_fixed_point(p, phi, 1e-8, cfg);
    if (fp.status != FixedPointStatus::converged) {
        ++bad_candidates;
        return {};
    }
    return {chi1(fp.q, p, phi, cfg) - 1.0, true, fp.q};
}

}  // namespace

EocPoint relu_like_eoc(const ReluLikeParams& params) {
    EocPoint pt;
    pt.sigma_b = 0.0;
    pt.sigma_w = std::sqrt(2.0 / (params.lambda * params.lambda + params.beta * params.beta));
    pt.q = 1.0;  // probe-input convention: every q is fixed on this EOC
    pt.chi1 = 1.0;
    pt.alpha = 1.0;
    pt.eps_c = std::numeric_limits<double>::infinity();
    pt.eps_q = std::numeric_limits<double>::infinity();
    pt.status = EocStatus::exact;
    return pt;
}

EocPoint eoc_solve(double sigma_b, const Activation& phi, const QuadratureConfig& cfg) {
    if (!(sigma_b >= 0.0)) throw std::domain_error("eoc_solve: sigma_b must be >= 0");
    if (phi.is_relu_like()) {
        if (sigma_b == 0.0) return relu_like_eoc(*phi.relu_like);
        EocPoint pt;
        pt.sigma_b = sigma_b;
        pt.status = EocStatus::not_found;
        pt.diagnostics = "relu-like EOC is the single point sigma_b = 0";
        return pt;
    }

    int bad_candidates = 0;
    // log-spaced scan for a sign change of r(sigma_w) = chi1(q(sigma_w)) - 1
    const double ratio = std::pow(kSigmaWHi / kSigmaWLo, 1.0 / (kBracketCandidates - 1));
    double lo = kSigmaWLo;
    Residual rlo = residual_at(lo, sigma_b, phi, cfg, bad_candidates);
    double hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i < kBracketCandidates; ++i) {
        const double sw = kSigmaWLo * std::pow(ratio, i);
        const Residual r = residual_at(sw, sigma_b, phi, cfg, bad_candidates);
        if (rlo.value < 0.0 && r.value > 0.0) {
            hi = sw;
            bracketed = true;
            break;
        }
        lo = sw;
        rlo = r;
    }

    EocPoint pt;
    pt.sigma_b = sigma_b;
    if (!bracketed) {
        pt.status = EocStatus::not_found;
        std::ostringstream os;
        os << "no sign change of chi1 - 1 over sigma_w in [" << kSigmaWLo << ", " << kSigmaWHi
           << "]";
        if (bad_candidates > 0) os << "; " << bad_candidates << " candidates did not converge";
        pt.diagnostics = os.str();
        return pt;
    }

    while (hi - lo > kSigmaWTol) {
        const double mid = 0.5 * (lo + hi);
        const Residual r = residual_at(mid, sigma_b, phi, cfg, bad_candidates);
        if (r.value > 0.0) {
            hi = mid;
        } else {
            lo = mid;
            rlo = r;
        }
    }

    // report the converged (lower) side so q, chi1, alpha are well-defined
    pt.sigma_w = lo;
    pt.q = rlo.q;
    const MeanFieldParams p{sigma_b * sigma_b, lo * lo};
    const DepthScales ds = depth_scales(rlo.q, p, phi, cfg);
    pt.chi1 = ds.chi1;
    pt.alpha = ds.alpha;
    pt.eps_c = ds.eps_c;
    pt.eps_q = ds.eps_q;
    pt.status = EocStatus::numeric;
    std::ostringstream os;
    if (std::abs(pt.chi1 - 1.0) > 1e-7) {
        os << "terminated at the variance-criticality boundary (alpha = " << pt.alpha
           << "): chi1 stays below 1 on the stable fixed-point branch";
    }
    if (bad_candidates > 0) {
        if (os.tellp() > 0) os << "; ";
        os << bad_candidates << " candidates had non-converged variance (treated as chi1 > 1)";
    }
    pt.diagnostics = os.str();
    return pt;
}

EocCurve eoc_curve(std::span<const double> sigma_b_grid, const Activation& phi,
                   const QuadratureConfig& cfg) {
    EocCurve curve;
    curve.points.reserve(sigma_b_grid.size());
    for (double sb : sigma_b_grid) curve.points.push_back(eoc_solve(sb, phi, cfg));
    // monotonicity diagnostics: sigma_w should not increase with sigma_b for
    // the swish-like activations studied here
    const EocPoint* prev = nullptr;
    for (const EocPoint& p : curve.points) {
        if (p.status == EocStatus::not_found) continue;
        if (prev && p.sigma_w > prev->sigma_w + 1e-9) {
            std::ostringstream os;
            os << "sigma_w increases from " << prev->sigma_w << " (sigma_b = " << prev->sigma_b
               << ") to " << p.sigma_w << " (sigma_b = " << p.sigma_b << ")";
            curve.diagnostics.push_back(os.str());
        }
        prev = &p;
    }
    return curve;
}

}  // namespace eoclab
