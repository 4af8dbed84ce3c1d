#include "eoclab/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "eoclab/errors.hpp"
#include "eoclab/rng.hpp"

namespace eoclab {

namespace {

constexpr double kZTrunc = 12.0;  // Gaussian tail beyond 12 is ~2e-33
constexpr double kInvSqrt2Pi = 0.39894228040143267793994606;
constexpr int kSegmentOrder = 64;  // Gauss-Legendre points per segment

// Gauss-Hermite resolves features no finer than ~3/sqrt(order) in z; at
// scale s an integrand built from phi(s z) varies on the z-scale 1/s. Above
// this scale the piecewise rule takes over, with segment boundaries bracketing
// the feature region so every segment is comfortably analytic.
constexpr double kResolutionScale = 1.0;

void add_resolution_splits(std::vector<double>& zkinks, double scale, double center = 0.0) {
    if (!(scale > kResolutionScale)) return;
    zkinks.push_back(center);
    for (double k : {1.0, 5.0}) {
        zkinks.push_back(center + k / scale);
        zkinks.push_back(center - k / scale);
    }
}

double gauss_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

[[noreturn]] void throw_nonfinite(const char* where, double node, double value) {
    std::ostringstream os;
    os << where << ": non-finite integrand (" << value << ") at node z = " << node;
    throw NumericError(os.str());
}

GaussRule compute_gauss_hermite(int order) {
    // Golub-Welsch for the probabilists' Hermite recurrence
    // He_{k+1} = x He_k - k He_{k-1}: Jacobi matrix has zero diagonal and
    // off-diagonal sqrt(k). Normalized weights are the squared first
    // components of the eigenvectors.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        const double v = solver.eigenvectors()(0, i);
        rule.weights[i] = v * v;
    }
    return rule;
}

GaussRule compute_gauss_legendre(int order) {
    // Newton iteration on P_n with the usual Chebyshev-like initial guess.
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

template <typename Compute>
const GaussRule& cached_rule(std::map<int, GaussRule>& cache, std::mutex& mu, int order,
                             Compute&& compute) {
    std::scoped_lock lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute(order)).first;
    return it->second;
}

// integrate e(z) against the standard normal density; zkinks (already mapped
// to z-space, sorted not required) trigger the piecewise Gauss-Legendre path.
template <typename Fn>
double integrate_gaussian(Fn&& e, const QuadratureConfig& cfg, std::vector<double> zkinks,
                          const char* where) {
    std::erase_if(zkinks, [](double z) { return !(z > -kZTrunc && z < kZTrunc); });
    if (!cfg.kink_split || zkinks.empty()) {
        const GaussRule& gh = gauss_hermite(cfg.order);
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
            const double v = e(gh.nodes[i]);
            if (!std::isfinite(v)) throw_nonfinite(where, gh.nodes[i], v);
            acc += gh.weights[i] * v;
        }
        return acc;
    }
    std::sort(zkinks.begin(), zkinks.end());
    zkinks.erase(std::unique(zkinks.begin(), zkinks.end()), zkinks.end());
    const GaussRule& gl = gauss_legendre(kSegmentOrder);
    double acc = 0.0;
    double lo = -kZTrunc;
    for (std::size_t s = 0; s <= zkinks.size(); ++s) {
        const double hi = s < zkinks.size() ? zkinks[s] : kZTrunc;
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        if (half > 0.0) {
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double z = mid + half * gl.nodes[i];
                const double v = e(z);
                if (!std::isfinite(v)) throw_nonfinite(where, z, v);
                acc += half * gl.weights[i] * v * gauss_pdf(z);
            }
        }
        lo = hi;
    }
    return acc;
}

std::vector<double> map_kinks(std::span<const double> kinks, double scale) {
    std::vector<double> z;
    if (scale <= 0.0) return z;
    z.reserve(kinks.size());
    for (double k : kinks) z.push_back(k / scale);
    return z;
}

}  // namespace

const GaussRule& gauss_hermite(int order) {
    if (order < 2) throw ConfigError("gauss_hermite: order must be >= 2");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    return cached_rule(cache, mu, order, compute_gauss_hermite);
}

const GaussRule& gauss_legendre(int order) {
    if (order < 2) throw ConfigError("gauss_legendre: order must be >= 2");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    return cached_rule(cache, mu, order, compute_gauss_legendre);
}

double expect1(const RealFn& g, double scale, const QuadratureConfig& cfg,
               std::span<const double> kinks) {
    if (!(scale >= 0.0)) throw std::domain_error("expect1: scale must be >= 0");
    if (scale == 0.0) return g(0.0);
    std::vector<double> zk = map_kinks(kinks, scale);
    add_resolution_splits(zk, scale);
    return integrate_gaussian([&](double z) { return g(scale * z); }, cfg, std::move(zk),
                              "expect1");
}

double expect2(const RealFn& g, const RealFn& h, double qa, double qb, double c,
               const QuadratureConfig& cfg, std::span<const double> kinks_g,
               std::span<const double> kinks_h) {
    if (!(qa >= 0.0) || !(qb >= 0.0)) throw std::domain_error("expect2: variances must be >= 0");
    if (std::abs(c) > 1.0 + 1e-9) throw std::domain_error("expect2: |c| must be <= 1");
    c = std::clamp(c, -1.0, 1.0);
    const double sa = std::sqrt(qa);
    const double sb = std::sqrt(qb);
    if (qa == 0.0) {
        const double g0 = g(0.0);
        return g0 * expect1(h, sb, cfg, kinks_h);  // c Z1 + sqrt(1-c^2) Z2 ~ N(0,1)
    }
    if (qb == 0.0) {
        return h(0.0) * expect1(g, sa, cfg, kinks_g);
    }
    if (1.0 - std::abs(c) < 1e-12) {
        // degenerate: h sees +-sb Z1
        const double sgn = c > 0.0 ? 1.0 : -1.0;
        std::vector<double> zk = map_kinks(kinks_g, sa);
        for (double k : map_kinks(kinks_h, sb)) zk.push_back(sgn * k);
        add_resolution_splits(zk, std::max(sa, sb));
        return integrate_gaussian([&](double z) { return g(sa * z) * h(sgn * sb * z); }, cfg,
                                  std::move(zk), "expect2");
    }
    const double sf = std::sqrt((1.0 - c) * (1.0 + c));
    // Outer integral over Z1 splits at g's kinks: the inner Gaussian average
    // smooths h's kinks into an analytic function of z1 (feature scale
    // 1/(sb |c|), handled by resolution splits).
    std::vector<double> outer_kinks = map_kinks(kinks_g, sa);
    add_resolution_splits(outer_kinks, sa);
    add_resolution_splits(outer_kinks, sb * std::abs(c));
    const double inner_scale = sb * sf;
    return integrate_gaussian(
        [&](double z1) {
            const double gv = g(sa * z1);
            if (gv == 0.0) return 0.0;
            std::vector<double> inner_kinks;
            inner_kinks.reserve(kinks_h.size() + 5);
            for (double k : kinks_h) inner_kinks.push_back((k / sb - c * z1) / sf);
            add_resolution_splits(inner_kinks, inner_scale, -c * z1 / sf);
            const double hv = integrate_gaussian(
                [&](double z2) { return h(sb * (c * z1 + sf * z2)); }, cfg,
                std::move(inner_kinks), "expect2(inner)");
            return gv * hv;
        },
        cfg, std::move(outer_kinks), "expect2(outer)");
}

McEstimate mc_expect2(const RealFn& g, const RealFn& h, double qa, double qb, double c,
                      const McConfig& cfg) {
    if (cfg.samples < 2) throw ConfigError("mc_expect2: needs at least 2 samples");
    if (std::abs(c) > 1.0 + 1e-9) throw std::domain_error("mc_expect2: |c| must be <= 1");
    c = std::clamp(c, -1.0, 1.0);
    const double sa = std::sqrt(qa);
    const double sb = std::sqrt(qb);
    const double sf = std::sqrt(std::max(0.0, (1.0 - c) * (1.0 + c)));
    CounterRng rng(cfg.seed, /*stream=*/0x6d63u);  // "mc"
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
        const double z1 = rng.next_normal();
        const double z2 = rng.next_normal();
        const double v = g(sa * z1) * h(sb * (c * z1 + sf * z2));
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(cfg.samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

}  // namespace eoclab
