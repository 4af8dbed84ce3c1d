#include "eoclab/activation.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>

#include "eoclab/errors.hpp"

namespace eoclab {

namespace {

// overflow-safe sigmoid, branch on sign
double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Activation make_relu_like(const ReluLikeParams& p, std::string id) {
    if (p.lambda == 0.0 && p.beta == 0.0) {
        throw ConfigError("relu_like: (lambda, beta) must not be (0, 0)");
    }
    Activation a;
    a.id = std::move(id);
    const double lam = p.lambda, bet = p.beta;
    a.value = [lam, bet](double x) { return x > 0.0 ? lam * x : bet * x; };
    a.d1 = [lam, bet](double x) { return x >= 0.0 ? lam : bet; };
    a.d2 = nullptr;  // Dirac mass at 0
    a.bounded = false;
    a.zero_at_zero = true;
    a.d1_at_zero_right = lam;
    a.d1_at_zero_left = bet;
    a.growth_bound_k = std::max(std::abs(lam), std::abs(bet));
    a.kinks = {0.0};
    a.relu_like = p;
    return a;
}

}  // namespace

Activation make_activation(const ReluLikeParams& params) {
    return make_relu_like(params, "relu_like");
}

Activation make_activation(ActivationKind kind) {
    Activation a;
    switch (kind) {
        case ActivationKind::relu:
            a = make_relu_like({1.0, 0.0}, "relu");
            return a;
        case ActivationKind::relu_like:
            return make_relu_like({1.0, 0.0}, "relu_like");
        case ActivationKind::tanh:
            a.id = "tanh";
            a.value = [](double x) { return std::tanh(x); };
            a.d1 = [](double x) {
                const double t = std::tanh(x);
                return 1.0 - t * t;
            };
            a.d2 = [](double x) {
                const double t = std::tanh(x);
                return -2.0 * t * (1.0 - t * t);
            };
            a.bounded = true;
            a.d1_at_zero_right = a.d1_at_zero_left = 1.0;
            a.growth_bound_k = 1.0;
            return a;
        case ActivationKind::hard_tanh:
            a.id = "hard_tanh";
            a.value = [](double x) { return std::clamp(x, -1.0, 1.0); };
            a.d1 = [](double x) { return (x >= -1.0 && x < 1.0) ? 1.0 : 0.0; };
            a.d2 = nullptr;  // Dirac masses at +-1
            a.bounded = true;
            a.d1_at_zero_right = a.d1_at_zero_left = 1.0;
            a.growth_bound_k = 1.0;
            a.kinks = {-1.0, 1.0};
            return a;
        case ActivationKind::swish:
            a.id = "swish";
            a.value = [](double x) { return x * sigmoid(x); };
            a.d1 = [](double x) {
                const double s = sigmoid(x);
                return s + x * s * (1.0 - s);
            };
            a.d2 = [](double x) {
                const double s = sigmoid(x);
                return s * (1.0 - s) * (2.0 + x * (1.0 - 2.0 * s));
            };
            a.bounded = false;
            a.d1_at_zero_right = a.d1_at_zero_left = 0.5;
            a.growth_bound_k = 1.0;  // |phi(x)/x| = sigmoid(x) <= 1
            return a;
        case ActivationKind::elu:
            a.id = "elu";
            a.value = [](double x) { return x >= 0.0 ? x : std::expm1(x); };
            a.d1 = [](double x) { return x >= 0.0 ? 1.0 : std::exp(x); };
            // second derivative jumps at 0 but carries no Dirac mass (d1 is
            // continuous); right convention at 0
            a.d2 = [](double x) { return x >= 0.0 ? 0.0 : std::exp(x); };
            a.bounded = false;
            a.d1_at_zero_right = a.d1_at_zero_left = 1.0;
            a.growth_bound_k = 1.0;
            a.kinks = {0.0};
            return a;
        case ActivationKind::arctan:
            a.id = "arctan";
            a.value = [](double x) { return std::atan(x); };
            a.d1 = [](double x) { return 1.0 / (1.0 + x * x); };
            a.d2 = [](double x) {
                const double d = 1.0 + x * x;
                return -2.0 * x / (d * d);
            };
            a.bounded = true;
            a.d1_at_zero_right = a.d1_at_zero_left = 1.0;
            a.growth_bound_k = 1.0;
            return a;
    }
    throw ConfigError("unknown activation kind");
}

Activation make_activation(std::string_view name) {
    if (name == "relu") return make_activation(ActivationKind::relu);
    if (name == "tanh") return make_activation(ActivationKind::tanh);
    if (name == "hard_tanh") return make_activation(ActivationKind::hard_tanh);
    if (name == "swish") return make_activation(ActivationKind::swish);
    if (name == "elu") return make_activation(ActivationKind::elu);
    if (name == "arctan") return make_activation(ActivationKind::arctan);
    if (name.starts_with("relu_like:")) {
        std::string_view rest = name.substr(10);
        const auto sep = rest.find(':');
        if (sep == std::string_view::npos) {
            throw ConfigError("relu_like needs two parameters: relu_like:<lambda>:<beta>");
        }
        const auto parse = [&](std::string_view s) {
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
                throw ConfigError("relu_like: bad parameter '" + std::string(s) + "'");
            }
            return v;
        };
        return make_relu_like({parse(rest.substr(0, sep)), parse(rest.substr(sep + 1))},
                              "relu_like");
    }
    throw ConfigError("unknown activation '" + std::string(name) +
                      "' (expected relu, relu_like:<l>:<b>, tanh, hard_tanh, swish, elu, arctan)");
}

double growth_bound(const Activation& phi, double domain_half_width, int grid) {
    if (!phi.zero_at_zero) {
        throw ConfigError("growth_bound requires phi(0) = 0");
    }
    double sup = std::max(std::abs(phi.d1_at_zero_right), std::abs(phi.d1_at_zero_left));
    for (int i = 0; i < grid; ++i) {
        const double x = -domain_half_width + 2.0 * domain_half_width * i / (grid - 1);
        if (x == 0.0) continue;
        sup = std::max(sup, std::abs(phi.value(x) / x));
    }
    return sup;
}

}  // namespace eoclab
