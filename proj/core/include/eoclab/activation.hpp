#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eoclab {

// Slopes of a piecewise-linear activation: lambda for x > 0, beta for x <= 0.
struct ReluLikeParams {
    double lambda = 1.0;
    double beta = 0.0;
};

enum class ActivationKind { relu, relu_like, tanh, hard_tanh, swish, elu, arctan };

// A scalar activation with the derivative data the mean-field maps need.
// At kinks d1 reports the right derivative; d2 is empty where the second
// derivative is not a classical function (relu, relu_like, hard_tanh).
struct Activation {
    std::string id;
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;  // empty = unavailable
    bool bounded = false;
    bool zero_at_zero = true;
    double d1_at_zero_right = 0.0;
    double d1_at_zero_left = 0.0;
    double growth_bound_k = std::numeric_limits<double>::quiet_NaN();  // NaN = unknown
    std::vector<double> kinks;  // where value/d1/d2 lose smoothness
    std::optional<ReluLikeParams> relu_like;

    bool has_d2() const { return static_cast<bool>(d2); }
    bool is_relu_like() const { return relu_like.has_value(); }
};

Activation make_activation(ActivationKind kind);
Activation make_activation(const ReluLikeParams& params);

// CLI-facing names: relu, relu_like:<lambda>:<beta>, tanh, hard_tanh, swish,
// elu, arctan. Throws ConfigError on anything else.
Activation make_activation(std::string_view name);

// sup over a dense grid of |phi(x)/x| on [-half_width, half_width], with the
// one-sided derivative limit substituted at x = 0. Requires phi(0) = 0.
double growth_bound(const Activation& phi, double domain_half_width, int grid = 4001);

}  // namespace eoclab
