#include <doctest.h>

#include <cmath>
#include <vector>

#include "eoclab/activation.hpp"
#include "eoclab/errors.hpp"
#include "eoclab/quadrature.hpp"
#include "eoclab/rng.hpp"

using namespace eoclab;

namespace {

const QuadratureConfig kCfg{};  // defaults: order 200, kink splitting on

double relu_fn(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

TEST_CASE("expect1 basics") {
    CHECK(expect1([](double x) { return x; }, 1.0, kCfg) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(expect1([](double x) { return x * x; }, 1.0, kCfg) == doctest::Approx(1.0).epsilon(1e-13));
    const std::vector<double> kink{0.0};
    CHECK(expect1([](double x) { return relu_fn(x) * relu_fn(x); }, 1.0, kCfg, kink) ==
          doctest::Approx(0.5).epsilon(1e-13));
    // scale 0 collapses to g(0)
    CHECK(expect1([](double x) { return std::cos(x); }, 0.0, kCfg) == 1.0);
}

TEST_CASE("expect1 is exact for polynomials of degree < 2 order") {
    // order 6: exact through degree 11; E[Z^{2k}] = (2k-1)!!
    const QuadratureConfig small{6, true};
    const double moments[] = {1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0, 0.0, 945.0, 0.0};
    for (int deg = 0; deg <= 11; ++deg) {
        const double v = expect1([deg](double x) { return std::pow(x, deg); }, 1.0, small);
        CHECK(std::abs(v - moments[deg]) <= 1e-10 * std::max(1.0, moments[deg]));
    }
}

TEST_CASE("kink splitting beats plain Gauss-Hermite on kinked integrands") {
    // E[HT(sqrt(x) Z)^2] at x = 1: exact piecewise-Gaussian value
    const Activation ht = make_activation("hard_tanh");
    const double exact = 0.51605855096171332;
    const double split = expect1([&](double t) { return ht.value(t) * ht.value(t); }, 1.0, kCfg,
                                 ht.kinks);
    CHECK(split == doctest::Approx(exact).epsilon(1e-12));
    QuadratureConfig nosplit = kCfg;
    nosplit.kink_split = false;
    const double plain = expect1([&](double t) { return ht.value(t) * ht.value(t); }, 1.0,
                                 nosplit, ht.kinks);
    CHECK(std::abs(plain - exact) > 1e-7);  // plain GH converges slowly here
}

TEST_CASE("expect2 basics") {
    const auto id = [](double x) { return x; };
    CHECK(expect2(id, id, 1.0, 1.0, 0.3, kCfg) == doctest::Approx(0.3).epsilon(1e-13));
    const std::vector<double> kink{0.0};
    // independent ReLUs: E[(Z)+]^2 = 1/(2 pi)
    CHECK(expect2(relu_fn, relu_fn, 1.0, 1.0, 0.0, kCfg, kink, kink) ==
          doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
    // c = 1 reduces to E[ReLU(Z)^2]
    CHECK(expect2(relu_fn, relu_fn, 1.0, 1.0, 1.0, kCfg, kink, kink) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // degenerate variances
    CHECK(expect2([](double) { return 2.0; }, id, 0.0, 1.0, 0.5, kCfg) ==
          doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("expect2 symmetry in (g, qa) <-> (h, qb)") {
    const Activation swish = make_activation("swish");
    const Activation tanh_ = make_activation("tanh");
    for (double c : {0.0, 0.4, 0.9, -0.6}) {
        const double ab = expect2(swish.value, tanh_.value, 1.3, 0.4, c, kCfg);
        const double ba = expect2(tanh_.value, swish.value, 0.4, 1.3, c, kCfg);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("Cauchy-Schwarz for expect2") {
    for (const char* name : {"relu", "tanh", "swish", "elu", "hard_tanh"}) {
        const Activation phi = make_activation(name);
        for (double q : {0.5, 1.0, 2.0}) {
            const double diag = expect1([&](double t) { return phi.value(t) * phi.value(t); },
                                        std::sqrt(q), kCfg, phi.kinks);
            for (int i = 0; i <= 10; ++i) {
                const double c = i / 10.0;
                const double cross = expect2(phi.value, phi.value, q, q, c, kCfg, phi.kinks,
                                             phi.kinks);
                CHECK(cross * cross <= diag * diag + 1e-10);
            }
        }
    }
}

TEST_CASE("monotone in c for relu-like") {
    const Activation relu = make_activation("relu");
    double prev = -1e300;
    for (int i = 0; i <= 50; ++i) {
        const double c = i / 50.0;
        const double v = expect2(relu.value, relu.value, 1.0, 1.0, c, kCfg, relu.kinks,
                                 relu.kinks);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("mc_expect2 determinism and basic values") {
    const auto id = [](double x) { return x; };
    const McConfig mc{1000000, 1234};
    const McEstimate a = mc_expect2(id, id, 1.0, 1.0, 0.5, mc);
    const McEstimate b = mc_expect2(id, id, 1.0, 1.0, 0.5, mc);
    CHECK(a.mean == b.mean);  // bit-identical for a fixed seed
    CHECK(a.stderr_ == b.stderr_);
    CHECK(std::abs(a.mean - 0.5) < 3.0 * a.stderr_);
    CHECK(a.stderr_ > 0.0);
    CHECK(a.stderr_ < 2e-3);
}

TEST_CASE("quadrature agrees with the Monte-Carlo oracle") {
    // smaller sample budget here; the acceptance suite runs the full sweep
    CounterRng rng(7, 99);
    const std::vector<std::string> names = {"relu", "tanh", "swish", "elu", "hard_tanh", "arctan"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        const Activation phi = make_activation(names[i]);
        const double qa = 0.2 + 2.0 * rng.next_uniform();
        const double qb = 0.2 + 2.0 * rng.next_uniform();
        const double c = rng.next_uniform() * 0.99;
        const double quad = expect2(phi.value, phi.value, qa, qb, c, kCfg, phi.kinks, phi.kinks);
        const McEstimate mc = mc_expect2(phi.value, phi.value, qa, qb, c, {200000, 42 + i});
        CHECK(std::abs(quad - mc.mean) < 4.0 * mc.stderr_);
    }
    // swish at the reference point q = 0.44
    const Activation swish = make_activation("swish");
    const double quad = expect2(swish.value, swish.value, 0.44, 0.44, 0.0, kCfg);
    const McEstimate mc = mc_expect2(swish.value, swish.value, 0.44, 0.44, 0.0, {1000000, 5});
    CHECK(std::abs(quad - mc.mean) < 4.0 * mc.stderr_);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(expect1([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 1.0,
                            kCfg),
                    NumericError);
    try {
        expect1([](double) { return std::numeric_limits<double>::infinity(); }, 1.0, kCfg);
        CHECK(false);
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
    CHECK_THROWS_AS(expect2([](double x) { return x; }, [](double x) { return x; }, 1.0, 1.0, 1.5,
                            kCfg),
                    std::domain_error);
    CHECK_THROWS_AS(expect1([](double x) { return x; }, -1.0, kCfg), std::domain_error);
    CHECK_THROWS_AS(gauss_hermite(1), ConfigError);
}
