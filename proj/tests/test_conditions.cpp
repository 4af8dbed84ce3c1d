#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eoclab/activation.hpp"
#include "eoclab/conditions.hpp"
#include "eoclab/serialize.hpp"

using namespace eoclab;

namespace {

const QuadratureConfig kCfg{};

}  // namespace

TEST_CASE("swish passes all four conditions") {
    const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5};
    const ConditionReport rep = check_conditions(make_activation("swish"), grid, 41, kCfg);
    CHECK(rep.cond_i);
    CHECK(rep.growth_bound_k == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.cond_ii_ok);
    CHECK(rep.cond_iii_monotone);
    CHECK(rep.min_variance_slope > 0.0);
    CHECK(rep.cond_iii_qlimit_ok);
    CHECK(rep.cond_iv_convex);
    CHECK(rep.min_correlation_second > 0.0);
    CHECK(rep.all_pass());
    // sup_dev grows with sigma_b and always exceeds the odd-activation bound
    REQUIRE(rep.sup_dev.size() == 5);
    for (std::size_t i = 0; i < rep.sup_dev.size(); ++i) {
        if (i > 0) CHECK(rep.sup_dev[i].sup_dev > rep.sup_dev[i - 1].sup_dev);
        CHECK(rep.sup_dev[i].sup_dev > rep.sup_dev[i].bound);  // E[phi] != 0 for swish
    }
}

TEST_CASE("elu passes all four conditions") {
    const std::vector<double> grid{0.05, 0.2, 0.35, 0.5};
    const ConditionReport rep = check_conditions(make_activation("elu"), grid, 41, kCfg);
    CHECK(rep.cond_i);
    CHECK(rep.cond_ii_ok);
    CHECK(rep.cond_iii_monotone);
    CHECK(rep.cond_iii_qlimit_ok);
    CHECK(rep.cond_iv_convex);
    CHECK(rep.all_pass());
}

TEST_CASE("relu fails the EOC-curve condition") {
    const std::vector<double> grid{0.1, 0.3};
    const ConditionReport rep = check_conditions(make_activation("relu"), grid, 21, kCfg);
    CHECK(rep.cond_i);  // (i) holds: zero at zero, bounded growth
    CHECK(!rep.cond_ii_ok);
    for (const auto& e : rep.cond_ii) CHECK(e.status == EocStatus::not_found);
    CHECK(!rep.all_pass());
}

TEST_CASE("tanh passes (i), (iii), (iv) on its numerically solved EOC") {
    const std::vector<double> grid{0.1, 0.3, 0.5};
    const ConditionReport rep = check_conditions(make_activation("tanh"), grid, 41, kCfg);
    CHECK(rep.cond_i);
    CHECK(rep.cond_ii_ok);  // the curve exists numerically as well
    CHECK(rep.cond_iii_monotone);
    CHECK(rep.cond_iii_qlimit_ok);
    CHECK(rep.cond_iv_convex);
    // odd activation: sup_dev equals sigma_b^2/q up to grid/quadrature noise
    for (const auto& e : rep.sup_dev) {
        CHECK(e.sup_dev <= e.bound + 1e-8);
        CHECK(e.sup_dev >= e.bound - 1e-6);
    }
}

TEST_CASE("report is deterministic") {
    const std::vector<double> grid{0.1, 0.3};
    const ConditionReport a = check_conditions(make_activation("tanh"), grid, 21, kCfg);
    const ConditionReport b = check_conditions(make_activation("tanh"), grid, 21, kCfg);
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("sup_deviation on specific points") {
    // linear activation on its EOC: f is the identity
    const EocPoint lin = relu_like_eoc({1.0, 1.0});
    const SupDeviation d = sup_deviation(make_activation("relu_like:1:1"), lin, 101, kCfg);
    CHECK(d.sup_dev < 1e-9);
    CHECK(d.bound == 0.0);

    // swish: the deviation cap is f(0) > sigma_b^2/q (E[phi] > 0); record both
    const EocPoint sw = eoc_solve(0.2, make_activation("swish"), kCfg);
    REQUIRE(sw.status == EocStatus::numeric);
    const SupDeviation ds = sup_deviation(make_activation("swish"), sw, 101, kCfg);
    CHECK(ds.sup_dev > ds.bound);
    CHECK(ds.sup_dev < 0.25);

    CHECK_THROWS_AS(sup_deviation(make_activation("relu"),
                                  eoc_solve(0.5, make_activation("relu"), kCfg), 11, kCfg),
                    std::domain_error);
}

TEST_CASE("tail exponents of E[phi'(xZ)^2]") {
    // hard-tanh: E = 2 Phi(1/x) - 1 ~ sqrt(2/pi)/x, so beta ~ 1/2
    CHECK(tail_exponent(make_activation("hard_tanh"), 10.0, 1000.0, 25, kCfg) ==
          doctest::Approx(0.5).epsilon(0.02));
    // relu: constant 1/2, beta ~ 0
    CHECK(std::abs(tail_exponent(make_activation("relu"), 10.0, 1000.0, 25, kCfg)) < 1e-6);
    // tanh decays like 1/x as well (beta ~ 1/2, inside (0,1))
    CHECK(tail_exponent(make_activation("tanh"), 10.0, 1000.0, 25, kCfg) ==
          doctest::Approx(0.5).epsilon(0.02));
    // swish derivative tends to 1 at +inf: beta ~ 0
    CHECK(std::abs(tail_exponent(make_activation("swish"), 10.0, 1000.0, 25, kCfg)) < 0.01);
    CHECK_THROWS_AS(tail_exponent(make_activation("tanh"), 0.5, 100.0, 25, kCfg),
                    std::domain_error);
}
