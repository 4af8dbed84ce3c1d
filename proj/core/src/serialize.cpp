#include "eoclab/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace eoclab {

namespace {

nlohmann::json num_or_null(double v) {
    if (std::isinf(v)) return nullptr;  // infinities serialize as null
    return v;
}

}  // namespace

std::string to_string(EocStatus s) {
    switch (s) {
        case EocStatus::exact: return "exact";
        case EocStatus::numeric: return "numeric";
        case EocStatus::not_found: return "not_found";
    }
    return "unknown";
}

std::string to_string(FixedPointStatus s) {
    switch (s) {
        case FixedPointStatus::converged: return "converged";
        case FixedPointStatus::diverged: return "diverged";
        case FixedPointStatus::max_iters: return "max_iters";
    }
    return "unknown";
}

nlohmann::json to_json(const EocPoint& p) {
    nlohmann::json j;
    j["sigma_b"] = p.sigma_b;
    j["sigma_w"] = p.sigma_w;
    j["q"] = p.q;
    j["chi1"] = p.chi1;
    j["alpha"] = p.alpha;
    j["eps_q"] = num_or_null(p.eps_q);
    j["eps_c"] = num_or_null(p.eps_c);
    j["status"] = to_string(p.status);
    j["diagnostics"] = p.diagnostics;
    return j;
}

nlohmann::json to_json(const DepthScales& d) {
    nlohmann::json j;
    j["chi1"] = d.chi1;
    j["alpha"] = d.alpha;
    j["eps_c"] = num_or_null(d.eps_c);
    j["eps_q"] = num_or_null(d.eps_q);
    return j;
}

nlohmann::json to_json(const FixedPointResult& r, double x0) {
    nlohmann::json j;
    j["q"] = r.q;
    j["iters"] = r.iters;
    j["status"] = to_string(r.status);
    j["x0"] = x0;
    return j;
}

nlohmann::json to_json(const ConditionReport& r) {
    nlohmann::json j;
    j["activation_id"] = r.activation_id;
    j["cond_i"] = nlohmann::json{{"pass", r.cond_i}, {"growth_bound_k", r.growth_bound_k}};
    nlohmann::json eoc = nlohmann::json::array();
    for (const auto& e : r.cond_ii) {
        eoc.push_back({{"sigma_b", e.sigma_b}, {"status", to_string(e.status)}});
    }
    j["cond_ii"] = nlohmann::json{{"pass", r.cond_ii_ok}, {"points", eoc}};
    j["cond_iii_monotone"] =
        nlohmann::json{{"pass", r.cond_iii_monotone}, {"min_variance_slope", r.min_variance_slope}};
    nlohmann::json qt = nlohmann::json::array();
    for (const auto& e : r.cond_iii_qlimit) qt.push_back({{"sigma_b", e.sigma_b}, {"q", e.q}});
    j["cond_iii_qlimit"] = nlohmann::json{{"pass", r.cond_iii_qlimit_ok}, {"points", qt}};
    j["cond_iv_convex"] = nlohmann::json{{"pass", r.cond_iv_convex},
                                         {"min_correlation_second", r.min_correlation_second},
                                         {"tolerance", r.convexity_tolerance},
                                         {"x_max", r.convexity_x_max}};
    nlohmann::json sd = nlohmann::json::array();
    for (const auto& e : r.sup_dev) {
        sd.push_back({{"sigma_b", e.sigma_b}, {"sup_dev", e.sup_dev}, {"bound", e.bound}});
    }
    j["sup_dev"] = sd;
    j["all_pass"] = r.all_pass();
    return j;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace eoclab
