// eoclab command-line front end: mean-field analyses of wide random networks
// as CSV/JSON for external plotting and the reproduction suite.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "eoclab/closedform.hpp"
#include "eoclab/conditions.hpp"
#include "eoclab/eoc.hpp"
#include "eoclab/errors.hpp"
#include "eoclab/meanfield.hpp"
#include "eoclab/serialize.hpp"
#include "eoclab/simulator.hpp"

namespace {

using namespace eoclab;

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

// LO:HI:N, endpoints inclusive
GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    const auto p1 = s.find(':');
    const auto p2 = s.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) {
        throw ConfigError("grid spec must be LO:HI:N, got '" + s + "'");
    }
    try {
        g.lo = std::stod(s.substr(0, p1));
        g.hi = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
        g.n = std::stoi(s.substr(p2 + 1));
    } catch (const std::exception&) {
        throw ConfigError("grid spec must be LO:HI:N, got '" + s + "'");
    }
    if (g.n < 1) throw ConfigError("grid spec needs N >= 1");
    return g;
}

std::vector<double> grid_values(const GridSpec& g) {
    std::vector<double> v;
    v.reserve(g.n);
    if (g.n == 1) {
        v.push_back(g.lo);
        return v;
    }
    for (int i = 0; i < g.n; ++i) v.push_back(g.lo + (g.hi - g.lo) * i / (g.n - 1));
    return v;
}

QuadratureConfig quadrature_from_env() {
    QuadratureConfig cfg;
    if (const char* s = std::getenv("EOC_LAB_QUAD_ORDER")) {
        const int order = std::atoi(s);
        if (order < 2) throw ConfigError("EOC_LAB_QUAD_ORDER must be an integer >= 2");
        cfg.order = order;
    }
    return cfg;
}

void print_csv_row(const std::vector<double>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += fmt17(cells[i]);
    }
    std::fputs(line.c_str(), stdout);
    std::fputc('\n', stdout);
}

void print_json(const nlohmann::json& j) { std::fputs((j.dump(2) + "\n").c_str(), stdout); }

struct CommonArgs {
    std::string activation;
    double sigma_b = 0.0;
    double sigma_w = 1.0;
};

int run(int argc, char** argv) {
    CLI::App app{"mean-field analysis of wide random neural networks"};
    app.require_subcommand(1);
    const QuadratureConfig cfg = quadrature_from_env();

    // ---- eoc ----
    auto* cmd_eoc = app.add_subcommand("eoc", "solve the edge of chaos over a sigma_b grid");
    std::string eoc_act, eoc_grid;
    cmd_eoc->add_option("--activation", eoc_act)->required();
    cmd_eoc->add_option("--sigma-b-grid", eoc_grid, "LO:HI:N")->required();

    // ---- fixed-point ----
    auto* cmd_fp = app.add_subcommand("fixed-point", "variance-map fixed point");
    CommonArgs fp_args;
    double fp_x0 = 1e-8;
    cmd_fp->add_option("--activation", fp_args.activation)->required();
    cmd_fp->add_option("--sigma-b", fp_args.sigma_b)->required();
    cmd_fp->add_option("--sigma-w", fp_args.sigma_w)->required();
    cmd_fp->add_option("--x0", fp_x0);

    // ---- corr-fn ----
    auto* cmd_corr = app.add_subcommand("corr-fn", "correlation map f, f', f'' on [0, 1]");
    CommonArgs corr_args;
    bool corr_on_eoc = false;
    int corr_grid = 101;
    double corr_q = -1.0;
    cmd_corr->add_option("--activation", corr_args.activation)->required();
    cmd_corr->add_option("--sigma-b", corr_args.sigma_b);
    cmd_corr->add_option("--sigma-w", corr_args.sigma_w);
    cmd_corr->add_flag("--on-eoc", corr_on_eoc, "solve sigma_w (and q) on the edge of chaos");
    cmd_corr->add_option("--grid", corr_grid);
    cmd_corr->add_option("--q", corr_q, "override the limiting variance");

    // ---- iterate ----
    auto* cmd_it = app.add_subcommand("iterate", "propagate (q_a, q_b, c) over layers");
    CommonArgs it_args;
    double it_c0 = 0.3, it_qa0 = 1.0, it_qb0 = 1.0;
    int it_depth = 10;
    bool it_layerwise = false;
    cmd_it->add_option("--activation", it_args.activation)->required();
    cmd_it->add_option("--sigma-b", it_args.sigma_b)->required();
    cmd_it->add_option("--sigma-w", it_args.sigma_w)->required();
    cmd_it->add_option("--c0", it_c0)->required();
    cmd_it->add_option("--depth", it_depth)->required();
    cmd_it->add_flag("--layerwise", it_layerwise, "exact joint recursion instead of c <- f(c)");
    cmd_it->add_option("--qa0", it_qa0, "initial variance of input a (layerwise)");
    cmd_it->add_option("--qb0", it_qb0, "initial variance of input b (layerwise)");
    double it_q0 = -1.0;
    cmd_it->add_option("--q0", it_q0, "fixed-point variance (homogeneous; default: solve)");

    // ---- depth-scales ----
    auto* cmd_ds = app.add_subcommand("depth-scales", "chi1, alpha and the depth scales");
    CommonArgs ds_args;
    cmd_ds->add_option("--activation", ds_args.activation)->required();
    cmd_ds->add_option("--sigma-b", ds_args.sigma_b)->required();
    cmd_ds->add_option("--sigma-w", ds_args.sigma_w)->required();

    // ---- relu-rate ----
    auto* cmd_rate = app.add_subcommand("relu-rate", "l^2 (1 - c^l) for the ReLU map at its EOC");
    int rate_depth = 100000;
    double rate_c0 = 0.1;
    cmd_rate->add_option("--depth", rate_depth)->required();
    cmd_rate->add_option("--c0", rate_c0);

    // ---- check ----
    auto* cmd_check = app.add_subcommand("check", "verify the good-activation conditions");
    std::string check_act, check_grid;
    int check_xgrid = 101;
    cmd_check->add_option("--activation", check_act)->required();
    cmd_check->add_option("--sigma-b-grid", check_grid, "LO:HI:N")->required();
    cmd_check->add_option("--x-grid", check_xgrid);

    // ---- simulate ----
    auto* cmd_sim = app.add_subcommand("simulate", "finite-width Monte-Carlo forward pass");
    CommonArgs sim_args;
    std::string sim_widths = "500";
    int sim_depth = 10, sim_reps = 50, sim_dim = 10;
    std::uint64_t sim_seed = 0;
    unsigned sim_threads = 1;
    double sim_q0 = 1.0, sim_c0 = 0.3;
    std::string sim_field;
    bool sim_field_stats = false;
    cmd_sim->add_option("--activation", sim_args.activation)->required();
    cmd_sim->add_option("--sigma-b", sim_args.sigma_b)->required();
    cmd_sim->add_option("--sigma-w", sim_args.sigma_w)->required();
    cmd_sim->add_option("--widths", sim_widths, "single width or comma list");
    cmd_sim->add_option("--depth", sim_depth);
    cmd_sim->add_option("--reps", sim_reps);
    cmd_sim->add_option("--seed", sim_seed);
    cmd_sim->add_option("--threads", sim_threads);
    cmd_sim->add_option("--q0", sim_q0, "layer-1 variance of the probe inputs");
    cmd_sim->add_option("--c0", sim_c0, "layer-1 correlation of the probe inputs");
    cmd_sim->add_option("--input-dim", sim_dim);
    cmd_sim->add_option("--field", sim_field, "2-D output field over LO:HI:N x LO:HI:N");
    cmd_sim->add_flag("--field-stats", sim_field_stats, "JSON summary instead of the field CSV");

    // ---- sup-dev ----
    auto* cmd_sup = app.add_subcommand("sup-dev", "sup |f - id| along the EOC");
    std::string sup_act, sup_grid;
    int sup_xgrid = 101;
    cmd_sup->add_option("--activation", sup_act)->required();
    cmd_sup->add_option("--sigma-b-grid", sup_grid, "LO:HI:N")->required();
    cmd_sup->add_option("--x-grid", sup_xgrid);

    // ---- hardtanh-var ----
    auto* cmd_ht = app.add_subcommand("hardtanh-var",
                                      "hard-tanh variance map: closed forms vs quadrature");
    std::string ht_grid = "0.1:10:25";
    cmd_ht->add_option("--x-grid", ht_grid, "LO:HI:N");

    // ---- bounds ----
    auto* cmd_b = app.add_subcommand("bounds", "contraction bounds M_phi and C_phi,delta");
    std::string b_act;
    double b_delta = 0.5, b_xmax = 10.0;
    int b_grid = 400, b_cgrid = 60;
    cmd_b->add_option("--activation", b_act)->required();
    cmd_b->add_option("--delta", b_delta);
    cmd_b->add_option("--x-max", b_xmax);
    cmd_b->add_option("--grid", b_grid, "grid for M_phi");
    cmd_b->add_option("--c-grid", b_cgrid, "grid for C_phi,delta");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    if (cmd_eoc->parsed()) {
        const Activation phi = make_activation(eoc_act);
        const auto grid = grid_values(parse_grid(eoc_grid));
        const EocCurve curve = eoc_curve(grid, phi, cfg);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& p : curve.points) j.push_back(to_json(p));
        print_json(j);
        for (const auto& d : curve.diagnostics) std::fprintf(stderr, "note: %s\n", d.c_str());
        return 0;
    }

    if (cmd_fp->parsed()) {
        const Activation phi = make_activation(fp_args.activation);
        const MeanFieldParams p{fp_args.sigma_b * fp_args.sigma_b,
                                fp_args.sigma_w * fp_args.sigma_w};
        print_json(to_json(variance_fixed_point(p, phi, fp_x0, cfg), fp_x0));
        return 0;
    }

    if (cmd_corr->parsed()) {
        const Activation phi = make_activation(corr_args.activation);
        double sigma_w = corr_args.sigma_w, q = corr_q;
        if (corr_on_eoc) {
            const EocPoint pt = eoc_solve(corr_args.sigma_b, phi, cfg);
            if (pt.status == EocStatus::not_found) {
                throw NumericError("corr-fn: no EOC point at sigma_b = " +
                                   fmt17(corr_args.sigma_b) + " (" + pt.diagnostics + ")");
            }
            sigma_w = pt.sigma_w;
            if (q <= 0.0) q = pt.q;
        }
        const MeanFieldParams p{corr_args.sigma_b * corr_args.sigma_b, sigma_w * sigma_w};
        if (q <= 0.0) {
            const FixedPointResult fp = variance_fixed_point(p, phi, 1e-8, cfg);
            if (fp.status != FixedPointStatus::converged || !(fp.q > 0.0)) {
                throw NumericError("corr-fn: no positive fixed-point variance; pass --q");
            }
            q = fp.q;
        }
        if (corr_grid < 2) throw ConfigError("corr-fn: --grid must be >= 2");
        std::puts("x,f,fprime,fsecond");
        for (int i = 0; i < corr_grid; ++i) {
            const double x = static_cast<double>(i) / (corr_grid - 1);
            print_csv_row({x, correlation_map(x, q, p, phi, cfg),
                           correlation_map_derivative(x, q, p, phi, cfg),
                           correlation_map_second(x, q, p, phi, cfg).value});
        }
        return 0;
    }

    if (cmd_it->parsed()) {
        const Activation phi = make_activation(it_args.activation);
        const MeanFieldParams p{it_args.sigma_b * it_args.sigma_b,
                                it_args.sigma_w * it_args.sigma_w};
        if (it_depth < 1) throw ConfigError("iterate: --depth must be >= 1");
        std::puts("l,q_a,q_b,c,one_minus_c");
        if (it_layerwise) {
            KernelState s{1, it_qa0, it_qb0, it_c0};
            print_csv_row({1.0, s.q_a, s.q_b, s.c_ab, 1.0 - s.c_ab});
            if (it_depth > 1) {
                const KernelTrajectory traj =
                    iterate_kernel(s, it_depth - 1, p, phi, IterateMode::layerwise, cfg);
                for (const auto& st : traj.states) {
                    print_csv_row({static_cast<double>(st.layer), st.q_a, st.q_b, st.c_ab,
                                   1.0 - st.c_ab});
                }
                if (traj.diverged) std::fprintf(stderr, "note: variance diverged, truncated\n");
            }
        } else {
            double q = it_q0;
            if (q <= 0.0) {
                const FixedPointResult fp = variance_fixed_point(p, phi, 1e-8, cfg);
                if (fp.status != FixedPointStatus::converged || !(fp.q > 0.0)) {
                    throw NumericError("iterate: no positive fixed-point variance; pass --q0");
                }
                q = fp.q;
            }
            const auto gaps = homogeneous_gap_sequence(it_c0, it_depth, q, p, phi, cfg);
            for (int l = 0; l < it_depth; ++l) {
                print_csv_row({static_cast<double>(l + 1), q, q, 1.0 - gaps[l], gaps[l]});
            }
        }
        return 0;
    }

    if (cmd_ds->parsed()) {
        const Activation phi = make_activation(ds_args.activation);
        const MeanFieldParams p{ds_args.sigma_b * ds_args.sigma_b,
                                ds_args.sigma_w * ds_args.sigma_w};
        double q;
        if (phi.is_relu_like() && ds_args.sigma_b == 0.0) {
            q = 1.0;  // probe convention: every variance is fixed on this EOC
        } else {
            const FixedPointResult fp = variance_fixed_point(p, phi, 1e-8, cfg);
            if (fp.status != FixedPointStatus::converged) {
                throw NumericError("depth-scales: variance fixed point did not converge (" +
                                   to_string(fp.status) + ")");
            }
            q = fp.q;
        }
        nlohmann::json j = to_json(depth_scales(q, p, phi, cfg));
        j["q"] = q;
        print_json(j);
        return 0;
    }

    if (cmd_rate->parsed()) {
        if (rate_depth < 1) throw ConfigError("relu-rate: --depth must be >= 1");
        const auto gaps = relu_gap_sequence(rate_c0, rate_depth);
        const double constant = relu_rate_constant();
        std::puts("l,l2_one_minus_c,rate_constant");
        for (int l = 1; l <= rate_depth; ++l) {
            print_csv_row({static_cast<double>(l),
                           static_cast<double>(l) * static_cast<double>(l) * gaps[l - 1],
                           constant});
        }
        return 0;
    }

    if (cmd_check->parsed()) {
        const Activation phi = make_activation(check_act);
        const auto grid = grid_values(parse_grid(check_grid));
        print_json(to_json(check_conditions(phi, grid, check_xgrid, cfg)));
        return 0;
    }

    if (cmd_sim->parsed()) {
        SimConfig sc;
        sc.activation = make_activation(sim_args.activation);
        sc.params = {sim_args.sigma_b * sim_args.sigma_b, sim_args.sigma_w * sim_args.sigma_w};
        sc.replications = sim_reps;
        sc.seed = sim_seed;
        sc.threads = sim_threads;
        if (sim_widths.find(',') != std::string::npos) {
            std::string rest = sim_widths;
            while (!rest.empty()) {
                const auto pos = rest.find(',');
                sc.widths.push_back(std::stoi(rest.substr(0, pos)));
                rest = pos == std::string::npos ? "" : rest.substr(pos + 1);
            }
        } else {
            const int w = std::stoi(sim_widths);
            sc.widths.assign(sim_depth, w);
        }

        if (!sim_field.empty()) {
            sc.input_dim = 2;
            const GridSpec gs = parse_grid(sim_field);
            const FieldResult field = output_field(sc, {gs.lo, gs.hi, gs.n});
            if (sim_field_stats) {
                double mn = field.values[0], mx = field.values[0], sum = 0.0;
                for (double v : field.values) {
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                    sum += v;
                }
                const double mean = sum / field.values.size();
                double ss = 0.0;
                for (double v : field.values) ss += (v - mean) * (v - mean);
                const double sd = std::sqrt(ss / (field.values.size() - 1));
                nlohmann::json j;
                j["min"] = mn;
                j["max"] = mx;
                j["mean"] = mean;
                j["stddev"] = sd;
                j["rel_range"] = mean != 0.0 ? nlohmann::json((mx - mn) / std::abs(mean))
                                             : nlohmann::json(nullptr);
                print_json(j);
            } else {
                std::puts("x0,x1,y");
                for (int i = 0; i < gs.n; ++i) {
                    for (int j = 0; j < gs.n; ++j) {
                        print_csv_row({field.grid.coord(i), field.grid.coord(j), field.at(i, j)});
                    }
                }
            }
            return 0;
        }

        sc.input_dim = sim_dim;
        const auto pair = make_input_pair(sc.input_dim, sim_q0, sim_c0, sc.params);
        const SimResult res = simulate(sc, {pair.first, pair.second});
        std::puts("layer,q_a,q_a_se,q_b,q_b_se,c_ab,c_ab_se");
        for (std::size_t l = 0; l < res.layers.size(); ++l) {
            const LayerMoments& m = res.layers[l];
            print_csv_row({static_cast<double>(l + 1), m.q_a, m.q_a_se, m.q_b, m.q_b_se, m.c_ab,
                           m.c_ab_se});
        }
        if (!res.aborted_replications.empty()) {
            std::fprintf(stderr, "note: %zu replications aborted (non-finite)\n",
                         res.aborted_replications.size());
        }
        return 0;
    }

    if (cmd_sup->parsed()) {
        const Activation phi = make_activation(sup_act);
        const auto grid = grid_values(parse_grid(sup_grid));
        std::puts("sigma_b,sup_dev,bound,dev_minus_bound");
        for (double sb : grid) {
            const EocPoint pt = eoc_solve(sb, phi, cfg);
            if (pt.status == EocStatus::not_found) {
                throw NumericError("sup-dev: no EOC point at sigma_b = " + fmt17(sb));
            }
            const SupDeviation d = sup_deviation(phi, pt, sup_xgrid, cfg);
            print_csv_row({sb, d.sup_dev, d.bound, d.sup_dev - d.bound});
        }
        return 0;
    }

    if (cmd_ht->parsed()) {
        const Activation phi = make_activation("hard_tanh");
        const auto grid = grid_values(parse_grid(ht_grid));
        const MeanFieldParams unit{0.0, 1.0};
        std::puts("x,displayed,exact,quadrature,abs_err_exact,abs_err_displayed");
        for (double x : grid) {
            const HardTanhVariance v = hardtanh_variance_map(x, unit);
            const double quad = variance_map(x, unit, phi, cfg);
            print_csv_row({x, v.displayed, v.exact, quad, std::abs(v.exact - quad),
                           std::abs(v.displayed - quad)});
        }
        return 0;
    }

    if (cmd_b->parsed()) {
        const Activation phi = make_activation(b_act);
        nlohmann::json j;
        j["m_phi_sup"] = m_phi_sup(phi, b_xmax, b_grid, cfg);
        j["c_phi_sup"] = c_phi_sup(phi, b_delta, b_xmax, b_cgrid, cfg);
        j["delta"] = b_delta;
        j["x_max"] = b_xmax;
        j["m_grid"] = b_grid;
        j["c_grid"] = b_cgrid;
        print_json(j);
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const eoclab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "%s\n",
                      nlohmann::json{{"error", "domain"}, {"detail", e.what()}}.dump().c_str());
        return 3;
    } catch (const eoclab::NumericError& e) {
        std::fprintf(stderr, "%s\n",
                      nlohmann::json{{"error", "numeric"}, {"detail", e.what()}}.dump().c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n",
                      nlohmann::json{{"error", "internal"}, {"detail", e.what()}}.dump().c_str());
        return 3;
    }
}
