#include "eoclab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <future>
#include <limits>
#include <stdexcept>

#include "eoclab/errors.hpp"
#include "eoclab/rng.hpp"

namespace eoclab {

namespace {

struct RepMoments {
    std::vector<double> q_a, q_b, c_ab;  // per layer; q_b/c_ab empty without a second input
    std::vector<std::vector<double>> finals;  // [input][neuron]
    bool aborted = false;
};

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// One forward pass with fresh weights from the replication's own substream.
// Sampling order is fixed (per layer: weights row-major, then biases), so a
// replication's draw never depends on scheduling.
RepMoments run_replication(const SimConfig& cfg, const std::vector<std::vector<double>>& inputs,
                           int rep) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(rep));
    const int n_in = static_cast<int>(inputs.size());
    const int L = static_cast<int>(cfg.widths.size());
    const double sb = std::sqrt(cfg.params.sigma_b2);

    RepMoments out;
    out.q_a.reserve(L);

    std::vector<double> prev;  // post-activations of the previous layer, [fan_in * n_in]
    int fan_in = cfg.input_dim;
    prev.resize(static_cast<std::size_t>(fan_in) * n_in);
    for (int k = 0; k < n_in; ++k) {
        for (int j = 0; j < fan_in; ++j) prev[static_cast<std::size_t>(j) * n_in + k] = inputs[k][j];
    }

    std::vector<double> cur;
    for (int l = 0; l < L; ++l) {
        const int width = cfg.widths[l];
        const double wsd = std::sqrt(cfg.params.sigma_w2 / fan_in);
        cur.assign(static_cast<std::size_t>(width) * n_in, 0.0);
        for (int i = 0; i < width; ++i) {
            double* yi = &cur[static_cast<std::size_t>(i) * n_in];
            for (int j = 0; j < fan_in; ++j) {
                const double wij = wsd * rng.next_normal();
                const double* pj = &prev[static_cast<std::size_t>(j) * n_in];
                for (int k = 0; k < n_in; ++k) yi[k] += wij * pj[k];
            }
        }
        for (int i = 0; i < width; ++i) {
            const double bi = sb * rng.next_normal();
            double* yi = &cur[static_cast<std::size_t>(i) * n_in];
            for (int k = 0; k < n_in; ++k) yi[k] += bi;
        }
        if (!all_finite(cur)) {
            out.aborted = true;
            return out;
        }

        double qa = 0.0, qb = 0.0, cross = 0.0;
        for (int i = 0; i < width; ++i) {
            const double* yi = &cur[static_cast<std::size_t>(i) * n_in];
            qa += yi[0] * yi[0];
            if (n_in >= 2) {
                qb += yi[1] * yi[1];
                cross += yi[0] * yi[1];
            }
        }
        out.q_a.push_back(qa / width);
        if (n_in >= 2) {
            out.q_b.push_back(qb / width);
            const double denom = std::sqrt((qa / width) * (qb / width));
            out.c_ab.push_back(denom > 0.0 ? (cross / width) / denom : 0.0);
        }

        if (l + 1 < L) {
            prev.resize(cur.size());
            for (std::size_t i = 0; i < cur.size(); ++i) prev[i] = cfg.activation.value(cur[i]);
            fan_in = width;
        }
    }

    out.finals.assign(n_in, std::vector<double>(cfg.widths.back()));
    const int last = cfg.widths.back();
    for (int k = 0; k < n_in; ++k) {
        for (int i = 0; i < last; ++i) {
            out.finals[k][i] = cur[static_cast<std::size_t>(i) * n_in + k];
        }
    }
    return out;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe replication_stats(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

void validate(const SimConfig& cfg, const std::vector<std::vector<double>>& inputs) {
    if (cfg.widths.empty()) throw ConfigError("simulate: widths must be nonempty");
    for (int w : cfg.widths) {
        if (w < 1) throw ConfigError("simulate: widths must be >= 1");
    }
    if (cfg.replications < 1) throw ConfigError("simulate: replications must be >= 1");
    if (inputs.empty()) throw ConfigError("simulate: inputs must be nonempty");
    for (const auto& a : inputs) {
        if (static_cast<int>(a.size()) != cfg.input_dim) {
            throw ConfigError("simulate: every input must have dimension input_dim");
        }
    }
}

}  // namespace

SimResult simulate(const SimConfig& cfg, const std::vector<std::vector<double>>& inputs) {
    validate(cfg, inputs);
    const int R = cfg.replications;
    std::vector<RepMoments> reps(R);

    const unsigned threads = std::max(1u, cfg.threads);
    if (threads == 1) {
        for (int r = 0; r < R; ++r) reps[r] = run_replication(cfg, inputs, r);
    } else {
        std::vector<std::future<void>> tasks;
        std::atomic<int> next{0};
        for (unsigned t = 0; t < threads; ++t) {
            tasks.push_back(std::async(std::launch::async, [&] {
                for (int r = next.fetch_add(1); r < R; r = next.fetch_add(1)) {
                    reps[r] = run_replication(cfg, inputs, r);
                }
            }));
        }
        for (auto& f : tasks) f.get();
    }

    SimResult res;
    const int L = static_cast<int>(cfg.widths.size());
    res.layers.resize(L);
    const bool pair = inputs.size() >= 2;
    for (int l = 0; l < L; ++l) {
        std::vector<double> qa, qb, c;
        for (int r = 0; r < R; ++r) {
            if (reps[r].aborted) continue;
            qa.push_back(reps[r].q_a[l]);
            if (pair) {
                qb.push_back(reps[r].q_b[l]);
                c.push_back(reps[r].c_ab[l]);
            }
        }
        if (qa.empty()) throw NumericError("simulate: every replication aborted");
        const MeanSe a = replication_stats(qa);
        res.layers[l].q_a = a.mean;
        res.layers[l].q_a_se = a.se;
        if (pair) {
            const MeanSe b = replication_stats(qb);
            const MeanSe cc = replication_stats(c);
            res.layers[l].q_b = b.mean;
            res.layers[l].q_b_se = b.se;
            res.layers[l].c_ab = cc.mean;
            res.layers[l].c_ab_se = cc.se;
        }
    }
    res.final_outputs.reserve(R);
    for (int r = 0; r < R; ++r) {
        if (reps[r].aborted) {
            res.aborted_replications.push_back(r);
            res.final_outputs.emplace_back();  // keep replication indexing
        } else {
            res.final_outputs.push_back(std::move(reps[r].finals));
        }
    }
    return res;
}

FieldResult output_field(const SimConfig& cfg, const FieldGrid& grid) {
    if (cfg.input_dim != 2) throw ConfigError("output_field: input_dim must be 2");
    if (grid.n < 1) throw ConfigError("output_field: grid must be nonempty");
    std::vector<std::vector<double>> inputs;
    inputs.reserve(static_cast<std::size_t>(grid.n) * grid.n);
    for (int i = 0; i < grid.n; ++i) {
        for (int j = 0; j < grid.n; ++j) {
            inputs.push_back({grid.coord(i), grid.coord(j)});
        }
    }
    const RepMoments rep = run_replication(cfg, inputs, 0);
    if (rep.aborted) throw NumericError("output_field: non-finite pre-activation");
    FieldResult field;
    field.grid = grid;
    field.values.resize(inputs.size());
    for (std::size_t k = 0; k < inputs.size(); ++k) field.values[k] = rep.finals[k][0];
    return field;
}

RadialProfile radial_profile(const FieldResult& field, int bins) {
    if (bins < 1) throw ConfigError("radial_profile: bins must be >= 1");
    const FieldGrid& g = field.grid;
    double rmax = 0.0;
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            rmax = std::max(rmax, std::hypot(g.coord(i), g.coord(j)));
        }
    }
    if (rmax == 0.0) rmax = 1.0;
    std::vector<std::vector<double>> buckets(bins);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            const double r = std::hypot(g.coord(i), g.coord(j));
            const int b = std::min(bins - 1, static_cast<int>(r / rmax * bins));
            buckets[b].push_back(field.at(i, j));
        }
    }
    RadialProfile prof;
    double within_ss = 0.0;
    int within_n = 0;
    std::vector<double> means;
    for (int b = 0; b < bins; ++b) {
        if (buckets[b].empty()) continue;
        double sum = 0.0;
        for (double v : buckets[b]) sum += v;
        const double mean = sum / buckets[b].size();
        double ss = 0.0;
        for (double v : buckets[b]) ss += (v - mean) * (v - mean);
        RadialBin bin;
        bin.radius = (b + 0.5) * rmax / bins;
        bin.count = static_cast<int>(buckets[b].size());
        bin.mean = mean;
        bin.stddev = buckets[b].size() > 1 ? std::sqrt(ss / (buckets[b].size() - 1)) : 0.0;
        prof.bins.push_back(bin);
        within_ss += ss;
        within_n += bin.count;
        means.push_back(mean);
    }
    double across = 0.0;
    if (means.size() > 1) {
        double m = 0.0;
        for (double v : means) m += v;
        m /= means.size();
        for (double v : means) across += (v - m) * (v - m);
        across = std::sqrt(across / (means.size() - 1));
    }
    const double within = within_n > 1 ? std::sqrt(within_ss / (within_n - 1)) : 0.0;
    prof.collapse_ratio = across > 0.0 ? within / across
                                       : std::numeric_limits<double>::quiet_NaN();
    return prof;
}

std::vector<double> make_input(int dim, double q1, const MeanFieldParams& p) {
    if (dim < 1) throw ConfigError("make_input: dim must be >= 1");
    if (!(q1 > p.sigma_b2)) throw std::domain_error("make_input: q1 must exceed sigma_b^2");
    const double t = std::sqrt((q1 - p.sigma_b2) / p.sigma_w2);
    std::vector<double> a(dim, 0.0);
    a[0] = t * std::sqrt(static_cast<double>(dim));
    return a;
}

std::pair<std::vector<double>, std::vector<double>> make_input_pair(int dim, double q1, double c1,
                                                                    const MeanFieldParams& p) {
    if (dim < 2) throw ConfigError("make_input_pair: dim must be >= 2");
    if (!(q1 > p.sigma_b2)) throw std::domain_error("make_input_pair: q1 must exceed sigma_b^2");
    // layer-1 correlation c1 = (sigma_b^2 + sigma_w^2 t^2 gamma) / q1
    const double gamma = (c1 * q1 - p.sigma_b2) / (q1 - p.sigma_b2);
    if (std::abs(gamma) > 1.0) {
        throw std::domain_error("make_input_pair: requested c1 unreachable at this q1");
    }
    const double t = std::sqrt((q1 - p.sigma_b2) / p.sigma_w2);
    const double root_d = std::sqrt(static_cast<double>(dim));
    std::vector<double> a(dim, 0.0), b(dim, 0.0);
    a[0] = t * root_d;
    b[0] = t * root_d * gamma;
    b[1] = t * root_d * std::sqrt(1.0 - gamma * gamma);
    return {std::move(a), std::move(b)};
}

}  // namespace eoclab
