#pragma once

#include <cstdint>
#include <vector>

#include "eoclab/activation.hpp"
#include "eoclab/meanfield.hpp"

namespace eoclab {

// Finite-width forward simulation of a random fully connected network:
// weights N(0, sigma_w^2 / fan_in), biases N(0, sigma_b^2). Each replication
// draws its normals from an independent counter-RNG substream of (seed, rep),
// so results are bit-identical no matter how replications are scheduled.
struct SimConfig {
    std::vector<int> widths;  // N_1 .. N_L
    int input_dim = 2;
    MeanFieldParams params;
    Activation activation;
    int replications = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct LayerMoments {
    double q_a = 0.0, q_a_se = 0.0;
    double q_b = 0.0, q_b_se = 0.0;
    double c_ab = 0.0, c_ab_se = 0.0;
};

struct SimResult {
    std::vector<LayerMoments> layers;  // one per layer, pooled over neurons then replications
    // final-layer pre-activations: [replication][input][neuron]
    std::vector<std::vector<std::vector<double>>> final_outputs;
    std::vector<int> aborted_replications;  // non-finite pre-activation encountered
};

// Propagates the inputs through every replication and estimates per-layer
// second moments (q_a from inputs[0], q_b and c_ab from the pair 0/1 when a
// second input is given). Standard errors come from the replication-level
// spread.
SimResult simulate(const SimConfig& cfg, const std::vector<std::vector<double>>& inputs);

struct FieldGrid {
    double lo = -3.0;
    double hi = 3.0;
    int n = 50;

    double coord(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

struct FieldResult {
    FieldGrid grid;
    std::vector<double> values;  // row-major n x n, value(i,j) at (coord(i), coord(j))

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n + j]; }
};

// Single-draw scalar output (first neuron of the last layer) over a 2-D grid.
// Requires input_dim == 2; uses replication stream 0 of cfg.seed.
FieldResult output_field(const SimConfig& cfg, const FieldGrid& grid);

struct RadialBin {
    double radius = 0.0;  // bin midpoint
    int count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct RadialProfile {
    std::vector<RadialBin> bins;
    // pooled within-bin stddev / stddev of bin means; NaN when the across-bin
    // spread vanishes (constant field)
    double collapse_ratio = 0.0;
};

RadialProfile radial_profile(const FieldResult& field, int bins = 16);

// Input pair with exact layer-1 moments: q1 for both and correlation c1.
// Requires dim >= 2 and q1 > sigma_b^2.
std::pair<std::vector<double>, std::vector<double>> make_input_pair(
    int dim, double q1, double c1, const MeanFieldParams& p);

// Single input with layer-1 variance q1.
std::vector<double> make_input(int dim, double q1, const MeanFieldParams& p);

}  // namespace eoclab
