#pragma once

#include <span>
#include <vector>

#include "memnet/core.hpp"
#include "memnet/filter.hpp"
#include "memnet/kernels.hpp"

namespace memnet::learn {

using kernels::similarity_kind;

struct learn_config {
    double lambda = 0.5;      // sparsity: similarities must exceed this to reinforce
    double alpha = 0.0;       // forgetting: decay factor for sub-threshold similarity
    similarity_kind similarity = similarity_kind::ratio;
    double prune_below = 0.0; // edges with final weight <= this are dropped

    void validate() const;
};

// Burst-gated activity y = x .* k for every node, over the full series.
struct activity_matrix {
    std::size_t n_nodes = 0;
    std::size_t n_steps = 0;
    std::vector<double> values; // n_nodes x n_steps

    std::span<const double> row(node_id i) const {
        return {values.data() + static_cast<std::size_t>(i) * n_steps, n_steps};
    }
};

// Single-row activity; lengths must match.
std::vector<double> activity_row(std::span<const double> x, std::span<const std::uint8_t> mask);

activity_matrix activity(const temporal_graph& g, const filter::burst_profile& profile);

// One-value similarity with the both-zero convention. Negative inputs with
// the ratio measure are invalid-activity.
double similarity(double a, double b, similarity_kind kind);

struct weighted_edge {
    node_id u = 0;
    node_id v = 0;
    double weight = 0.0;
};

// Learned memory network for one window: a sparse symmetric nonnegative
// weight map restricted to the edges of the input graph.
struct memory_network {
    std::size_t n_nodes = 0;
    window win;
    std::vector<weighted_edge> edges; // u < v, sorted by (u, v)

    double total_weight() const;
};

// Accumulates the Hebbian update over the window for every input edge,
// clamps final weights at 0, and prunes weights <= cfg.prune_below.
// Parallel over edges.
memory_network learn_window(const temporal_graph& g, const activity_matrix& acts,
                            const learn_config& cfg, window w);

// One independent network per window (weights reset between windows).
std::vector<memory_network> learn_all_windows(const temporal_graph& g,
                                              const activity_matrix& acts,
                                              const learn_config& cfg,
                                              std::span<const window> windows);

// Symmetric adjacency (both directions) with neighbor lists sorted ascending.
struct weighted_csr {
    std::size_t n_nodes = 0;
    std::vector<std::size_t> offsets; // n_nodes + 1
    std::vector<node_id> nbr;
    std::vector<double> weight;
};

weighted_csr build_csr(const memory_network& net);

} // namespace memnet::learn
