#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "memnet/community.hpp"
#include "memnet/core.hpp"

namespace memnet::synth {

struct event_spec {
    std::size_t cluster_size = 0;
    window interval;              // within [0, n_steps)
    double amplitude = 10.0;      // burst strength in background-rate units
    std::size_t lag_per_hop = 0;  // onset delay per hop from the cluster root
};

struct synth_config {
    std::size_t n_nodes = 1000;
    std::size_t n_steps = 720;
    double background_rate = 1.0; // Poisson rate of ambient counts
    double avg_degree = 3.0;      // background random-graph density
    double intra_edge_prob = 0.3; // extra in-cluster edges beyond the spanning tree
    std::vector<event_spec> events;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ground_truth_event {
    std::vector<node_id> nodes;      // connected in the generated graph
    window interval;
    std::vector<std::size_t> onsets; // per node, aligned with nodes
};

struct ground_truth {
    std::vector<ground_truth_event> events;
};

struct synth_result {
    temporal_graph graph;
    ground_truth truth;
};

// Deterministic for a fixed seed. Planted clusters are disjoint connected
// subgraphs; planted nodes carry background counts plus a rounded
// amplitude-scaled burst profile (high-shoulder envelope peaking at the
// interval midpoint, clamped to zero near the interval ends) starting at
// their lagged onset.
synth_result generate(const synth_config& cfg);

struct detection_score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double peak_time_error = 0.0; // |reported peak - interval midpoint|; inf if unmatched
};

// Per event, the report cluster maximizing F1 over node sets (ties broken by
// smaller peak error, so the result is invariant under report reordering).
std::vector<detection_score> score_detection(const ground_truth& truth,
                                             std::span<const community::cluster_report> reports);

} // namespace memnet::synth
