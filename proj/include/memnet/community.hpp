#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "memnet/learn.hpp"

namespace memnet::community {

struct partition {
    std::vector<std::int32_t> assignment; // node -> community id, dense in [0, n_communities)
    std::size_t n_communities = 0;
    double modularity = 0.0;
};

// Maximal connected sets under the network's (strictly positive) weights.
// Ordered by decreasing size, ties by smallest member id; members ascending.
std::vector<std::vector<node_id>> connected_components(const learn::memory_network& net);

// Weighted Newman modularity of an assignment, with a resolution parameter
// scaling the null-model term. Zero total weight is undefined-modularity.
double modularity(const learn::memory_network& net, std::span<const std::int32_t> assignment,
                  double resolution = 1.0);

// Greedy modularity optimization (local moves + aggregation). Deterministic
// for a fixed seed; the node visit order is the only randomized element.
partition louvain(const learn::memory_network& net, double resolution = 1.0,
                  std::uint64_t seed = 1);

// Sum of the cluster's raw series over the window, scaled so the maximum is
// 100; an identically-zero sum stays zero. Empty cluster is invalid-cluster.
std::vector<double> cluster_activity(std::span<const node_id> nodes, const temporal_graph& g,
                                     window win);

struct network_stats {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double modularity = 0.0;
    std::map<std::int64_t, std::size_t> degree_hist;          // floor(weighted degree) -> count
    std::map<std::size_t, std::size_t> community_size_hist;   // size -> count
};

network_stats compute_stats(const learn::memory_network& net, const partition& parts);

// One report record per extracted cluster (connected component or Louvain
// community); the schema consumed by io::export_report.
struct cluster_report {
    std::size_t window_id = 0;
    window win;
    bool partial = false;
    std::string kind;            // "component" | "community"
    std::int32_t cluster_id = 0;
    double q = 0.0;              // modularity of the partition the cluster came from
    std::vector<node_id> nodes;  // original ids
    std::vector<std::string> labels;
    std::size_t peak_time = 0;   // absolute step index of the activity maximum
    std::vector<double> activity;     // normalized to [0, 100]
    std::vector<double> activity_raw; // plain sums
};

} // namespace memnet::community
