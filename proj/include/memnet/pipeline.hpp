#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memnet/community.hpp"
#include "memnet/core.hpp"
#include "memnet/filter.hpp"
#include "memnet/learn.hpp"
#include "memnet/recall.hpp"

namespace memnet::pipeline {

struct config {
    filter::score_config score;   // defaults: zscore, c0=3, min_bursts=2
    learn::learn_config learn;    // defaults: lambda=0.5, alpha=0, ratio
    bool monthly = true;          // monthly windows need timestamps
    std::size_t window_length = 0;
    double resolution = 1.0;
    std::uint64_t seed = 42;
    std::size_t min_cluster = 2;  // smallest cluster that gets a report record
};

// Memory network re-indexed to the original node ids' "active" universe:
// exactly the nodes incident to a surviving edge, ordered by original id.
// Canonical across in-memory runs and network-file reloads, so community
// extraction is reproducible either way.
struct window_network {
    std::size_t id = 0;
    bool partial = false;
    learn::memory_network net;
    std::vector<node_id> id_map; // dense -> original id
};

window_network compact_to_original(const learn::memory_network& net,
                                   const std::vector<node_id>& filter_id_map);

struct window_output {
    window_network network;
    bool has_partition = false;  // false when the network has no edges
    community::partition parts;
    community::network_stats stats;
    std::vector<community::cluster_report> reports;
};

struct result {
    std::size_t total_nodes = 0;
    std::size_t kept_nodes = 0;
    std::vector<node_id> id_map; // filtered dense -> original
    std::vector<window> windows;
    std::vector<bool> partial;
    std::vector<window_output> outputs;
    std::vector<community::cluster_report> all_reports; // window asc, components first
};

// Louvain visit order per window derives from (seed, window_id) so windows
// are reproducible independently.
std::uint64_t louvain_seed(std::uint64_t seed, std::size_t window_id);

std::vector<window> make_windows(const temporal_graph& g, const config& cfg,
                                 std::vector<bool>* partial_out);

// Components + communities + activity reports for one window network.
window_output analyze_window(const window_network& wn, const temporal_graph& original,
                             const std::vector<std::string>& labels, const config& cfg);

// filter -> slice -> learn -> analyze, in memory.
result run(const temporal_graph& g, const std::vector<std::string>& labels, const config& cfg);

} // namespace memnet::pipeline
