#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "memnet/error.hpp"

namespace memnet {

// Dense node index in [0, N). Filtering re-indexes; the accompanying id map
// translates back to the original ids.
using node_id = std::uint32_t;

struct window {
    std::size_t start = 0; // inclusive
    std::size_t end = 0;   // exclusive

    std::size_t length() const { return end - start; }
    bool contains(std::size_t t) const { return t >= start && t < end; }
    bool operator==(const window&) const = default;
};

using edge = std::pair<node_id, node_id>;

// Static undirected graph whose nodes carry one real-valued series each.
// Immutable after construction; safe to read from any number of threads.
class temporal_graph {
public:
    temporal_graph() = default;

    // edges are unordered pairs. Rejects self-loops, duplicate edges,
    // out-of-range endpoints, series of the wrong total size, non-finite
    // values, and timestamps whose length differs from n_steps.
    temporal_graph(std::size_t n_nodes, std::vector<edge> edges, std::vector<double> series,
                   std::size_t n_steps, std::vector<std::int64_t> timestamps = {});

    std::size_t n_nodes() const { return n_nodes_; }
    std::size_t n_edges() const { return edges_.size(); }
    std::size_t n_steps() const { return n_steps_; }

    // Normalized edge list: u < v, sorted ascending.
    const std::vector<edge>& edges() const { return edges_; }

    std::span<const double> series(node_id i) const {
        return {series_.data() + static_cast<std::size_t>(i) * n_steps_, n_steps_};
    }
    const std::vector<double>& series_data() const { return series_; }

    bool has_timestamps() const { return !timestamps_.empty(); }
    const std::vector<std::int64_t>& timestamps() const { return timestamps_; }

    std::span<const node_id> neighbors(node_id i) const {
        return {adj_.data() + adj_offsets_[i], adj_offsets_[i + 1] - adj_offsets_[i]};
    }

private:
    std::size_t n_nodes_ = 0;
    std::size_t n_steps_ = 0;
    std::vector<edge> edges_;
    std::vector<double> series_;            // n_nodes x n_steps, row major
    std::vector<std::int64_t> timestamps_;  // empty or length n_steps
    std::vector<std::size_t> adj_offsets_;  // n_nodes + 1
    std::vector<node_id> adj_;              // sorted per node
};

// Contiguous, non-overlapping windows covering [0, n_steps); a trailing
// partial window is kept. length == 0 is invalid-config.
std::vector<window> slice_windows(std::size_t n_steps, std::size_t length);

// Windows split at UTC calendar month boundaries of the timestamps.
// Empty timestamps is missing-timestamps.
std::vector<window> slice_windows_monthly(const std::vector<std::int64_t>& timestamps);

// True when the window does not span the full slot it was cut from: a
// trailing remainder for fixed-length slicing, or (for monthly slicing) a
// window that starts or ends inside a calendar month.
bool window_is_partial(const window& w, std::size_t n_steps, std::size_t fixed_length);
bool window_is_partial_monthly(const window& w, const std::vector<std::int64_t>& timestamps,
                               std::int64_t step_seconds);

struct subgraph {
    temporal_graph graph;
    std::vector<node_id> id_map; // new index -> old index
};

// Keeps exactly the given nodes (re-indexed densely, in ascending old-id
// order) and every edge whose both endpoints are kept. Series are copied
// unchanged. keep may be unsorted; out-of-range entries are invalid-node.
subgraph induced_subgraph(const temporal_graph& g, const std::vector<node_id>& keep);

} // namespace memnet
