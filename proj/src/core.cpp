#include "memnet/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memnet/civil_time.hpp"

namespace memnet {

const char* errc_name(errc c) {
    switch (c) {
    case errc::invalid_config: return "invalid-config";
    case errc::missing_timestamps: return "missing-timestamps";
    case errc::invalid_node: return "invalid-node";
    case errc::invalid_graph: return "invalid-graph";
    case errc::invalid_series: return "invalid-series";
    case errc::invalid_activity: return "invalid-activity";
    case errc::invalid_window: return "invalid-window";
    case errc::invalid_pattern: return "invalid-pattern";
    case errc::invalid_cluster: return "invalid-cluster";
    case errc::undefined_modularity: return "undefined-modularity";
    case errc::generation_failed: return "generation-failed";
    case errc::parse_error: return "parse-error";
    case errc::unknown_node: return "unknown-node";
    case errc::write_error: return "write-error";
    }
    return "error";
}

temporal_graph::temporal_graph(std::size_t n_nodes, std::vector<edge> edges,
                               std::vector<double> series, std::size_t n_steps,
                               std::vector<std::int64_t> timestamps)
    : n_nodes_(n_nodes), n_steps_(n_steps), edges_(std::move(edges)), series_(std::move(series)),
      timestamps_(std::move(timestamps)) {
    if (n_steps_ < 2) fail(errc::invalid_series, "series length must be at least 2");
    if (series_.size() != n_nodes_ * n_steps_)
        fail(errc::invalid_series, "series size " + std::to_string(series_.size()) +
                                       " does not match " + std::to_string(n_nodes_) + "x" +
                                       std::to_string(n_steps_));
    for (double v : series_)
        if (!std::isfinite(v)) fail(errc::invalid_series, "non-finite series value");
    if (!timestamps_.empty()) {
        if (timestamps_.size() != n_steps_)
            fail(errc::invalid_series, "timestamps length does not match series length");
        for (std::size_t t = 1; t < timestamps_.size(); ++t)
            if (timestamps_[t] <= timestamps_[t - 1])
                fail(errc::invalid_series, "timestamps must be strictly increasing");
    }

    for (auto& [u, v] : edges_) {
        if (u == v) fail(errc::invalid_graph, "self-loop at node " + std::to_string(u));
        if (u >= n_nodes_ || v >= n_nodes_)
            fail(errc::invalid_graph, "edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        fail(errc::invalid_graph, "duplicate edge");

    adj_offsets_.assign(n_nodes_ + 1, 0);
    for (const auto& [u, v] : edges_) {
        ++adj_offsets_[u + 1];
        ++adj_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n_nodes_; ++i) adj_offsets_[i + 1] += adj_offsets_[i];
    adj_.resize(edges_.size() * 2);
    std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        adj_[cursor[u]++] = v;
        adj_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < n_nodes_; ++i)
        std::sort(adj_.begin() + adj_offsets_[i], adj_.begin() + adj_offsets_[i + 1]);
}

std::vector<window> slice_windows(std::size_t n_steps, std::size_t length) {
    if (length == 0) fail(errc::invalid_config, "window length must be positive");
    std::vector<window> out;
    for (std::size_t start = 0; start < n_steps; start += length)
        out.push_back({start, std::min(start + length, n_steps)});
    return out;
}

std::vector<window> slice_windows_monthly(const std::vector<std::int64_t>& timestamps) {
    if (timestamps.empty())
        fail(errc::missing_timestamps, "calendar window slicing requires timestamps");
    std::vector<window> out;
    std::size_t start = 0;
    std::int64_t key = civil::month_key(timestamps[0]);
    for (std::size_t t = 1; t < timestamps.size(); ++t) {
        const std::int64_t k = civil::month_key(timestamps[t]);
        if (k != key) {
            out.push_back({start, t});
            start = t;
            key = k;
        }
    }
    out.push_back({start, timestamps.size()});
    return out;
}

bool window_is_partial(const window& w, std::size_t n_steps, std::size_t fixed_length) {
    (void)n_steps;
    return w.length() < fixed_length;
}

bool window_is_partial_monthly(const window& w, const std::vector<std::int64_t>& timestamps,
                               std::int64_t step_seconds) {
    if (timestamps.empty())
        fail(errc::missing_timestamps, "partial-window check requires timestamps");
    // Full month: starts at the month's first instant and the step after the
    // last sample lands in the next month on its first instant.
    const std::int64_t first = timestamps[w.start];
    const civil::date_time f = civil::from_epoch(first);
    if (f.day != 1 || f.hour != 0 || f.minute != 0 || f.second != 0) return true;
    const std::int64_t after = timestamps[w.end - 1] + step_seconds;
    if (civil::month_key(after) == civil::month_key(timestamps[w.end - 1])) return true;
    const civil::date_time a = civil::from_epoch(after);
    return a.day != 1 || a.hour != 0 || a.minute != 0 || a.second != 0;
}

subgraph induced_subgraph(const temporal_graph& g, const std::vector<node_id>& keep) {
    std::vector<node_id> id_map = keep;
    std::sort(id_map.begin(), id_map.end());
    id_map.erase(std::unique(id_map.begin(), id_map.end()), id_map.end());
    for (node_id old : id_map)
        if (old >= g.n_nodes())
            fail(errc::invalid_node, "keep set references node " + std::to_string(old));

    std::vector<node_id> old_to_new(g.n_nodes(), static_cast<node_id>(-1));
    for (std::size_t i = 0; i < id_map.size(); ++i) old_to_new[id_map[i]] = static_cast<node_id>(i);

    std::vector<edge> edges;
    for (const auto& [u, v] : g.edges()) {
        const node_id nu = old_to_new[u];
        const node_id nv = old_to_new[v];
        if (nu != static_cast<node_id>(-1) && nv != static_cast<node_id>(-1))
            edges.emplace_back(nu, nv);
    }

    const std::size_t T = g.n_steps();
    std::vector<double> series(id_map.size() * T);
    for (std::size_t i = 0; i < id_map.size(); ++i) {
        const auto src = g.series(id_map[i]);
        std::copy(src.begin(), src.end(), series.begin() + i * T);
    }

    subgraph out;
    out.graph = temporal_graph(id_map.size(), std::move(edges), std::move(series), T,
                               g.timestamps());
    out.id_map = std::move(id_map);
    return out;
}

} // namespace memnet
