#include "memnet/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <unordered_map>

#include "memnet/io.hpp"
#include "memnet/parallel.hpp"
#include "memnet/rng.hpp"

namespace memnet::pipeline {

std::uint64_t louvain_seed(std::uint64_t seed, std::size_t window_id) {
    return rng::derive_seed(seed, 0x10000 + window_id);
}

window_network compact_to_original(const learn::memory_network& net,
                                   const std::vector<node_id>& filter_id_map) {
    window_network out;
    out.net.win = net.win;

    std::vector<node_id> originals;
    originals.reserve(net.edges.size() * 2);
    for (const auto& e : net.edges) {
        originals.push_back(filter_id_map[e.u]);
        originals.push_back(filter_id_map[e.v]);
    }
    std::sort(originals.begin(), originals.end());
    originals.erase(std::unique(originals.begin(), originals.end()), originals.end());

    std::unordered_map<node_id, node_id> to_dense;
    to_dense.reserve(originals.size());
    for (std::size_t i = 0; i < originals.size(); ++i)
        to_dense[originals[i]] = static_cast<node_id>(i);

    out.net.n_nodes = originals.size();
    out.net.edges.reserve(net.edges.size());
    // Weights are canonicalized to their export precision here so reports
    // computed in memory match reports recomputed from network files.
    for (const auto& e : net.edges) {
        node_id u = to_dense[filter_id_map[e.u]];
        node_id v = to_dense[filter_id_map[e.v]];
        if (u > v) std::swap(u, v);
        out.net.edges.push_back({u, v, io::canonical_weight(e.weight)});
    }
    std::sort(out.net.edges.begin(), out.net.edges.end(),
              [](const auto& a, const auto& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    out.id_map = std::move(originals);
    return out;
}

std::vector<window> make_windows(const temporal_graph& g, const config& cfg,
                                 std::vector<bool>* partial_out) {
    std::vector<window> windows;
    std::vector<bool> partial;
    if (cfg.monthly) {
        if (!g.has_timestamps())
            fail(errc::missing_timestamps, "monthly windows require timestamps (set --t0)");
        windows = slice_windows_monthly(g.timestamps());
        const std::int64_t step =
            g.timestamps().size() >= 2 ? g.timestamps()[1] - g.timestamps()[0] : 86400;
        for (const auto& w : windows)
            partial.push_back(window_is_partial_monthly(w, g.timestamps(), step));
    } else {
        windows = slice_windows(g.n_steps(), cfg.window_length);
        for (const auto& w : windows)
            partial.push_back(window_is_partial(w, g.n_steps(), cfg.window_length));
    }
    if (partial_out != nullptr) *partial_out = partial;
    return windows;
}

namespace {

std::vector<double> raw_cluster_sum(std::span<const node_id> nodes, const temporal_graph& g,
                                    window win) {
    std::vector<double> sum(win.length(), 0.0);
    for (const node_id i : nodes) {
        const auto x = g.series(i);
        for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += x[win.start + t];
    }
    return sum;
}

community::cluster_report make_record(const window_network& wn, const temporal_graph& original,
                                      const std::vector<std::string>& labels,
                                      const std::string& kind, std::int32_t cluster_id, double q,
                                      std::vector<node_id> original_nodes) {
    community::cluster_report rep;
    rep.window_id = wn.id;
    rep.win = wn.net.win;
    rep.partial = wn.partial;
    rep.kind = kind;
    rep.cluster_id = cluster_id;
    rep.q = q;
    std::sort(original_nodes.begin(), original_nodes.end());
    rep.nodes = std::move(original_nodes);
    if (!labels.empty())
        for (const node_id v : rep.nodes)
            rep.labels.push_back(v < labels.size() ? labels[v] : "");

    rep.activity_raw = raw_cluster_sum(rep.nodes, original, rep.win);
    rep.activity = rep.activity_raw;
    const double peak = *std::max_element(rep.activity.begin(), rep.activity.end());
    if (peak > 0.0)
        for (double& v : rep.activity) v = v / peak * 100.0;
    const auto arg =
        std::max_element(rep.activity_raw.begin(), rep.activity_raw.end()) -
        rep.activity_raw.begin();
    rep.peak_time = rep.win.start + static_cast<std::size_t>(arg);
    return rep;
}

} // namespace

window_output analyze_window(const window_network& wn, const temporal_graph& original,
                             const std::vector<std::string>& labels, const config& cfg) {
    window_output out;
    out.network = wn;
    const auto& net = out.network.net;

    const auto components = community::connected_components(net);
    const bool has_weight = !net.edges.empty() && net.total_weight() > 0.0;

    if (has_weight) {
        // Component structure as a partition, for the per-component Q.
        std::vector<std::int32_t> comp_assign(net.n_nodes, 0);
        for (std::size_t c = 0; c < components.size(); ++c)
            for (const node_id v : components[c]) comp_assign[v] = static_cast<std::int32_t>(c);
        const double comp_q = community::modularity(net, comp_assign, cfg.resolution);

        for (std::size_t c = 0; c < components.size(); ++c) {
            if (components[c].size() < cfg.min_cluster) continue;
            std::vector<node_id> orig;
            for (const node_id v : components[c]) orig.push_back(out.network.id_map[v]);
            out.reports.push_back(make_record(out.network, original, labels, "component",
                                              static_cast<std::int32_t>(c), comp_q,
                                              std::move(orig)));
        }

        out.parts = community::louvain(net, cfg.resolution, louvain_seed(cfg.seed, wn.id));
        out.has_partition = true;
        std::vector<std::vector<node_id>> groups(out.parts.n_communities);
        for (std::size_t v = 0; v < net.n_nodes; ++v)
            groups[out.parts.assignment[v]].push_back(static_cast<node_id>(v));
        for (std::size_t c = 0; c < groups.size(); ++c) {
            if (groups[c].size() < cfg.min_cluster) continue;
            std::vector<node_id> orig;
            for (const node_id v : groups[c]) orig.push_back(out.network.id_map[v]);
            out.reports.push_back(make_record(out.network, original, labels, "community",
                                              static_cast<std::int32_t>(c), out.parts.modularity,
                                              std::move(orig)));
        }
        out.stats = community::compute_stats(net, out.parts);
    } else {
        out.has_partition = false;
        out.stats.n_nodes = net.n_nodes;
        out.stats.n_edges = 0;
        out.stats.modularity = 0.0;
    }
    return out;
}

result run(const temporal_graph& g, const std::vector<std::string>& labels, const config& cfg) {
    cfg.score.validate();
    cfg.learn.validate();

    result res;
    res.total_nodes = g.n_nodes();

    auto filtered = filter::filter_potential(g, cfg.score);
    res.kept_nodes = filtered.id_map.size();
    res.id_map = filtered.id_map;

    res.windows = make_windows(g, cfg, &res.partial);

    const auto acts = learn::activity(filtered.graph, filtered.profile);
    const auto nets = learn::learn_all_windows(filtered.graph, acts, cfg.learn, res.windows);

    res.outputs.resize(nets.size());
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolved_jobs())
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(nets.size()); ++i) {
        try {
            window_network wn = compact_to_original(nets[i], filtered.id_map);
            wn.id = static_cast<std::size_t>(i);
            wn.partial = res.partial[i];
            res.outputs[i] = analyze_window(wn, g, labels, cfg);
        } catch (const error& e) {
#pragma omp critical(memnet_pipeline_err)
            if (!first_error)
                first_error = std::make_exception_ptr(
                    error(e.code(), "window " + std::to_string(i) + ": " + e.what()));
        } catch (...) {
#pragma omp critical(memnet_pipeline_err)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    for (const auto& out : res.outputs)
        for (const auto& rep : out.reports) res.all_reports.push_back(rep);
    return res;
}

} // namespace memnet::pipeline
