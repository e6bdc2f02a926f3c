#include "memnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include "memnet/rng.hpp"

namespace memnet::community {

std::vector<std::vector<node_id>> connected_components(const learn::memory_network& net) {
    const std::size_t n = net.n_nodes;
    std::vector<node_id> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](node_id x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : net.edges) {
        if (e.weight <= 0.0) continue;
        const node_id ru = find(e.u);
        const node_id rv = find(e.v);
        if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    }

    std::vector<std::vector<node_id>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(static_cast<node_id>(i))].push_back(static_cast<node_id>(i));
    std::vector<std::vector<node_id>> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return out;
}

double modularity(const learn::memory_network& net, std::span<const std::int32_t> assignment,
                  double resolution) {
    if (assignment.size() != net.n_nodes)
        fail(errc::invalid_cluster, "assignment does not cover the network");
    const double m = net.total_weight();
    if (m <= 0.0) fail(errc::undefined_modularity, "network has zero total weight");

    std::int32_t max_c = -1;
    for (std::int32_t c : assignment) max_c = std::max(max_c, c);
    std::vector<double> internal(max_c + 1, 0.0); // 2x intra-community weight
    std::vector<double> total(max_c + 1, 0.0);    // weighted degree sum per community
    for (const auto& e : net.edges) {
        const std::int32_t cu = assignment[e.u];
        const std::int32_t cv = assignment[e.v];
        total[cu] += e.weight;
        total[cv] += e.weight;
        if (cu == cv) internal[cu] += 2.0 * e.weight;
    }
    const double two_m = 2.0 * m;
    double q = 0.0;
    for (std::int32_t c = 0; c <= max_c; ++c) {
        const double frac_tot = total[c] / two_m;
        q += internal[c] / two_m - resolution * frac_tot * frac_tot;
    }
    return q;
}

namespace {

// Flat weighted graph used during Louvain passes; rebuilt at each
// aggregation level. Self-loop weight accumulates merged intra-edges.
struct level_graph {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;
    std::vector<node_id> nbr;
    std::vector<double> w;
    std::vector<double> self_loop;
    std::vector<double> degree; // incident weight incl. 2x self-loop
    double two_m = 0.0;
};

level_graph from_network(const learn::memory_network& net) {
    level_graph g;
    g.n = net.n_nodes;
    learn::weighted_csr csr = learn::build_csr(net);
    g.offsets = std::move(csr.offsets);
    g.nbr = std::move(csr.nbr);
    g.w = std::move(csr.weight);
    g.self_loop.assign(g.n, 0.0);
    g.degree.assign(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = g.offsets[i]; k < g.offsets[i + 1]; ++k) g.degree[i] += g.w[k];
    g.two_m = std::accumulate(g.degree.begin(), g.degree.end(), 0.0);
    return g;
}

// One pass of local moves; returns true when at least one node moved.
bool local_moves(const level_graph& g, std::vector<std::int32_t>& comm,
                 std::vector<double>& comm_total, double resolution, rng::engine& rng_eng) {
    std::vector<node_id> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    rng::shuffle(order, rng_eng);

    std::vector<double> weight_to(g.n, 0.0);
    std::vector<std::int32_t> touched;
    bool any_move = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (const node_id v : order) {
            const std::int32_t old_c = comm[v];
            touched.clear();
            for (std::size_t k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
                const std::int32_t c = comm[g.nbr[k]];
                if (weight_to[c] == 0.0) touched.push_back(c);
                weight_to[c] += g.w[k];
            }
            if (weight_to[old_c] == 0.0) touched.push_back(old_c);

            comm_total[old_c] -= g.degree[v];
            // Gain of joining community c (constant terms dropped):
            //   weight_to[c] - resolution * degree(v) * comm_total[c] / 2m
            // Moves need a strict improvement margin so passes terminate.
            std::int32_t best_c = old_c;
            double best_gain = weight_to[old_c] - resolution * g.degree[v] * comm_total[old_c] / g.two_m;
            for (const std::int32_t c : touched) {
                if (c == old_c) continue;
                const double gain =
                    weight_to[c] - resolution * g.degree[v] * comm_total[c] / g.two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            comm_total[best_c] += g.degree[v];
            if (best_c != old_c) {
                comm[v] = best_c;
                improved = true;
                any_move = true;
            }
            for (const std::int32_t c : touched) weight_to[c] = 0.0;
        }
    }
    return any_move;
}

level_graph aggregate(const level_graph& g, const std::vector<std::int32_t>& comm,
                      std::size_t n_comms) {
    // Collect edges between communities (u <= v canonical).
    std::vector<std::map<node_id, double>> rows(n_comms);
    std::vector<double> self(n_comms, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        const auto ci = static_cast<node_id>(comm[i]);
        self[ci] += g.self_loop[i];
        for (std::size_t k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
            const auto cj = static_cast<node_id>(comm[g.nbr[k]]);
            if (ci < cj)
                rows[ci][cj] += g.w[k];
            else if (ci == cj)
                self[ci] += g.w[k] / 2.0;
        }
    }
    level_graph out;
    out.n = n_comms;
    out.self_loop = std::move(self);
    out.offsets.assign(n_comms + 1, 0);
    std::vector<std::map<node_id, double>> sym(n_comms);
    for (std::size_t u = 0; u < n_comms; ++u)
        for (const auto& [v, w] : rows[u]) {
            sym[u][v] += w;
            sym[v][static_cast<node_id>(u)] += w;
        }
    for (std::size_t u = 0; u < n_comms; ++u) out.offsets[u + 1] = out.offsets[u] + sym[u].size();
    out.nbr.resize(out.offsets[n_comms]);
    out.w.resize(out.offsets[n_comms]);
    for (std::size_t u = 0; u < n_comms; ++u) {
        std::size_t k = out.offsets[u];
        for (const auto& [v, w] : sym[u]) {
            out.nbr[k] = v;
            out.w[k++] = w;
        }
    }
    out.degree.assign(n_comms, 0.0);
    for (std::size_t i = 0; i < n_comms; ++i) {
        for (std::size_t k = out.offsets[i]; k < out.offsets[i + 1]; ++k)
            out.degree[i] += out.w[k];
        out.degree[i] += 2.0 * out.self_loop[i];
    }
    out.two_m = std::accumulate(out.degree.begin(), out.degree.end(), 0.0);
    return out;
}

// Renumber communities to dense ids ordered by first appearance over node ids.
std::size_t densify(std::vector<std::int32_t>& comm) {
    std::vector<std::int32_t> remap(comm.size(), -1);
    std::int32_t next = 0;
    for (auto& c : comm) {
        if (remap[c] == -1) remap[c] = next++;
        c = remap[c];
    }
    return static_cast<std::size_t>(next);
}

} // namespace

partition louvain(const learn::memory_network& net, double resolution, std::uint64_t seed) {
    if (net.total_weight() <= 0.0)
        fail(errc::undefined_modularity, "louvain requires positive total weight");
    if (resolution <= 0.0 || !std::isfinite(resolution))
        fail(errc::invalid_config, "resolution must be > 0");

    rng::engine rng_eng(seed);
    level_graph g = from_network(net);

    // node -> community at the finest level, composed across aggregations
    std::vector<std::int32_t> assignment(net.n_nodes);
    std::iota(assignment.begin(), assignment.end(), 0);

    while (true) {
        std::vector<std::int32_t> comm(g.n);
        std::iota(comm.begin(), comm.end(), 0);
        std::vector<double> comm_total = g.degree;
        const bool moved = local_moves(g, comm, comm_total, resolution, rng_eng);
        if (!moved) break;
        const std::size_t n_comms = densify(comm);
        for (auto& a : assignment) a = comm[a];
        if (n_comms == g.n) break;
        g = aggregate(g, comm, n_comms);
    }

    partition p;
    p.n_communities = densify(assignment);
    p.assignment = std::move(assignment);
    p.modularity = modularity(net, p.assignment, resolution);
    return p;
}

std::vector<double> cluster_activity(std::span<const node_id> nodes, const temporal_graph& g,
                                     window win) {
    if (nodes.empty()) fail(errc::invalid_cluster, "cluster is empty");
    if (win.end > g.n_steps() || win.start >= win.end)
        fail(errc::invalid_window, "window outside series");
    std::vector<double> sum(win.length(), 0.0);
    for (const node_id i : nodes) {
        if (i >= g.n_nodes()) fail(errc::invalid_node, "cluster node out of range");
        const auto x = g.series(i);
        for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += x[win.start + t];
    }
    const double peak = *std::max_element(sum.begin(), sum.end());
    if (peak > 0.0)
        for (double& v : sum) v = v / peak * 100.0;
    return sum;
}

network_stats compute_stats(const learn::memory_network& net, const partition& parts) {
    network_stats s;
    s.n_nodes = net.n_nodes;
    s.n_edges = net.edges.size();
    s.modularity = parts.modularity;

    std::vector<double> degree(net.n_nodes, 0.0);
    for (const auto& e : net.edges) {
        degree[e.u] += e.weight;
        degree[e.v] += e.weight;
    }
    for (const double d : degree) ++s.degree_hist[static_cast<std::int64_t>(std::floor(d))];

    std::vector<std::size_t> sizes(parts.n_communities, 0);
    for (const std::int32_t c : parts.assignment) ++sizes[c];
    for (const std::size_t sz : sizes) ++s.community_size_hist[sz];
    return s;
}

} // namespace memnet::community
