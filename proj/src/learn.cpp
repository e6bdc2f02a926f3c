#include "memnet/learn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memnet/parallel.hpp"

namespace memnet::learn {

void learn_config::validate() const {
    if (lambda < 0.0 || !std::isfinite(lambda)) fail(errc::invalid_config, "lambda must be >= 0");
    if (alpha < 0.0 || !std::isfinite(alpha)) fail(errc::invalid_config, "alpha must be >= 0");
    if (prune_below < 0.0 || !std::isfinite(prune_below))
        fail(errc::invalid_config, "prune-below must be >= 0");
}

std::vector<double> activity_row(std::span<const double> x, std::span<const std::uint8_t> mask) {
    if (x.size() != mask.size()) fail(errc::invalid_series, "series/mask length mismatch");
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = mask[t] ? x[t] : 0.0;
    return y;
}

activity_matrix activity(const temporal_graph& g, const filter::burst_profile& profile) {
    if (profile.n_nodes != g.n_nodes() || profile.n_steps != g.n_steps())
        fail(errc::invalid_series, "profile does not cover the graph");
    activity_matrix m;
    m.n_nodes = g.n_nodes();
    m.n_steps = g.n_steps();
    m.values.resize(m.n_nodes * m.n_steps);
    for (std::size_t i = 0; i < m.n_nodes; ++i) {
        const auto x = g.series(static_cast<node_id>(i));
        const std::uint8_t* k = profile.mask.data() + i * m.n_steps;
        double* y = m.values.data() + i * m.n_steps;
        for (std::size_t t = 0; t < m.n_steps; ++t) y[t] = k[t] ? x[t] : 0.0;
    }
    return m;
}

double similarity(double a, double b, similarity_kind kind) {
    return kernels::similarity_value(kind, a, b);
}

double memory_network::total_weight() const {
    double sum = 0.0;
    for (const auto& e : edges) sum += e.weight;
    return sum;
}

memory_network learn_window(const temporal_graph& g, const activity_matrix& acts,
                            const learn_config& cfg, window w) {
    cfg.validate();
    if (acts.n_nodes != g.n_nodes())
        fail(errc::invalid_window, "activity matrix does not cover the graph nodes");
    if (w.start >= w.end || w.end > acts.n_steps)
        fail(errc::invalid_window, "window [" + std::to_string(w.start) + ", " +
                                       std::to_string(w.end) + ") outside series of length " +
                                       std::to_string(acts.n_steps));
    if (cfg.similarity == similarity_kind::ratio) {
        // Only the window's columns enter the computation, so only they are
        // validated; a full-matrix scan would add O(NT) to every window.
        for (std::size_t i = 0; i < acts.n_nodes; ++i) {
            const auto row = acts.row(static_cast<node_id>(i));
            for (std::size_t t = w.start; t < w.end; ++t)
                if (row[t] < 0.0)
                    fail(errc::invalid_activity, "ratio similarity requires nonnegative activity");
        }
    }

    const auto& edges = g.edges();
    const std::size_t len = w.length();
    const auto& kern = kernels::active_table();
    std::vector<double> weights(edges.size());

#pragma omp parallel for schedule(static) num_threads(resolved_jobs())
    for (std::int64_t e = 0; e < static_cast<std::int64_t>(edges.size()); ++e) {
        const auto [u, v] = edges[e];
        const double* yi = acts.row(u).data() + w.start;
        const double* yj = acts.row(v).data() + w.start;
        const double acc =
            kernels::hebb_accumulate(kern, cfg.similarity, yi, yj, len, cfg.lambda, cfg.alpha);
        weights[e] = std::max(0.0, acc);
    }

    memory_network net;
    net.n_nodes = g.n_nodes();
    net.win = w;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (weights[e] > cfg.prune_below)
            net.edges.push_back({edges[e].first, edges[e].second, weights[e]});
    return net;
}

std::vector<memory_network> learn_all_windows(const temporal_graph& g,
                                              const activity_matrix& acts,
                                              const learn_config& cfg,
                                              std::span<const window> windows) {
    std::vector<memory_network> out(windows.size());
    // Exceptions must not escape the parallel region; the first one is
    // re-thrown afterwards, tagged with its window.
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolved_jobs())
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(windows.size()); ++i) {
        try {
            out[i] = learn_window(g, acts, cfg, windows[i]);
        } catch (const error& e) {
#pragma omp critical(memnet_learn_err)
            if (!first_error)
                first_error = std::make_exception_ptr(
                    error(e.code(), "window " + std::to_string(i) + ": " + e.what()));
        } catch (...) {
#pragma omp critical(memnet_learn_err)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

weighted_csr build_csr(const memory_network& net) {
    weighted_csr csr;
    csr.n_nodes = net.n_nodes;
    csr.offsets.assign(net.n_nodes + 1, 0);
    for (const auto& e : net.edges) {
        ++csr.offsets[e.u + 1];
        ++csr.offsets[e.v + 1];
    }
    for (std::size_t i = 0; i < net.n_nodes; ++i) csr.offsets[i + 1] += csr.offsets[i];
    csr.nbr.resize(net.edges.size() * 2);
    csr.weight.resize(net.edges.size() * 2);
    std::vector<std::size_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
    for (const auto& e : net.edges) {
        csr.nbr[cursor[e.u]] = e.v;
        csr.weight[cursor[e.u]++] = e.weight;
        csr.nbr[cursor[e.v]] = e.u;
        csr.weight[cursor[e.v]++] = e.weight;
    }
    // Neighbor lists sorted ascending so sparse/dense accumulation orders agree.
    std::vector<std::pair<node_id, double>> row;
    for (std::size_t i = 0; i < net.n_nodes; ++i) {
        const std::size_t lo = csr.offsets[i];
        const std::size_t hi = csr.offsets[i + 1];
        row.assign(hi - lo, {});
        for (std::size_t k = lo; k < hi; ++k) row[k - lo] = {csr.nbr[k], csr.weight[k]};
        std::sort(row.begin(), row.end());
        for (std::size_t k = lo; k < hi; ++k) {
            csr.nbr[k] = row[k - lo].first;
            csr.weight[k] = row[k - lo].second;
        }
    }
    return csr;
}

} // namespace memnet::learn
