#include "memnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "memnet/rng.hpp"

namespace memnet::synth {

void synth_config::validate() const {
    if (n_nodes == 0 || n_steps < 2) fail(errc::invalid_config, "need n_nodes >= 1, n_steps >= 2");
    if (background_rate < 0.0 || avg_degree < 0.0 || intra_edge_prob < 0.0 ||
        intra_edge_prob > 1.0)
        fail(errc::invalid_config, "invalid background parameters");
    std::size_t planted = 0;
    for (const auto& ev : events) {
        if (ev.cluster_size < 1) fail(errc::invalid_config, "event cluster size must be >= 1");
        if (ev.cluster_size > n_nodes) fail(errc::invalid_config, "cluster larger than graph");
        if (ev.interval.start >= ev.interval.end || ev.interval.end > n_steps)
            fail(errc::invalid_config, "event interval outside [0, T)");
        if (ev.amplitude < 0.0) fail(errc::invalid_config, "amplitude must be >= 0");
        planted += ev.cluster_size;
    }
    if (planted > n_nodes)
        fail(errc::generation_failed, "planted clusters need " + std::to_string(planted) +
                                          " nodes but the graph has " + std::to_string(n_nodes));
}

namespace {

// Burst envelope over the event interval: a high shoulder (so every planted
// node clears the burst threshold on every active step, which keeps the
// per-step consensus total for associative recall) with a peak at the
// interval midpoint, and a hard clamp to zero near the interval ends.
double envelope(std::size_t t, const window& iv) {
    const double mid = (static_cast<double>(iv.start) + static_cast<double>(iv.end) - 1.0) / 2.0;
    const double half = static_cast<double>(iv.length()) / 2.0;
    const double tri = 1.0 - std::abs(static_cast<double>(t) - mid) / half;
    if (tri < 0.3) return 0.0;
    return std::sqrt(0.5 + 0.5 * tri);
}

} // namespace

synth_result generate(const synth_config& cfg) {
    cfg.validate();
    rng::engine structure_rng(rng::derive_seed(cfg.seed, 0));
    rng::engine noise_rng(rng::derive_seed(cfg.seed, 1));

    const std::size_t n = cfg.n_nodes;
    const std::size_t T = cfg.n_steps;

    // Disjoint cluster placement over a shuffled id pool.
    std::vector<node_id> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    rng::shuffle(pool, structure_rng);

    std::set<edge> edges;
    ground_truth truth;
    std::size_t cursor = 0;
    for (const auto& ev : cfg.events) {
        ground_truth_event gt;
        gt.interval = ev.interval;
        gt.nodes.assign(pool.begin() + cursor, pool.begin() + cursor + ev.cluster_size);
        cursor += ev.cluster_size;
        std::sort(gt.nodes.begin(), gt.nodes.end());

        // Random recursive tree keeps the cluster connected; extra edges
        // thicken it.
        std::vector<std::size_t> hop(ev.cluster_size, 0);
        for (std::size_t i = 1; i < ev.cluster_size; ++i) {
            const std::size_t p = rng::uniform_below(structure_rng, i);
            edges.insert({std::min(gt.nodes[i], gt.nodes[p]), std::max(gt.nodes[i], gt.nodes[p])});
            hop[i] = hop[p] + 1;
        }
        for (std::size_t i = 0; i < ev.cluster_size; ++i)
            for (std::size_t j = i + 1; j < ev.cluster_size; ++j)
                if (rng::uniform01(structure_rng) < cfg.intra_edge_prob)
                    edges.insert({gt.nodes[i], gt.nodes[j]});

        gt.onsets.resize(ev.cluster_size);
        for (std::size_t i = 0; i < ev.cluster_size; ++i)
            gt.onsets[i] = std::min(ev.interval.end, ev.interval.start + ev.lag_per_hop * hop[i]);
        truth.events.push_back(std::move(gt));
    }

    // Background G(n, p) via geometric skips over the linearized pair index.
    if (n > 1 && cfg.avg_degree > 0.0) {
        const double p = std::min(1.0, cfg.avg_degree / static_cast<double>(n - 1));
        const double log1mp = std::log1p(-p);
        const std::uint64_t n_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        std::uint64_t idx = 0;
        while (true) {
            const double u = rng::uniform01(structure_rng);
            if (p >= 1.0) {
                idx += 1;
            } else {
                idx += 1 + static_cast<std::uint64_t>(std::floor(std::log1p(-u) / log1mp));
            }
            if (idx > n_pairs) break;
            // pair index -> (u, v), row-major over u < v
            const std::uint64_t k = idx - 1;
            const auto uu = static_cast<std::uint64_t>(
                (2.0 * n - 1.0 - std::sqrt((2.0 * n - 1.0) * (2.0 * n - 1.0) - 8.0 * k)) / 2.0);
            std::uint64_t row = uu;
            // guard against sqrt rounding
            auto row_start = [&](std::uint64_t r) { return r * (2 * n - r - 1) / 2; };
            while (row > 0 && row_start(row) > k) --row;
            while (row_start(row + 1) <= k) ++row;
            const std::uint64_t col = row + 1 + (k - row_start(row));
            edges.insert({static_cast<node_id>(row), static_cast<node_id>(col)});
        }
    }

    // Background counts, node-major then time-major draw order.
    std::vector<double> series(n * T);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < T; ++t)
            series[i * T + t] = static_cast<double>(rng::poisson(noise_rng, cfg.background_rate));

    // Planted bursts: deterministic rounded envelope on top of the noise.
    const double scale = std::max(cfg.background_rate, 1.0);
    for (std::size_t e = 0; e < cfg.events.size(); ++e) {
        const auto& ev = cfg.events[e];
        const auto& gt = truth.events[e];
        for (std::size_t i = 0; i < gt.nodes.size(); ++i) {
            const node_id v = gt.nodes[i];
            for (std::size_t t = gt.onsets[i]; t < ev.interval.end; ++t)
                series[v * T + t] += std::round(ev.amplitude * scale * envelope(t, ev.interval));
        }
    }

    synth_result out;
    out.graph = temporal_graph(n, {edges.begin(), edges.end()}, std::move(series), T);
    out.truth = std::move(truth);
    return out;
}

std::vector<detection_score> score_detection(const ground_truth& truth,
                                             std::span<const community::cluster_report> reports) {
    std::vector<detection_score> out;
    for (const auto& ev : truth.events) {
        detection_score best;
        best.peak_time_error = std::numeric_limits<double>::infinity();
        const double mid =
            (static_cast<double>(ev.interval.start) + static_cast<double>(ev.interval.end) - 1.0) /
            2.0;
        for (const auto& rep : reports) {
            std::size_t hits = 0;
            for (const node_id v : rep.nodes)
                if (std::binary_search(ev.nodes.begin(), ev.nodes.end(), v)) ++hits;
            const double precision =
                rep.nodes.empty() ? 0.0 : static_cast<double>(hits) / rep.nodes.size();
            const double recall = static_cast<double>(hits) / ev.nodes.size();
            const double f1 =
                (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
            const double err = std::abs(static_cast<double>(rep.peak_time) - mid);
            if (f1 > best.f1 || (f1 == best.f1 && err < best.peak_time_error)) {
                best.precision = precision;
                best.recall = recall;
                best.f1 = f1;
                best.peak_time_error = err;
            }
        }
        out.push_back(best);
    }
    return out;
}

} // namespace memnet::synth
