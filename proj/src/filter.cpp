#include "memnet/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "memnet/kernels.hpp"
#include "memnet/parallel.hpp"

namespace memnet::filter {

bool parse_score_kind(const std::string& name, score_kind& out) {
    if (name == "zscore") {
        out = score_kind::zscore;
    } else if (name == "identity") {
        out = score_kind::identity;
    } else {
        return false;
    }
    return true;
}

const char* score_kind_name(score_kind k) {
    return k == score_kind::zscore ? "zscore" : "identity";
}

void score_config::validate() const {
    if (c0 < 0.0 || !std::isfinite(c0)) fail(errc::invalid_config, "c0 must be >= 0");
    if (min_bursts < 0) fail(errc::invalid_config, "min-bursts must be >= 0");
}

node_stats series_stats(std::span<const double> x) {
    node_stats s;
    double sum = 0.0;
    for (double v : x) sum += v;
    s.mean = sum / static_cast<double>(x.size());
    double sq = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        sq += d * d;
    }
    s.stddev = std::sqrt(sq / static_cast<double>(x.size()));
    return s;
}

std::vector<double> node_scores(std::span<const double> x, const score_config& cfg,
                                node_stats* stats_out) {
    if (x.size() < 2) fail(errc::invalid_series, "series length must be at least 2");
    std::vector<double> out(x.size());
    const node_stats s = series_stats(x);
    if (stats_out != nullptr) *stats_out = s;
    if (cfg.kind == score_kind::identity) {
        std::copy(x.begin(), x.end(), out.begin());
        return out;
    }
    if (s.stddev == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return out;
    }
    kernels::active_table().zscore(x.data(), x.size(), s.mean, s.stddev, out.data());
    return out;
}

std::vector<std::uint8_t> burst_mask(std::span<const double> scores, double c0) {
    std::vector<std::uint8_t> out(scores.size());
    kernels::active_table().burst_mask(scores.data(), scores.size(), c0, out.data());
    return out;
}

std::int64_t burstiness(std::span<const std::uint8_t> mask) {
    return std::accumulate(mask.begin(), mask.end(), std::int64_t{0});
}

burst_profile profile_graph(const temporal_graph& g, const score_config& cfg) {
    cfg.validate();
    const std::size_t n = g.n_nodes();
    const std::size_t T = g.n_steps();
    burst_profile p;
    p.n_nodes = n;
    p.n_steps = T;
    p.scores.resize(n * T);
    p.mask.resize(n * T);
    p.burstiness.assign(n, 0);

    const auto& k = kernels::active_table();
#pragma omp parallel for schedule(static) num_threads(resolved_jobs())
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(n); ++idx) {
        const auto i = static_cast<node_id>(idx);
        const auto x = g.series(i);
        double* score_row = p.scores.data() + idx * static_cast<std::int64_t>(T);
        std::uint8_t* mask_row = p.mask.data() + idx * static_cast<std::int64_t>(T);
        if (cfg.kind == score_kind::identity) {
            std::copy(x.begin(), x.end(), score_row);
        } else {
            const node_stats s = series_stats(x);
            if (s.stddev == 0.0) {
                std::fill(score_row, score_row + T, 0.0);
            } else {
                k.zscore(x.data(), T, s.mean, s.stddev, score_row);
            }
        }
        k.burst_mask(score_row, T, cfg.c0, mask_row);
        p.burstiness[idx] =
            std::accumulate(mask_row, mask_row + T, std::int64_t{0});
    }
    return p;
}

filter_result filter_potential(const temporal_graph& g, const score_config& cfg) {
    const burst_profile full = profile_graph(g, cfg);
    std::vector<node_id> keep;
    for (std::size_t i = 0; i < g.n_nodes(); ++i)
        if (full.burstiness[i] >= cfg.min_bursts) keep.push_back(static_cast<node_id>(i));

    filter_result out;
    auto sub = induced_subgraph(g, keep);
    out.graph = std::move(sub.graph);
    out.id_map = std::move(sub.id_map);

    const std::size_t T = g.n_steps();
    out.profile.n_nodes = out.id_map.size();
    out.profile.n_steps = T;
    out.profile.scores.resize(out.id_map.size() * T);
    out.profile.mask.resize(out.id_map.size() * T);
    out.profile.burstiness.resize(out.id_map.size());
    for (std::size_t i = 0; i < out.id_map.size(); ++i) {
        const node_id old = out.id_map[i];
        std::copy_n(full.scores.data() + static_cast<std::size_t>(old) * T, T,
                    out.profile.scores.data() + i * T);
        std::copy_n(full.mask.data() + static_cast<std::size_t>(old) * T, T,
                    out.profile.mask.data() + i * T);
        out.profile.burstiness[i] = full.burstiness[old];
    }
    return out;
}

} // namespace memnet::filter
