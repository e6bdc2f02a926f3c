#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memnet/core.hpp"

namespace memnet::filter {

enum class score_kind { zscore, identity };

bool parse_score_kind(const std::string& name, score_kind& out);
const char* score_kind_name(score_kind k);

struct score_config {
    score_kind kind = score_kind::zscore;
    double c0 = 3.0;              // burst threshold on |score|
    std::int64_t min_bursts = 2;  // nodes below are discarded

    void validate() const;

    static score_config enron() { return {score_kind::zscore, 3.0, 2}; }
    static score_config wikipedia() { return {score_kind::zscore, 5.0, 5}; }
};

struct node_stats {
    double mean = 0.0;
    double stddev = 0.0; // population convention (divide by T)
};

node_stats series_stats(std::span<const double> x);

// Scored series. zscore: (x - mean)/stddev, all zeros when stddev == 0;
// identity: a copy. Length < 2 is invalid-series.
std::vector<double> node_scores(std::span<const double> x, const score_config& cfg,
                                node_stats* stats_out = nullptr);

// mask[t] = 1 iff |scores[t]| > c0 (strict).
std::vector<std::uint8_t> burst_mask(std::span<const double> scores, double c0);

std::int64_t burstiness(std::span<const std::uint8_t> mask);

struct burst_profile {
    std::size_t n_nodes = 0;
    std::size_t n_steps = 0;
    std::vector<double> scores;          // n_nodes x n_steps
    std::vector<std::uint8_t> mask;      // n_nodes x n_steps
    std::vector<std::int64_t> burstiness;

    std::span<const double> score_row(node_id i) const {
        return {scores.data() + static_cast<std::size_t>(i) * n_steps, n_steps};
    }
    std::span<const std::uint8_t> mask_row(node_id i) const {
        return {mask.data() + static_cast<std::size_t>(i) * n_steps, n_steps};
    }
};

// Scores and masks for every node of g. Parallel over nodes.
burst_profile profile_graph(const temporal_graph& g, const score_config& cfg);

struct filter_result {
    temporal_graph graph;          // induced subgraph of kept nodes
    std::vector<node_id> id_map;   // new index -> original index
    burst_profile profile;         // rows follow the new indexing
};

// Keeps exactly the nodes with burstiness >= cfg.min_bursts.
filter_result filter_potential(const temporal_graph& g, const score_config& cfg);

} // namespace memnet::filter
