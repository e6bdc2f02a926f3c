#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "memnet/learn.hpp"

namespace memnet::recall {

// Binarized node x time matrix with entries in {-1, +1}. Rows are nodes of a
// memory network, columns the time steps of its window.
struct pattern {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values; // exactly +1.0 / -1.0

    static pattern all_inactive(std::size_t rows, std::size_t cols) {
        pattern p;
        p.n_rows = rows;
        p.n_cols = cols;
        p.values.assign(rows * cols, -1.0);
        return p;
    }

    double at(std::size_t i, std::size_t t) const { return values[i * n_cols + t]; }
    void set(std::size_t i, std::size_t t, double v) { values[i * n_cols + t] = v; }
    double* row(std::size_t i) { return values.data() + i * n_cols; }
    const double* row(std::size_t i) const { return values.data() + i * n_cols; }

    bool operator==(const pattern&) const = default;
};

struct recall_config {
    double theta = 0.0;        // activation threshold (strict >)
    double epsilon = 0.0;      // Frobenius-norm convergence tolerance; 0 = exact fixed point
    std::size_t max_iters = 100;
};

enum class recall_status { converged, cycle_detected, max_iters };
const char* recall_status_name(recall_status s);

struct recall_result {
    pattern completed;
    std::size_t iterations = 0;
    recall_status status = recall_status::converged;
};

// Rows default to all -1; for each (node, mask) in active, entries with
// mask[t] == 1 become +1. Mask lengths must equal the window length.
pattern build_initial_pattern(std::size_t n_nodes, window win,
                              const std::map<node_id, std::vector<std::uint8_t>>& active);

// One synchronous update P' = sign(W P > theta), diagonal-free sparse W.
pattern hopfield_step(const learn::memory_network& net, const pattern& p, double theta);
pattern hopfield_step(const learn::weighted_csr& csr, const pattern& p, double theta);

// Iterates hopfield_step until the Frobenius distance between consecutive
// patterns is <= epsilon, a 2-cycle appears, or max_iters is hit.
recall_result run(const learn::memory_network& net, pattern p0, const recall_config& cfg);

double frobenius_distance(const pattern& a, const pattern& b);

} // namespace memnet::recall
