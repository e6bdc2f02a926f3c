#include "memnet/recall.hpp"

#include <cmath>
#include <string>

#include "memnet/parallel.hpp"

namespace memnet::recall {

const char* recall_status_name(recall_status s) {
    switch (s) {
    case recall_status::converged: return "converged";
    case recall_status::cycle_detected: return "cycle-detected";
    case recall_status::max_iters: return "max-iters";
    }
    return "?";
}

pattern build_initial_pattern(std::size_t n_nodes, window win,
                              const std::map<node_id, std::vector<std::uint8_t>>& active) {
    const std::size_t len = win.length();
    pattern p = pattern::all_inactive(n_nodes, len);
    for (const auto& [node, mask] : active) {
        if (node >= n_nodes)
            fail(errc::invalid_pattern, "active node " + std::to_string(node) + " out of range");
        if (mask.size() != len)
            fail(errc::invalid_pattern, "mask length " + std::to_string(mask.size()) +
                                            " does not match window length " +
                                            std::to_string(len));
        for (std::size_t t = 0; t < len; ++t)
            if (mask[t]) p.set(node, t, 1.0);
    }
    return p;
}

pattern hopfield_step(const learn::weighted_csr& csr, const pattern& p, double theta) {
    if (p.n_rows != csr.n_nodes)
        fail(errc::invalid_pattern, "pattern has " + std::to_string(p.n_rows) +
                                        " rows for a network of " +
                                        std::to_string(csr.n_nodes) + " nodes");
    const std::size_t T = p.n_cols;
    pattern out;
    out.n_rows = p.n_rows;
    out.n_cols = T;
    out.values.resize(p.values.size());

    const auto& kern = kernels::active_table();
#pragma omp parallel num_threads(resolved_jobs())
    {
        std::vector<double> acc(T);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(p.n_rows); ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k)
                kern.weighted_accumulate(csr.weight[k], p.row(csr.nbr[k]), T, acc.data());
            kern.sign_threshold(acc.data(), T, theta, out.row(i));
        }
    }
    return out;
}

pattern hopfield_step(const learn::memory_network& net, const pattern& p, double theta) {
    return hopfield_step(learn::build_csr(net), p, theta);
}

double frobenius_distance(const pattern& a, const pattern& b) {
    if (a.n_rows != b.n_rows || a.n_cols != b.n_cols)
        fail(errc::invalid_pattern, "pattern dimension mismatch");
    // Entries are +-1, so each differing entry contributes exactly 4.
    std::size_t flips = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (a.values[i] != b.values[i]) ++flips;
    return 2.0 * std::sqrt(static_cast<double>(flips));
}

recall_result run(const learn::memory_network& net, pattern p0, const recall_config& cfg) {
    const learn::weighted_csr csr = learn::build_csr(net);
    if (p0.n_rows != net.n_nodes) fail(errc::invalid_pattern, "initial pattern dimension mismatch");

    recall_result res;
    pattern prev_prev;
    pattern prev = std::move(p0);
    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        pattern next = hopfield_step(csr, prev, cfg.theta);
        res.iterations = iter;
        if (frobenius_distance(next, prev) <= cfg.epsilon) {
            res.completed = std::move(next);
            res.status = recall_status::converged;
            return res;
        }
        if (iter >= 2 && next == prev_prev) {
            res.completed = std::move(next);
            res.status = recall_status::cycle_detected;
            return res;
        }
        prev_prev = std::move(prev);
        prev = std::move(next);
    }
    res.completed = std::move(prev);
    res.status = recall_status::max_iters;
    return res;
}

} // namespace memnet::recall
