#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "memnet/community.hpp"
#include "memnet/core.hpp"
#include "memnet/learn.hpp"
#include "memnet/recall.hpp"
#include "memnet/synth.hpp"

namespace memnet::io {

enum class series_layout { dense, long_fmt };

bool parse_layout(const std::string& name, series_layout& out);

struct dataset_manifest {
    std::string edges_path;
    std::string series_path;
    series_layout layout = series_layout::dense;
    std::string labels_path;       // optional
    bool has_origin = false;
    std::int64_t t_origin = 0;     // epoch seconds of step 0
    std::int64_t step_seconds = 86400;
    std::size_t n_steps = 0;       // required for long layout; 0 = derive
    std::size_t n_nodes = 0;       // 0 = derive from files
};

dataset_manifest load_manifest(const std::string& path);
void save_manifest(const dataset_manifest& m, const std::string& path);

struct load_result {
    temporal_graph graph;
    std::vector<std::string> labels;   // empty when no label file
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
};

// Edge file: one "src<TAB>dst" pair per line (any whitespace accepted),
// '#' comments skipped, deduplicated, self-loops dropped with a counter.
// Dense series: "node_id,v0,...,v(T-1)". Long series: "node_id,t,value",
// absent entries are 0, duplicate (node, t) records accumulate.
load_result load_dataset(const dataset_manifest& m);

// ---- email ingestion -------------------------------------------------------

struct email_record {
    std::int64_t timestamp = 0;
    std::string sender;
    std::vector<std::string> recipients;
};

struct email_stream_stats {
    std::size_t records = 0;
    std::size_t malformed = 0;
};

using email_callback = std::function<void(const email_record&)>;

// "timestamp<TAB>sender<TAB>rcpt1,rcpt2,..." with ISO or epoch timestamps.
email_stream_stats stream_simple_log(std::istream& in, const email_callback& cb);

// Two-column CSV (file,message) with RFC822 messages in the second column,
// as distributed for the Enron corpus. Extracts Date/From/To/Cc/Bcc.
email_stream_stats stream_kaggle_csv(std::istream& in, const email_callback& cb);

struct ingest_options {
    std::int64_t range_begin = 0;         // inclusive, midnight UTC
    std::int64_t range_end = 0;           // exclusive, midnight UTC
    std::int64_t min_sent = 3;            // addresses below are removed
};

struct ingest_summary {
    std::size_t emails_seen = 0;
    std::size_t emails_in_range = 0;
    std::size_t malformed = 0;
    std::size_t addresses_seen = 0;
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    std::size_t n_steps = 0;
};

// Accumulates a record stream, applies the range and minimum-sent filters,
// and writes dataset artifacts (edges.tsv, series.csv in long layout,
// labels.tsv, manifest.json) to out_dir.
class email_ingestor {
public:
    explicit email_ingestor(const ingest_options& opts);

    void add(const email_record& rec);
    void add_malformed(std::size_t n) { malformed_ += n; }

    ingest_summary write(const std::string& out_dir, dataset_manifest* manifest_out = nullptr);

private:
    std::int64_t address_id(const std::string& addr);

    ingest_options opts_;
    std::size_t n_days_ = 0;
    std::size_t emails_seen_ = 0;
    std::size_t emails_in_range_ = 0;
    std::size_t malformed_ = 0;
    std::vector<std::string> addresses_;
    std::unordered_map<std::string, std::int64_t> address_ids_;
    std::vector<std::int64_t> sent_total_;
    std::unordered_map<std::uint64_t, std::int64_t> daily_sent_; // (addr<<32)|day
    std::unordered_set<std::uint64_t> pairs_;                    // (min<<32)|max
};

// ---- exports ---------------------------------------------------------------

// Weight value after a print/parse round trip at the export precision of 6
// significant digits. Window networks are canonicalized with this so
// in-memory results and reloaded network files stay byte-identical.
double canonical_weight(double w);

// "src<TAB>dst<TAB>weight" with 6 significant digits, sorted by (src, dst);
// ids pass through id_map when given (original-id output).
void export_weighted_edges(const learn::memory_network& net, const std::string& path,
                           const std::vector<node_id>* id_map = nullptr, bool partial = false);

struct loaded_network {
    learn::memory_network net;       // dense re-indexed
    std::vector<node_id> id_map;     // dense index -> id in the file
    bool partial = false;
};

loaded_network load_weighted_edges(const std::string& path);

// GEXF 1.2draft with node labels, a community attribute, and edge weights.
void export_gexf(const learn::memory_network& net, const community::partition& parts,
                 const std::string& path, const std::vector<node_id>* id_map = nullptr,
                 const std::vector<std::string>* labels = nullptr);

// JSON report; one record per cluster per window, stable field order.
void export_report(std::span<const community::cluster_report> reports, const std::string& path);

// Ground-truth file: "event_id<TAB>start<TAB>end<TAB>comma-separated node ids".
void export_ground_truth(const synth::ground_truth& truth, const std::string& path);
synth::ground_truth load_ground_truth(const std::string& path);

// Dataset writers shared by synth/filter commands. Dense rows are
// "id,v0,...,v(T-1)"; long rows are "id,t,value" for nonzero values only.
void export_edges(const std::vector<edge>& edges, const std::string& path,
                  const std::vector<node_id>* id_map = nullptr);
void export_series(const temporal_graph& g, const std::string& path, series_layout layout,
                   const std::vector<node_id>* id_map = nullptr);
void export_labels(const std::vector<std::string>& labels, const std::string& path,
                   const std::vector<node_id>* id_map = nullptr);

// Recall artifacts: "+1" entries as "node<TAB>t" lines (original ids,
// absolute steps), with status metadata in header comments.
struct pattern_export {
    const recall::pattern* completed = nullptr;
    window win;
    const std::vector<node_id>* id_map = nullptr; // row -> original id
    recall::recall_status status = recall::recall_status::converged;
    std::size_t iterations = 0;
};
void export_pattern(const pattern_export& view, const std::string& path);

} // namespace memnet::io
