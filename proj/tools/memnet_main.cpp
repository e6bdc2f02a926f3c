// memnet command line: anomaly detection on graphs with per-node activity
// series. Subcommands cover the full pipeline and each stage separately.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "memnet/civil_time.hpp"
#include "memnet/io.hpp"
#include "memnet/log.hpp"
#include "memnet/parallel.hpp"
#include "memnet/pipeline.hpp"
#include "memnet/rng.hpp"
#include "memnet/synth.hpp"

namespace fs = std::filesystem;
using memnet::errc;
using memnet::error;
using memnet::node_id;
using memnet::window;
using ordered_json = nlohmann::ordered_json;

namespace {

int exit_code_for(errc c) {
    switch (c) {
    case errc::parse_error:
    case errc::unknown_node:
    case errc::write_error:
    case errc::invalid_series:
    case errc::invalid_graph:
        return 2; // input data
    case errc::invalid_config:
    case errc::missing_timestamps:
    case errc::invalid_window:
    case errc::invalid_pattern:
    case errc::invalid_node:
    case errc::invalid_cluster:
    case errc::undefined_modularity:
    case errc::invalid_activity:
    case errc::generation_failed:
        return 3; // configuration / shape
    }
    return 1;
}

struct dataset_flags {
    std::string manifest;
    std::string edges;
    std::string series;
    std::string layout; // empty = manifest value or dense
    std::string labels;
    std::string t0;
    std::int64_t step_seconds = 86400;
    std::size_t n_steps = 0;
    std::size_t n_nodes = 0;
};

void add_dataset_flags(CLI::App* cmd, dataset_flags& f) {
    cmd->add_option("--manifest", f.manifest, "dataset manifest JSON (flags below override it)");
    cmd->add_option("--edges", f.edges, "edge list file (src<TAB>dst per line)");
    cmd->add_option("--series", f.series, "series file");
    cmd->add_option("--layout", f.layout, "series layout: dense|long")
        ->check(CLI::IsMember({"dense", "long"}));
    cmd->add_option("--labels", f.labels, "node label file (id<TAB>name)");
    cmd->add_option("--t0", f.t0, "timestamp of step 0 (YYYY-MM-DD[ HH:MM:SS] or epoch)");
    cmd->add_option("--step-seconds", f.step_seconds, "seconds per time step");
    cmd->add_option("--T", f.n_steps, "number of time steps (required for long layout)");
    cmd->add_option("--n-nodes", f.n_nodes, "declared node count (default: derive from files)");
}

memnet::io::dataset_manifest resolve_dataset(const dataset_flags& f) {
    memnet::io::dataset_manifest m;
    if (!f.manifest.empty()) m = memnet::io::load_manifest(f.manifest);
    if (!f.edges.empty()) m.edges_path = f.edges;
    if (!f.series.empty()) m.series_path = f.series;
    if (!f.layout.empty()) memnet::io::parse_layout(f.layout, m.layout);
    if (!f.labels.empty()) m.labels_path = f.labels;
    if (!f.t0.empty()) {
        std::int64_t t0 = 0;
        if (!memnet::civil::parse_instant(f.t0, t0))
            memnet::fail(errc::invalid_config, "cannot parse --t0 value '" + f.t0 + "'");
        m.has_origin = true;
        m.t_origin = t0;
    }
    if (f.manifest.empty()) m.step_seconds = f.step_seconds;
    if (f.n_steps > 0) m.n_steps = f.n_steps;
    if (f.n_nodes > 0) m.n_nodes = f.n_nodes;
    if (m.edges_path.empty() || m.series_path.empty())
        memnet::fail(errc::invalid_config, "--edges and --series (or --manifest) are required");
    return m;
}

struct score_flags {
    std::string score = "zscore";
    double c0 = 3.0;
    std::int64_t min_bursts = 2;
};

void add_score_flags(CLI::App* cmd, score_flags& f) {
    cmd->add_option("--score", f.score, "score function: zscore|identity")
        ->check(CLI::IsMember({"zscore", "identity"}));
    cmd->add_option("--c0", f.c0, "burst threshold on |score| (default 3, the email setting)");
    cmd->add_option("--min-bursts", f.min_bursts, "minimum bursts per kept node (default 2)");
}

memnet::filter::score_config resolve_score(const score_flags& f) {
    memnet::filter::score_config cfg;
    memnet::filter::parse_score_kind(f.score, cfg.kind);
    cfg.c0 = f.c0;
    cfg.min_bursts = f.min_bursts;
    cfg.validate();
    return cfg;
}

struct learn_flags {
    double lambda = 0.5;
    double alpha = 0.0;
    std::string similarity = "ratio";
    double prune_below = 0.0;
};

void add_learn_flags(CLI::App* cmd, learn_flags& f) {
    cmd->add_option("--lambda", f.lambda, "sparsity threshold on similarity (default 0.5)");
    cmd->add_option("--alpha", f.alpha, "forgetting factor for sub-threshold steps (default 0)");
    cmd->add_option("--similarity", f.similarity, "similarity: ratio|product|gaussian")
        ->check(CLI::IsMember({"ratio", "product", "gaussian"}));
    cmd->add_option("--prune-below", f.prune_below, "drop edges with final weight <= this");
}

memnet::learn::learn_config resolve_learn(const learn_flags& f) {
    memnet::learn::learn_config cfg;
    cfg.lambda = f.lambda;
    cfg.alpha = f.alpha;
    memnet::kernels::parse_similarity(f.similarity, cfg.similarity);
    cfg.prune_below = f.prune_below;
    cfg.validate();
    return cfg;
}

struct window_flags {
    std::string window = "monthly";
};

void add_window_flags(CLI::App* cmd, window_flags& f) {
    cmd->add_option("--window", f.window, "window length in steps, or 'monthly' (default)");
}

void apply_window_flags(const window_flags& f, memnet::pipeline::config& cfg) {
    if (f.window == "monthly") {
        cfg.monthly = true;
        return;
    }
    cfg.monthly = false;
    try {
        cfg.window_length = std::stoull(f.window);
    } catch (const std::exception&) {
        memnet::fail(errc::invalid_config, "--window must be 'monthly' or a positive integer");
    }
    if (cfg.window_length == 0)
        memnet::fail(errc::invalid_config, "--window must be 'monthly' or a positive integer");
}

void ensure_out_dir(const std::string& out) {
    if (out.empty()) memnet::fail(errc::invalid_config, "--out is required");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) memnet::fail(errc::write_error, "cannot create output directory " + out);
}

std::string window_file(std::size_t id, const char* suffix) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "window_w%03zu%s", id, suffix);
    return buf;
}

ordered_json stats_json(const memnet::community::network_stats& s) {
    ordered_json j;
    j["nodes"] = s.n_nodes;
    j["edges"] = s.n_edges;
    j["modularity"] = s.modularity;
    ordered_json dh = ordered_json::object();
    for (const auto& [k, v] : s.degree_hist) dh[std::to_string(k)] = v;
    j["degree_hist"] = std::move(dh);
    ordered_json ch = ordered_json::object();
    for (const auto& [k, v] : s.community_size_hist) ch[std::to_string(k)] = v;
    j["community_size_hist"] = std::move(ch);
    return j;
}

// ---- subcommand payloads ----------------------------------------------------

struct synth_args {
    std::size_t n_nodes = 1000;
    std::size_t steps = 720;
    double rate = 1.0;
    double avg_degree = 3.0;
    double intra_prob = 0.3;
    std::vector<std::string> events;
    std::uint64_t seed = 42;
    std::string out;
};

int cmd_synth(const synth_args& a) {
    memnet::synth::synth_config cfg;
    cfg.n_nodes = a.n_nodes;
    cfg.n_steps = a.steps;
    cfg.background_rate = a.rate;
    cfg.avg_degree = a.avg_degree;
    cfg.intra_edge_prob = a.intra_prob;
    cfg.seed = a.seed;
    for (const auto& spec : a.events) {
        unsigned long size = 0, start = 0, end = 0, lag = 0;
        double amp = 0.0;
        const int n = std::sscanf(spec.c_str(), "%lu:%lu:%lu:%lf:%lu", &size, &start, &end, &amp, &lag);
        if (n < 4)
            memnet::fail(errc::invalid_config,
                         "--event expects size:start:end:amplitude[:lag], got '" + spec + "'");
        cfg.events.push_back({size, {start, end}, amp, lag});
    }
    ensure_out_dir(a.out);

    const auto res = memnet::synth::generate(cfg);

    memnet::io::dataset_manifest m;
    m.edges_path = a.out + "/edges.tsv";
    m.series_path = a.out + "/series.csv";
    m.layout = memnet::io::series_layout::dense;
    m.n_steps = cfg.n_steps;
    m.n_nodes = cfg.n_nodes;
    memnet::io::export_edges(res.graph.edges(), m.edges_path);
    memnet::io::export_series(res.graph, m.series_path, m.layout);
    memnet::io::export_ground_truth(res.truth, a.out + "/truth.tsv");
    memnet::io::save_manifest(m, a.out + "/manifest.json");

    std::cout << "generated " << res.graph.n_nodes() << " nodes, " << res.graph.n_edges()
              << " edges, " << res.graph.n_steps() << " steps, " << res.truth.events.size()
              << " event(s) -> " << a.out << "\n";
    return 0;
}

struct filter_args {
    dataset_flags data;
    score_flags score;
    std::string out;
};

int cmd_filter(const filter_args& a) {
    const auto manifest = resolve_dataset(a.data);
    const auto score = resolve_score(a.score);
    const auto loaded = memnet::io::load_dataset(manifest);
    ensure_out_dir(a.out);

    const auto profile = memnet::filter::profile_graph(loaded.graph, score);
    std::vector<node_id> keep;
    for (std::size_t i = 0; i < loaded.graph.n_nodes(); ++i)
        if (profile.burstiness[i] >= score.min_bursts) keep.push_back(static_cast<node_id>(i));
    const auto sub = memnet::induced_subgraph(loaded.graph, keep);

    // Outputs keep original ids so every later stage reports in dataset terms.
    memnet::io::dataset_manifest out_m;
    out_m.edges_path = a.out + "/edges.tsv";
    out_m.series_path = a.out + "/series.csv";
    out_m.layout = manifest.layout;
    out_m.has_origin = manifest.has_origin;
    out_m.t_origin = manifest.t_origin;
    out_m.step_seconds = manifest.step_seconds;
    out_m.n_steps = loaded.graph.n_steps();
    out_m.n_nodes = loaded.graph.n_nodes();
    memnet::io::export_edges(sub.graph.edges(), out_m.edges_path, &sub.id_map);
    memnet::io::export_series(sub.graph, out_m.series_path, out_m.layout, &sub.id_map);
    if (!loaded.labels.empty()) {
        out_m.labels_path = a.out + "/labels.tsv";
        memnet::io::export_labels(loaded.labels, out_m.labels_path);
    }
    memnet::io::save_manifest(out_m, a.out + "/manifest.json");

    {
        std::ofstream table(a.out + "/burstiness.tsv");
        if (!table) memnet::fail(errc::write_error, "cannot open " + a.out + "/burstiness.tsv");
        table << "# node\tburstiness\tkept\n";
        for (std::size_t i = 0; i < loaded.graph.n_nodes(); ++i)
            table << i << '\t' << profile.burstiness[i] << '\t'
                  << (profile.burstiness[i] >= score.min_bursts ? 1 : 0) << '\n';
        if (!table.flush())
            memnet::fail(errc::write_error, "failed writing " + a.out + "/burstiness.tsv");
    }

    std::cout << "kept " << keep.size() << " / " << loaded.graph.n_nodes() << " nodes, "
              << sub.graph.n_edges() << " / " << loaded.graph.n_edges() << " edges -> " << a.out
              << "\n";
    return 0;
}

struct learn_args {
    dataset_flags data;
    score_flags score;
    learn_flags learn;
    window_flags win;
    std::uint64_t seed = 42;
    int jobs = 0;
    std::string out;
};

ordered_json index_window_entry(const memnet::pipeline::window_network& wn, std::size_t n_edges) {
    ordered_json e;
    e["id"] = wn.id;
    e["start"] = wn.net.win.start;
    e["end"] = wn.net.win.end;
    e["partial"] = wn.partial;
    e["network"] = window_file(wn.id, ".tsv");
    e["nodes"] = wn.net.n_nodes;
    e["edges"] = n_edges;
    return e;
}

int cmd_learn(const learn_args& a) {
    memnet::set_jobs(a.jobs);
    const auto manifest = resolve_dataset(a.data);
    const auto loaded = memnet::io::load_dataset(manifest);
    ensure_out_dir(a.out);

    memnet::pipeline::config cfg;
    cfg.score = resolve_score(a.score);
    cfg.learn = resolve_learn(a.learn);
    cfg.seed = a.seed;
    apply_window_flags(a.win, cfg);

    auto filtered = memnet::filter::filter_potential(loaded.graph, cfg.score);
    std::vector<bool> partial;
    const auto windows = memnet::pipeline::make_windows(loaded.graph, cfg, &partial);
    const auto acts = memnet::learn::activity(filtered.graph, filtered.profile);
    const auto nets = memnet::learn::learn_all_windows(filtered.graph, acts, cfg.learn, windows);

    ordered_json index;
    index["n_steps"] = loaded.graph.n_steps();
    if (manifest.has_origin) {
        index["t0"] = manifest.t_origin;
        index["step_seconds"] = manifest.step_seconds;
    }
    index["params"] = {{"score", memnet::filter::score_kind_name(cfg.score.kind)},
                       {"c0", cfg.score.c0},
                       {"min_bursts", cfg.score.min_bursts},
                       {"lambda", cfg.learn.lambda},
                       {"alpha", cfg.learn.alpha},
                       {"similarity", memnet::kernels::similarity_name(cfg.learn.similarity)},
                       {"prune_below", cfg.learn.prune_below},
                       {"window", a.win.window},
                       {"seed", a.seed}};
    index["kept_nodes"] = filtered.id_map.size();
    index["total_nodes"] = loaded.graph.n_nodes();
    index["windows"] = ordered_json::array();

    for (std::size_t i = 0; i < nets.size(); ++i) {
        auto wn = memnet::pipeline::compact_to_original(nets[i], filtered.id_map);
        wn.id = i;
        wn.partial = partial[i];
        memnet::io::export_weighted_edges(wn.net, a.out + "/" + window_file(i, ".tsv"),
                                          &wn.id_map, wn.partial);
        index["windows"].push_back(index_window_entry(wn, wn.net.edges.size()));
    }
    std::ofstream out(a.out + "/index.json");
    if (!out) memnet::fail(errc::write_error, "cannot open " + a.out + "/index.json");
    out << index.dump(2) << '\n';
    if (!out.flush()) memnet::fail(errc::write_error, "failed writing index.json");

    std::cout << "kept " << filtered.id_map.size() << " / " << loaded.graph.n_nodes()
              << " nodes; learned " << nets.size() << " window network(s) -> " << a.out << "\n";
    return 0;
}

struct communities_args {
    std::string network;
    std::string labels;
    double resolution = 1.0;
    std::uint64_t seed = 42;
    std::size_t window_id = 0;
    std::string out;
};

int cmd_communities(const communities_args& a) {
    const auto loaded = memnet::io::load_weighted_edges(a.network);
    ensure_out_dir(a.out);
    if (loaded.net.total_weight() <= 0.0)
        memnet::fail(errc::undefined_modularity, "network " + a.network + " has no weight");

    const auto parts = memnet::community::louvain(
        loaded.net, a.resolution, memnet::pipeline::louvain_seed(a.seed, a.window_id));
    const auto stats = memnet::community::compute_stats(loaded.net, parts);

    std::vector<std::string> labels;
    if (!a.labels.empty()) {
        node_id max_orig = 0;
        for (const node_id v : loaded.id_map) max_orig = std::max(max_orig, v);
        labels.assign(static_cast<std::size_t>(max_orig) + 1, "");
        std::ifstream in(a.labels);
        if (!in) memnet::fail(errc::parse_error, "cannot open input file: " + a.labels);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.front() == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            const auto id = std::stoul(line.substr(0, tab));
            if (id < labels.size()) labels[id] = line.substr(tab + 1);
        }
    }

    {
        std::ofstream out(a.out + "/partition.tsv");
        if (!out) memnet::fail(errc::write_error, "cannot open partition.tsv");
        out << "# node\tcommunity\n";
        for (std::size_t i = 0; i < loaded.net.n_nodes; ++i)
            out << loaded.id_map[i] << '\t' << parts.assignment[i] << '\n';
        if (!out.flush()) memnet::fail(errc::write_error, "failed writing partition.tsv");
    }
    {
        std::ofstream out(a.out + "/stats.json");
        if (!out) memnet::fail(errc::write_error, "cannot open stats.json");
        out << stats_json(stats).dump(2) << '\n';
        if (!out.flush()) memnet::fail(errc::write_error, "failed writing stats.json");
    }
    memnet::io::export_gexf(loaded.net, parts, a.out + "/network.gexf", &loaded.id_map,
                            labels.empty() ? nullptr : &labels);

    std::cout << "modularity " << parts.modularity << " over " << parts.n_communities
              << " communities (" << loaded.net.n_nodes << " nodes, " << loaded.net.edges.size()
              << " edges) -> " << a.out << "\n";
    return 0;
}

struct recall_args {
    dataset_flags data;
    score_flags score;
    std::string network;
    std::string seeds;
    double theta = 0.0;
    double epsilon = 0.0;
    std::size_t max_iters = 100;
    int jobs = 0;
    std::string out;
};

int cmd_recall(const recall_args& a) {
    memnet::set_jobs(a.jobs);
    const auto manifest = resolve_dataset(a.data);
    const auto loaded = memnet::io::load_dataset(manifest);
    const auto netfile = memnet::io::load_weighted_edges(a.network);
    const auto score = resolve_score(a.score);

    if (netfile.net.win.end > loaded.graph.n_steps() ||
        netfile.net.win.start >= netfile.net.win.end)
        memnet::fail(errc::invalid_window,
                     "network window [" + std::to_string(netfile.net.win.start) + ", " +
                         std::to_string(netfile.net.win.end) + ") does not fit a series of " +
                         std::to_string(loaded.graph.n_steps()) + " steps");

    // Seed nodes, one original id per line.
    std::vector<node_id> seeds;
    {
        std::ifstream in(a.seeds);
        if (!in) memnet::fail(errc::parse_error, "cannot open input file: " + a.seeds);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line.front() == '#') continue;
            try {
                seeds.push_back(static_cast<node_id>(std::stoul(line)));
            } catch (const std::exception&) {
                memnet::fail(errc::parse_error,
                             a.seeds + ":" + std::to_string(line_no) + ": bad node id");
            }
        }
    }

    std::map<node_id, std::vector<std::uint8_t>> active;
    std::size_t unknown = 0;
    for (const node_id orig : seeds) {
        const auto it = std::lower_bound(netfile.id_map.begin(), netfile.id_map.end(), orig);
        if (it == netfile.id_map.end() || *it != orig) {
            ++unknown;
            continue;
        }
        if (orig >= loaded.graph.n_nodes())
            memnet::fail(errc::unknown_node, "seed node " + std::to_string(orig) +
                                                 " is missing from the dataset");
        const auto dense = static_cast<node_id>(it - netfile.id_map.begin());
        const auto scores = memnet::filter::node_scores(loaded.graph.series(orig), score);
        const auto mask = memnet::filter::burst_mask(scores, score.c0);
        active[dense] = {mask.begin() + netfile.net.win.start, mask.begin() + netfile.net.win.end};
    }
    if (unknown > 0)
        MEMNET_LOG_WARN("%zu seed node(s) not present in the network; ignored", unknown);

    const auto p0 = memnet::recall::build_initial_pattern(netfile.net.n_nodes, netfile.net.win,
                                                          active);
    const memnet::recall::recall_config rcfg{a.theta, a.epsilon, a.max_iters};
    const auto res = memnet::recall::run(netfile.net, p0, rcfg);

    if (!a.out.empty()) {
        memnet::io::pattern_export view;
        view.completed = &res.completed;
        view.win = netfile.net.win;
        view.id_map = &netfile.id_map;
        view.status = res.status;
        view.iterations = res.iterations;
        memnet::io::export_pattern(view, a.out);
    }
    std::size_t active_entries = 0;
    for (const double v : res.completed.values)
        if (v > 0.0) ++active_entries;
    std::cout << "status=" << memnet::recall::recall_status_name(res.status)
              << " iterations=" << res.iterations << " active_entries=" << active_entries << "\n";
    return 0;
}

struct report_args {
    dataset_flags data;
    std::string index;
    double resolution = 1.0;
    std::uint64_t seed = 42;
    int jobs = 0;
    std::string out;
};

int cmd_report(const report_args& a) {
    memnet::set_jobs(a.jobs);
    const auto manifest = resolve_dataset(a.data);
    const auto loaded = memnet::io::load_dataset(manifest);
    ensure_out_dir(a.out);

    std::ifstream in(a.index);
    if (!in) memnet::fail(errc::parse_error, "cannot open input file: " + a.index);
    ordered_json index;
    try {
        in >> index;
    } catch (const std::exception& e) {
        memnet::fail(errc::parse_error, a.index + ": " + e.what());
    }
    std::string dir = ".";
    if (const auto slash = a.index.find_last_of('/'); slash != std::string::npos)
        dir = a.index.substr(0, slash);

    memnet::pipeline::config cfg;
    cfg.resolution = a.resolution;
    cfg.seed = a.seed;

    std::vector<memnet::community::cluster_report> reports;
    for (const auto& w : index.at("windows")) {
        const auto file = dir + "/" + w.at("network").get<std::string>();
        const auto netfile = memnet::io::load_weighted_edges(file);
        memnet::pipeline::window_network wn;
        wn.id = w.at("id").get<std::size_t>();
        wn.partial = w.value("partial", false);
        wn.net = netfile.net;
        wn.id_map = netfile.id_map;
        const auto out = memnet::pipeline::analyze_window(wn, loaded.graph, loaded.labels, cfg);
        for (const auto& rep : out.reports) reports.push_back(rep);
    }
    memnet::io::export_report(reports, a.out + "/report.json");
    std::cout << "wrote " << reports.size() << " cluster record(s) -> " << a.out
              << "/report.json\n";
    return 0;
}

struct pipeline_args {
    dataset_flags data;
    score_flags score;
    learn_flags learn;
    window_flags win;
    double resolution = 1.0;
    std::uint64_t seed = 42;
    int jobs = 0;
    std::string out;
};

int cmd_pipeline(const pipeline_args& a) {
    memnet::set_jobs(a.jobs);
    const auto manifest = resolve_dataset(a.data);
    const auto loaded = memnet::io::load_dataset(manifest);
    ensure_out_dir(a.out);

    memnet::pipeline::config cfg;
    cfg.score = resolve_score(a.score);
    cfg.learn = resolve_learn(a.learn);
    cfg.resolution = a.resolution;
    cfg.seed = a.seed;
    apply_window_flags(a.win, cfg);

    const auto res = memnet::pipeline::run(loaded.graph, loaded.labels, cfg);

    ordered_json index;
    index["n_steps"] = loaded.graph.n_steps();
    if (manifest.has_origin) {
        index["t0"] = manifest.t_origin;
        index["step_seconds"] = manifest.step_seconds;
    }
    index["params"] = {{"score", memnet::filter::score_kind_name(cfg.score.kind)},
                       {"c0", cfg.score.c0},
                       {"min_bursts", cfg.score.min_bursts},
                       {"lambda", cfg.learn.lambda},
                       {"alpha", cfg.learn.alpha},
                       {"similarity", memnet::kernels::similarity_name(cfg.learn.similarity)},
                       {"prune_below", cfg.learn.prune_below},
                       {"window", a.win.window},
                       {"seed", a.seed}};
    index["kept_nodes"] = res.kept_nodes;
    index["total_nodes"] = res.total_nodes;
    index["windows"] = ordered_json::array();

    ordered_json all_stats = ordered_json::array();
    for (const auto& out : res.outputs) {
        const auto& wn = out.network;
        memnet::io::export_weighted_edges(wn.net, a.out + "/" + window_file(wn.id, ".tsv"),
                                          &wn.id_map, wn.partial);
        if (out.has_partition)
            memnet::io::export_gexf(wn.net, out.parts, a.out + "/" + window_file(wn.id, ".gexf"),
                                    &wn.id_map, loaded.labels.empty() ? nullptr : &loaded.labels);
        index["windows"].push_back(index_window_entry(wn, wn.net.edges.size()));
        ordered_json s = stats_json(out.stats);
        s["window_id"] = wn.id;
        all_stats.push_back(std::move(s));
    }
    memnet::io::export_report(res.all_reports, a.out + "/report.json");
    {
        std::ofstream out(a.out + "/stats.json");
        if (!out) memnet::fail(errc::write_error, "cannot open stats.json");
        out << all_stats.dump(2) << '\n';
        if (!out.flush()) memnet::fail(errc::write_error, "failed writing stats.json");
    }
    {
        std::ofstream out(a.out + "/index.json");
        if (!out) memnet::fail(errc::write_error, "cannot open index.json");
        out << index.dump(2) << '\n';
        if (!out.flush()) memnet::fail(errc::write_error, "failed writing index.json");
    }

    std::cout << "kept " << res.kept_nodes << " / " << res.total_nodes << " nodes; "
              << res.windows.size() << " window(s); " << res.all_reports.size()
              << " cluster record(s) -> " << a.out << "\n";
    return 0;
}

struct ingest_args {
    std::string input;
    std::string format = "kaggle";
    std::string from = "1999-01-01";
    std::string to = "2002-08-01";
    std::int64_t min_sent = 3;
    std::string out;
};

int cmd_ingest(const ingest_args& a) {
    memnet::io::ingest_options opts;
    if (!memnet::civil::parse_instant(a.from, opts.range_begin))
        memnet::fail(errc::invalid_config, "cannot parse --from");
    if (!memnet::civil::parse_instant(a.to, opts.range_end))
        memnet::fail(errc::invalid_config, "cannot parse --to");
    opts.min_sent = a.min_sent;
    ensure_out_dir(a.out);

    std::ifstream in(a.input);
    if (!in) memnet::fail(errc::parse_error, "cannot open input file: " + a.input);

    memnet::io::email_ingestor ing(opts);
    const auto cb = [&](const memnet::io::email_record& r) { ing.add(r); };
    memnet::io::email_stream_stats st;
    if (a.format == "kaggle") {
        st = memnet::io::stream_kaggle_csv(in, cb);
    } else {
        st = memnet::io::stream_simple_log(in, cb);
    }
    ing.add_malformed(st.malformed);
    const auto sum = ing.write(a.out);

    std::cout << "ingested " << sum.emails_in_range << " / " << sum.emails_seen << " emails ("
              << sum.malformed << " malformed); kept " << sum.n_nodes << " / "
              << sum.addresses_seen << " addresses, " << sum.n_edges << " edges over "
              << sum.n_steps << " days -> " << a.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memnet: spatio-temporal anomaly detection via Hebbian memory networks"};
    app.require_subcommand(1);

    synth_args sy;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset with planted events");
    synth_cmd->add_option("--n-nodes", sy.n_nodes, "node count");
    synth_cmd->add_option("--steps", sy.steps, "series length");
    synth_cmd->add_option("--rate", sy.rate, "background Poisson rate");
    synth_cmd->add_option("--avg-degree", sy.avg_degree, "background average degree");
    synth_cmd->add_option("--intra-prob", sy.intra_prob, "extra in-cluster edge probability");
    synth_cmd->add_option("--event", sy.events, "event spec size:start:end:amplitude[:lag]");
    synth_cmd->add_option("--seed", sy.seed, "random seed");
    synth_cmd->add_option("--out", sy.out, "output directory")->required();

    filter_args fi;
    auto* filter_cmd = app.add_subcommand("filter", "stage 1: keep potentially anomalous nodes");
    add_dataset_flags(filter_cmd, fi.data);
    add_score_flags(filter_cmd, fi.score);
    filter_cmd->add_option("--out", fi.out, "output directory")->required();

    learn_args le;
    auto* learn_cmd = app.add_subcommand("learn", "stage 2: learn one memory network per window");
    add_dataset_flags(learn_cmd, le.data);
    add_score_flags(learn_cmd, le.score);
    add_learn_flags(learn_cmd, le.learn);
    add_window_flags(learn_cmd, le.win);
    learn_cmd->add_option("--seed", le.seed, "random seed");
    learn_cmd->add_option("--jobs", le.jobs, "worker threads (0 = all cores)");
    learn_cmd->add_option("--out", le.out, "output directory")->required();

    communities_args co;
    auto* comm_cmd = app.add_subcommand("communities", "partition a learned network");
    comm_cmd->add_option("--network", co.network, "learned network file")->required();
    comm_cmd->add_option("--labels", co.labels, "node label file (id<TAB>name)");
    comm_cmd->add_option("--resolution", co.resolution, "Louvain resolution (default 1)");
    comm_cmd->add_option("--seed", co.seed, "random seed");
    comm_cmd->add_option("--window-id", co.window_id, "window id for seeding (default 0)");
    comm_cmd->add_option("--out", co.out, "output directory")->required();

    recall_args re;
    auto* recall_cmd = app.add_subcommand("recall", "complete a partial pattern from a network");
    add_dataset_flags(recall_cmd, re.data);
    add_score_flags(recall_cmd, re.score);
    recall_cmd->add_option("--network", re.network, "learned network file")->required();
    recall_cmd->add_option("--seeds", re.seeds, "seed node file, one id per line")->required();
    recall_cmd->add_option("--theta", re.theta, "activation threshold (default 0)");
    recall_cmd->add_option("--epsilon", re.epsilon, "convergence tolerance (default 0 = exact)");
    recall_cmd->add_option("--max-iters", re.max_iters, "iteration cap (default 100)");
    recall_cmd->add_option("--jobs", re.jobs, "worker threads (0 = all cores)");
    recall_cmd->add_option("--out", re.out, "output pattern file");

    report_args rp;
    auto* report_cmd = app.add_subcommand("report", "cluster reports for learned networks");
    add_dataset_flags(report_cmd, rp.data);
    report_cmd->add_option("--index", rp.index, "index.json from learn/pipeline")->required();
    report_cmd->add_option("--resolution", rp.resolution, "Louvain resolution (default 1)");
    report_cmd->add_option("--seed", rp.seed, "random seed");
    report_cmd->add_option("--jobs", rp.jobs, "worker threads (0 = all cores)");
    report_cmd->add_option("--out", rp.out, "output directory")->required();

    pipeline_args pi;
    auto* pipe_cmd = app.add_subcommand("pipeline", "filter + learn + communities + report");
    add_dataset_flags(pipe_cmd, pi.data);
    add_score_flags(pipe_cmd, pi.score);
    add_learn_flags(pipe_cmd, pi.learn);
    add_window_flags(pipe_cmd, pi.win);
    pipe_cmd->add_option("--resolution", pi.resolution, "Louvain resolution (default 1)");
    pipe_cmd->add_option("--seed", pi.seed, "random seed");
    pipe_cmd->add_option("--jobs", pi.jobs, "worker threads (0 = all cores)");
    pipe_cmd->add_option("--out", pi.out, "output directory")->required();

    ingest_args ig;
    auto* ingest_cmd = app.add_subcommand("ingest", "build a dataset from an email log");
    ingest_cmd->add_option("--input", ig.input, "input file")->required();
    ingest_cmd->add_option("--format", ig.format, "input format: kaggle|simple")
        ->check(CLI::IsMember({"kaggle", "simple"}));
    ingest_cmd->add_option("--from", ig.from, "range start (inclusive, YYYY-MM-DD)");
    ingest_cmd->add_option("--to", ig.to, "range end (exclusive, YYYY-MM-DD)");
    ingest_cmd->add_option("--min-sent", ig.min_sent, "minimum sent emails per kept address");
    ingest_cmd->add_option("--out", ig.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(sy);
        if (filter_cmd->parsed()) return cmd_filter(fi);
        if (learn_cmd->parsed()) return cmd_learn(le);
        if (comm_cmd->parsed()) return cmd_communities(co);
        if (recall_cmd->parsed()) return cmd_recall(re);
        if (report_cmd->parsed()) return cmd_report(rp);
        if (pipe_cmd->parsed()) return cmd_pipeline(pi);
        if (ingest_cmd->parsed()) return cmd_ingest(ig);
    } catch (const error& e) {
        std::cerr << "memnet: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "memnet: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
