#include "memnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "memnet/log.hpp"

namespace memnet::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(errc::write_error, "cannot open output file: " + path);
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) fail(errc::write_error, "failed writing " + path);
}

[[noreturn]] void line_fail(const std::string& path, std::size_t line_no, const std::string& what) {
    fail(errc::parse_error, path + ":" + std::to_string(line_no) + ": " + what);
}

bool parse_u32(std::string_view tok, std::uint32_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_u64(std::string_view tok, std::uint64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

std::string format_weight(double w) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", w);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

double canonical_weight(double w) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", w);
    return std::strtod(buf, nullptr);
}

bool parse_layout(const std::string& name, series_layout& out) {
    if (name == "dense") {
        out = series_layout::dense;
    } else if (name == "long") {
        out = series_layout::long_fmt;
    } else {
        return false;
    }
    return true;
}

dataset_manifest load_manifest(const std::string& path) {
    auto in = open_input(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::parse_error, path + ": " + e.what());
    }
    dataset_manifest m;
    // Paths are resolved relative to the manifest's directory.
    std::string dir;
    if (const auto slash = path.find_last_of('/'); slash != std::string::npos)
        dir = path.substr(0, slash + 1);
    auto resolve = [&](const std::string& p) {
        return (p.empty() || p.front() == '/') ? p : dir + p;
    };
    m.edges_path = resolve(j.value("edges", ""));
    m.series_path = resolve(j.value("series", ""));
    std::string layout = j.value("layout", "dense");
    if (!parse_layout(layout, m.layout)) fail(errc::parse_error, path + ": bad layout " + layout);
    m.labels_path = resolve(j.value("labels", ""));
    if (j.contains("t0")) {
        m.has_origin = true;
        m.t_origin = j["t0"].get<std::int64_t>();
    }
    m.step_seconds = j.value("step_seconds", std::int64_t{86400});
    m.n_steps = j.value("n_steps", std::size_t{0});
    m.n_nodes = j.value("n_nodes", std::size_t{0});
    return m;
}

void save_manifest(const dataset_manifest& m, const std::string& path) {
    ordered_json j;
    auto basename = [](const std::string& p) {
        const auto slash = p.find_last_of('/');
        return slash == std::string::npos ? p : p.substr(slash + 1);
    };
    j["edges"] = basename(m.edges_path);
    j["series"] = basename(m.series_path);
    j["layout"] = m.layout == series_layout::dense ? "dense" : "long";
    if (!m.labels_path.empty()) j["labels"] = basename(m.labels_path);
    if (m.has_origin) j["t0"] = m.t_origin;
    j["step_seconds"] = m.step_seconds;
    if (m.n_steps > 0) j["n_steps"] = m.n_steps;
    if (m.n_nodes > 0) j["n_nodes"] = m.n_nodes;
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    finish_output(out, path);
}

load_result load_dataset(const dataset_manifest& m) {
    load_result res;

    // edges
    std::vector<edge> edges;
    node_id max_id = 0;
    bool any_id = false;
    {
        auto in = open_input(m.edges_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (skippable(line)) continue;
            const auto toks = split_ws(line);
            std::uint32_t u = 0, v = 0;
            if (toks.size() != 2 || !parse_u32(toks[0], u) || !parse_u32(toks[1], v))
                line_fail(m.edges_path, line_no, "expected 'src dst'");
            if (u == v) {
                ++res.self_loops_dropped;
                continue;
            }
            edges.emplace_back(std::min(u, v), std::max(u, v));
            max_id = std::max(max_id, std::max(u, v));
            any_id = true;
        }
        std::sort(edges.begin(), edges.end());
        const auto last = std::unique(edges.begin(), edges.end());
        res.duplicates_dropped = static_cast<std::size_t>(edges.end() - last);
        edges.erase(last, edges.end());
    }

    // series
    std::size_t n_steps = m.n_steps;
    std::vector<std::pair<node_id, std::vector<double>>> dense_rows;
    std::vector<std::tuple<node_id, std::size_t, double>> long_rows;
    {
        auto in = open_input(m.series_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (skippable(line)) continue;
            const auto toks = split(line, ',');
            if (m.layout == series_layout::dense) {
                std::uint32_t id = 0;
                if (toks.size() < 2 || !parse_u32(trim(toks[0]), id))
                    line_fail(m.series_path, line_no, "expected 'node_id,v0,v1,...'");
                std::vector<double> row(toks.size() - 1);
                for (std::size_t k = 1; k < toks.size(); ++k)
                    if (!parse_double(trim(toks[k]), row[k - 1]))
                        line_fail(m.series_path, line_no, "bad value in column " + std::to_string(k));
                if (n_steps == 0) n_steps = row.size();
                if (row.size() != n_steps)
                    fail(errc::invalid_series,
                         m.series_path + ":" + std::to_string(line_no) + ": row of length " +
                             std::to_string(row.size()) + ", expected " + std::to_string(n_steps));
                max_id = std::max(max_id, id);
                any_id = true;
                dense_rows.emplace_back(id, std::move(row));
            } else {
                std::uint32_t id = 0;
                std::uint64_t t = 0;
                double v = 0.0;
                if (toks.size() != 3 || !parse_u32(trim(toks[0]), id) ||
                    !parse_u64(trim(toks[1]), t) || !parse_double(trim(toks[2]), v))
                    line_fail(m.series_path, line_no, "expected 'node_id,t,value'");
                if (n_steps == 0)
                    fail(errc::invalid_config,
                         "long series layout requires a declared number of steps");
                if (t >= n_steps)
                    line_fail(m.series_path, line_no,
                              "time index " + std::to_string(t) + " outside [0, " +
                                  std::to_string(n_steps) + ")");
                max_id = std::max(max_id, id);
                any_id = true;
                long_rows.emplace_back(id, static_cast<std::size_t>(t), v);
            }
        }
    }

    std::size_t n_nodes = m.n_nodes;
    if (n_nodes == 0) n_nodes = any_id ? static_cast<std::size_t>(max_id) + 1 : 0;

    auto check_node = [&](node_id id, const std::string& path) {
        if (id >= n_nodes)
            fail(errc::unknown_node,
                 path + ": node " + std::to_string(id) + " outside declared range of " +
                     std::to_string(n_nodes) + " nodes");
    };

    std::vector<double> series(n_nodes * n_steps, 0.0);
    for (const auto& [id, row] : dense_rows) {
        check_node(id, m.series_path);
        std::copy(row.begin(), row.end(), series.begin() + static_cast<std::size_t>(id) * n_steps);
    }
    for (const auto& [id, t, v] : long_rows) {
        check_node(id, m.series_path);
        series[static_cast<std::size_t>(id) * n_steps + t] += v;
    }
    for (const auto& [u, v] : edges) {
        check_node(u, m.edges_path);
        check_node(v, m.edges_path);
    }

    std::vector<std::int64_t> timestamps;
    if (m.has_origin) {
        timestamps.resize(n_steps);
        for (std::size_t t = 0; t < n_steps; ++t)
            timestamps[t] = m.t_origin + static_cast<std::int64_t>(t) * m.step_seconds;
    }

    res.graph = temporal_graph(n_nodes, std::move(edges), std::move(series), n_steps,
                               std::move(timestamps));

    if (!m.labels_path.empty()) {
        res.labels.assign(n_nodes, "");
        auto in = open_input(m.labels_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (skippable(line)) continue;
            const auto tab = line.find('\t');
            std::uint32_t id = 0;
            if (tab == std::string::npos || !parse_u32(trim(line.substr(0, tab)), id))
                line_fail(m.labels_path, line_no, "expected 'node_id<TAB>label'");
            check_node(id, m.labels_path);
            res.labels[id] = std::string(trim(line.substr(tab + 1)));
        }
    }

    if (res.self_loops_dropped > 0)
        MEMNET_LOG_WARN("%s: dropped %zu self-loop(s)", m.edges_path.c_str(),
                        res.self_loops_dropped);
    if (res.duplicates_dropped > 0)
        MEMNET_LOG_WARN("%s: dropped %zu duplicate edge(s)", m.edges_path.c_str(),
                        res.duplicates_dropped);
    return res;
}

// ---- exports ---------------------------------------------------------------

void export_weighted_edges(const learn::memory_network& net, const std::string& path,
                           const std::vector<node_id>* id_map, bool partial) {
    auto out = open_output(path);
    out << "# memnet network\n";
    out << "# nodes " << net.n_nodes << " window " << net.win.start << " " << net.win.end
        << " partial " << (partial ? 1 : 0) << "\n";
    auto mapped = [&](node_id v) { return id_map != nullptr ? (*id_map)[v] : v; };
    std::vector<learn::weighted_edge> rows = net.edges;
    for (auto& e : rows) {
        node_id u = mapped(e.u);
        node_id v = mapped(e.v);
        if (u > v) std::swap(u, v);
        e.u = u;
        e.v = v;
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    for (const auto& e : rows)
        out << e.u << '\t' << e.v << '\t' << format_weight(e.weight) << '\n';
    finish_output(out, path);
}

loaded_network load_weighted_edges(const std::string& path) {
    auto in = open_input(path);
    loaded_network res;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::tuple<node_id, node_id, double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            const auto toks = split_ws(t.substr(1));
            if (toks.size() >= 7 && toks[0] == "nodes" && toks[2] == "window") {
                std::uint64_t n = 0, ws = 0, we = 0, p = 0;
                if (parse_u64(toks[1], n) && parse_u64(toks[3], ws) && parse_u64(toks[4], we) &&
                    toks[5] == "partial" && parse_u64(toks[6], p)) {
                    res.net.win = {static_cast<std::size_t>(ws), static_cast<std::size_t>(we)};
                    res.partial = p != 0;
                    header_seen = true;
                }
            }
            continue;
        }
        const auto toks = split_ws(t);
        std::uint32_t u = 0, v = 0;
        double w = 0.0;
        if (toks.size() != 3 || !parse_u32(toks[0], u) || !parse_u32(toks[1], v) ||
            !parse_double(toks[2], w))
            line_fail(path, line_no, "expected 'src dst weight'");
        rows.emplace_back(u, v, w);
    }
    if (!header_seen)
        MEMNET_LOG_WARN("%s: no window header; window defaults to empty", path.c_str());

    std::vector<node_id> ids;
    for (const auto& [u, v, w] : rows) {
        ids.push_back(u);
        ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::unordered_map<node_id, node_id> to_dense;
    to_dense.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) to_dense[ids[i]] = static_cast<node_id>(i);

    res.net.n_nodes = ids.size();
    for (const auto& [u, v, w] : rows) {
        node_id du = to_dense[u];
        node_id dv = to_dense[v];
        if (du > dv) std::swap(du, dv);
        res.net.edges.push_back({du, dv, w});
    }
    std::sort(res.net.edges.begin(), res.net.edges.end(),
              [](const auto& a, const auto& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    res.id_map = std::move(ids);
    return res;
}

void export_gexf(const learn::memory_network& net, const community::partition& parts,
                 const std::string& path, const std::vector<node_id>* id_map,
                 const std::vector<std::string>* labels) {
    if (parts.assignment.size() != net.n_nodes)
        fail(errc::invalid_cluster, "partition does not cover the network");
    auto out = open_output(path);
    auto mapped = [&](node_id v) { return id_map != nullptr ? (*id_map)[v] : v; };
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
    out << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n";
    out << "    <attributes class=\"node\">\n";
    out << "      <attribute id=\"0\" title=\"community\" type=\"integer\"/>\n";
    out << "    </attributes>\n";
    out << "    <nodes>\n";
    for (std::size_t i = 0; i < net.n_nodes; ++i) {
        const node_id orig = mapped(static_cast<node_id>(i));
        std::string label = std::to_string(orig);
        if (labels != nullptr && orig < labels->size() && !(*labels)[orig].empty())
            label = (*labels)[orig];
        out << "      <node id=\"" << orig << "\" label=\"" << xml_escape(label) << "\">\n";
        out << "        <attvalues><attvalue for=\"0\" value=\"" << parts.assignment[i]
            << "\"/></attvalues>\n";
        out << "      </node>\n";
    }
    out << "    </nodes>\n";
    out << "    <edges>\n";
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto& we = net.edges[e];
        out << "      <edge id=\"" << e << "\" source=\"" << mapped(we.u) << "\" target=\""
            << mapped(we.v) << "\" weight=\"" << format_weight(we.weight) << "\"/>\n";
    }
    out << "    </edges>\n";
    out << "  </graph>\n";
    out << "</gexf>\n";
    finish_output(out, path);
}

void export_report(std::span<const community::cluster_report> reports, const std::string& path) {
    ordered_json doc;
    doc["schema"] = "memnet-report-v1";
    doc["records"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json rec;
        rec["window_id"] = r.window_id;
        rec["window_start"] = r.win.start;
        rec["window_end"] = r.win.end;
        rec["partial"] = r.partial;
        rec["kind"] = r.kind;
        rec["cluster_id"] = r.cluster_id;
        rec["q"] = r.q;
        rec["size"] = r.nodes.size();
        rec["nodes"] = r.nodes;
        rec["labels"] = r.labels;
        rec["peak_time"] = r.peak_time;
        rec["activity"] = r.activity;
        rec["activity_raw"] = r.activity_raw;
        doc["records"].push_back(std::move(rec));
    }
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    finish_output(out, path);
}

void export_ground_truth(const synth::ground_truth& truth, const std::string& path) {
    auto out = open_output(path);
    out << "# event_id\tstart\tend\tnodes\n";
    for (std::size_t e = 0; e < truth.events.size(); ++e) {
        const auto& ev = truth.events[e];
        out << e << '\t' << ev.interval.start << '\t' << ev.interval.end << '\t';
        for (std::size_t i = 0; i < ev.nodes.size(); ++i) {
            if (i > 0) out << ',';
            out << ev.nodes[i];
        }
        out << '\n';
    }
    finish_output(out, path);
}

synth::ground_truth load_ground_truth(const std::string& path) {
    auto in = open_input(path);
    synth::ground_truth truth;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto toks = split(line, '\t');
        std::uint64_t id = 0, start = 0, end = 0;
        if (toks.size() != 4 || !parse_u64(trim(toks[0]), id) || !parse_u64(trim(toks[1]), start) ||
            !parse_u64(trim(toks[2]), end))
            line_fail(path, line_no, "expected 'event_id\\tstart\\tend\\tnodes'");
        synth::ground_truth_event ev;
        ev.interval = {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
        for (const auto tok : split(toks[3], ',')) {
            std::uint32_t v = 0;
            if (!parse_u32(trim(tok), v)) line_fail(path, line_no, "bad node id");
            ev.nodes.push_back(v);
        }
        std::sort(ev.nodes.begin(), ev.nodes.end());
        truth.events.push_back(std::move(ev));
    }
    return truth;
}

void export_edges(const std::vector<edge>& edges, const std::string& path,
                  const std::vector<node_id>* id_map) {
    auto out = open_output(path);
    out << "# src\tdst\n";
    std::vector<edge> rows = edges;
    if (id_map != nullptr) {
        for (auto& [u, v] : rows) {
            u = (*id_map)[u];
            v = (*id_map)[v];
            if (u > v) std::swap(u, v);
        }
        std::sort(rows.begin(), rows.end());
    }
    for (const auto& [u, v] : rows) out << u << '\t' << v << '\n';
    finish_output(out, path);
}

void export_series(const temporal_graph& g, const std::string& path, series_layout layout,
                   const std::vector<node_id>* id_map) {
    auto out = open_output(path);
    char buf[64];
    auto mapped = [&](node_id v) { return id_map != nullptr ? (*id_map)[v] : v; };
    std::vector<std::pair<node_id, node_id>> order; // (output id, row)
    for (std::size_t i = 0; i < g.n_nodes(); ++i)
        order.emplace_back(mapped(static_cast<node_id>(i)), static_cast<node_id>(i));
    std::sort(order.begin(), order.end());
    for (const auto& [out_id, row] : order) {
        const auto x = g.series(row);
        if (layout == series_layout::dense) {
            out << out_id;
            for (const double v : x) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << ',' << buf;
            }
            out << '\n';
        } else {
            for (std::size_t t = 0; t < x.size(); ++t) {
                if (x[t] == 0.0) continue;
                std::snprintf(buf, sizeof(buf), "%.17g", x[t]);
                out << out_id << ',' << t << ',' << buf << '\n';
            }
        }
    }
    finish_output(out, path);
}

void export_labels(const std::vector<std::string>& labels, const std::string& path,
                   const std::vector<node_id>* id_map) {
    auto out = open_output(path);
    std::vector<std::pair<node_id, const std::string*>> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) continue;
        const node_id out_id = id_map != nullptr ? (*id_map)[i] : static_cast<node_id>(i);
        rows.emplace_back(out_id, &labels[i]);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [id, text] : rows) out << id << '\t' << *text << '\n';
    finish_output(out, path);
}

void export_pattern(const pattern_export& view, const std::string& path) {
    auto out = open_output(path);
    out << "# memnet pattern\n";
    out << "# window " << view.win.start << " " << view.win.end << " status "
        << recall::recall_status_name(view.status) << " iterations " << view.iterations << "\n";
    out << "# node\tt\n";
    const auto& p = *view.completed;
    std::vector<std::pair<node_id, std::size_t>> rows;
    for (std::size_t i = 0; i < p.n_rows; ++i) {
        const node_id orig =
            view.id_map != nullptr ? (*view.id_map)[i] : static_cast<node_id>(i);
        for (std::size_t t = 0; t < p.n_cols; ++t)
            if (p.at(i, t) > 0.0) rows.emplace_back(orig, view.win.start + t);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [id, t] : rows) out << id << '\t' << t << '\n';
    finish_output(out, path);
}

} // namespace memnet::io
