#include <doctest.h>
#include <sstream>

#include "memnet/civil_time.hpp"
#include "memnet/io.hpp"
#include "memnet/rng.hpp"
#include "test_helpers.hpp"

using namespace memnet;
using testutil::temp_dir;
using testutil::write_file;

TEST_SUITE("io") {

TEST_CASE("edge file deduplicates and drops self-loops") {
    temp_dir dir;
    write_file(dir.file("edges.tsv"), "# comment\n0 1\n1\t0\n2 2\n");
    write_file(dir.file("series.csv"), "0,1,2\n1,3,4\n2,5,6\n");
    io::dataset_manifest m;
    m.edges_path = dir.file("edges.tsv");
    m.series_path = dir.file("series.csv");
    const auto res = io::load_dataset(m);
    CHECK(res.graph.n_edges() == 1);
    CHECK(res.graph.edges()[0] == edge{0, 1});
    CHECK(res.self_loops_dropped == 1);
    CHECK(res.duplicates_dropped == 1);
    CHECK(res.graph.series(2)[1] == 6);
}

TEST_CASE("long layout zero-fills absent entries") {
    temp_dir dir;
    write_file(dir.file("edges.tsv"), "0 1\n");
    write_file(dir.file("series.csv"), "0,3,7\n");
    io::dataset_manifest m;
    m.edges_path = dir.file("edges.tsv");
    m.series_path = dir.file("series.csv");
    m.layout = io::series_layout::long_fmt;
    m.n_steps = 5;
    const auto res = io::load_dataset(m);
    const auto x = res.graph.series(0);
    CHECK(std::vector<double>(x.begin(), x.end()) == std::vector<double>{0, 0, 0, 7, 0});
}

TEST_CASE("parse errors carry line numbers") {
    temp_dir dir;
    write_file(dir.file("edges.tsv"), "0 1\nnot an edge\n");
    write_file(dir.file("series.csv"), "0,1,2\n1,3,4\n");
    io::dataset_manifest m;
    m.edges_path = dir.file("edges.tsv");
    m.series_path = dir.file("series.csv");
    CHECK_THROWS_WITH_AS(io::load_dataset(m), doctest::Contains(":2:"), error);

    write_file(dir.file("edges.tsv"), "0 1\n");
    write_file(dir.file("series.csv"), "0,1,2\n1,3\n");
    CHECK_THROWS_WITH_AS(io::load_dataset(m), doctest::Contains("invalid-series"), error);

    m.n_nodes = 1;
    write_file(dir.file("series.csv"), "0,1,2\n");
    CHECK_THROWS_WITH_AS(io::load_dataset(m), doctest::Contains("unknown-node"), error);
}

TEST_CASE("loading is independent of input line order") {
    temp_dir a, b;
    write_file(a.file("edges.tsv"), "0 1\n2 3\n1 2\n");
    write_file(b.file("edges.tsv"), "1 2\n0 1\n2 3\n");
    write_file(a.file("series.csv"), "0,0,5\n2,1,2\n3,2,7\n");
    write_file(b.file("series.csv"), "3,2,7\n0,0,5\n2,1,2\n");
    io::dataset_manifest ma, mb;
    ma.edges_path = a.file("edges.tsv");
    ma.series_path = a.file("series.csv");
    ma.layout = io::series_layout::long_fmt;
    ma.n_steps = 4;
    mb = ma;
    mb.edges_path = b.file("edges.tsv");
    mb.series_path = b.file("series.csv");
    const auto ra = io::load_dataset(ma);
    const auto rb = io::load_dataset(mb);
    CHECK(ra.graph.edges() == rb.graph.edges());
    CHECK(ra.graph.series_data() == rb.graph.series_data());
}

TEST_CASE("missing file names the path") {
    io::dataset_manifest m;
    m.edges_path = "/nonexistent/edges.tsv";
    m.series_path = "/nonexistent/series.csv";
    CHECK_THROWS_WITH_AS(io::load_dataset(m), doctest::Contains("/nonexistent/edges.tsv"), error);
}

TEST_CASE("ingestion is order independent") {
    const std::string fileA = "2001-05-14 10:00:00\ta@x\tb@x,c@x\n"
                              "2001-05-15 11:00:00\tb@x\ta@x\n"
                              "2001-05-16 12:00:00\ta@x\tb@x\n"
                              "2001-05-17 13:00:00\ta@x\tc@x\n"
                              "2001-05-17 14:00:00\tb@x\tc@x\n"
                              "2001-05-18 15:00:00\tb@x\ta@x\n";
    // Same records, permuted lines.
    std::vector<std::string> lines;
    {
        std::istringstream in(fileA);
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
    }
    std::string fileB;
    for (const auto idx : {3, 0, 5, 2, 4, 1}) fileB += lines[idx] + "\n";

    io::ingest_options opts;
    REQUIRE(civil::parse_instant("2001-05-14", opts.range_begin));
    REQUIRE(civil::parse_instant("2001-05-21", opts.range_end));
    opts.min_sent = 2;

    auto run_ingest = [&](const std::string& text, const temp_dir& dir) {
        io::email_ingestor ing(opts);
        std::istringstream in(text);
        const auto st = io::stream_simple_log(in, [&](const io::email_record& r) { ing.add(r); });
        ing.add_malformed(st.malformed);
        io::dataset_manifest m;
        ing.write(dir.path(), &m);
        return io::load_dataset(m);
    };

    temp_dir dir_a, dir_b;
    const auto a = run_ingest(fileA, dir_a);
    const auto b = run_ingest(fileB, dir_b);
    CHECK(a.graph.edges() == b.graph.edges());
    CHECK(a.graph.series_data() == b.graph.series_data());
    CHECK(a.labels == b.labels);
}

TEST_CASE("ingestion applies the minimum-sent filter") {
    io::ingest_options opts;
    REQUIRE(civil::parse_instant("2001-01-01", opts.range_begin));
    REQUIRE(civil::parse_instant("2001-02-01", opts.range_end));
    opts.min_sent = 3;

    io::email_ingestor ing(opts);
    std::istringstream in("2001-01-02\ta@x\tb@x\n"
                          "2001-01-03\ta@x\tb@x\n"
                          "2001-01-04\ta@x\tc@x\n"
                          "2001-01-05\tb@x\ta@x\n"
                          "2001-01-06\tb@x\ta@x\n");
    io::stream_simple_log(in, [&](const io::email_record& r) { ing.add(r); });
    temp_dir dir;
    io::dataset_manifest m;
    const auto sum = ing.write(dir.path(), &m);
    // a sent 3 -> kept; b sent 2 -> removed; c sent 0 -> removed
    CHECK(sum.n_nodes == 1);
    CHECK(sum.n_edges == 0);
    const auto res = io::load_dataset(m);
    REQUIRE(res.labels.size() == 1);
    CHECK(res.labels[0] == "a@x");
    CHECK(res.graph.series(0)[1] == 1.0); // one email on Jan 2
}

TEST_CASE("multi-recipient emails count once for the sender") {
    io::ingest_options opts;
    REQUIRE(civil::parse_instant("2001-01-01", opts.range_begin));
    REQUIRE(civil::parse_instant("2001-01-08", opts.range_end));
    opts.min_sent = 0; // keep receivers too so both edges materialize
    io::email_ingestor ing(opts);
    std::istringstream in("2001-01-02\ta@x\tb@x,c@x\n");
    io::stream_simple_log(in, [&](const io::email_record& r) { ing.add(r); });
    temp_dir dir;
    io::dataset_manifest m;
    const auto sum = ing.write(dir.path(), &m);
    CHECK(sum.n_nodes == 3);
    CHECK(sum.n_edges == 2); // (a,b) and (a,c)
    const auto res = io::load_dataset(m);
    // a is node 0 (lexicographic); one email on day 1
    CHECK(res.graph.series(0)[1] == 1.0);
    CHECK(res.graph.series(1)[1] == 0.0);
}

TEST_CASE("kaggle-format messages parse headers and dates") {
    const std::string csv =
        "file,message\n"
        "allen-p/_sent_mail/1.,\"Message-ID: <123.JavaMail.evans@thyme>\n"
        "Date: Mon, 14 May 2001 16:39:00 -0700 (PDT)\n"
        "From: phillip.allen@enron.com\n"
        "To: tim.belden@enron.com,\n"
        "\tjohn.doe@enron.com\n"
        "Subject: test\n"
        "Mime-Version: 1.0\n"
        "\n"
        "Here is our forecast\n"
        "\"\n"
        "bad-row,\"no date here\n\n body \"\n";
    std::istringstream in(csv);
    std::vector<io::email_record> records;
    const auto st = io::stream_kaggle_csv(in, [&](const io::email_record& r) { records.push_back(r); });
    CHECK(st.records == 2);
    CHECK(st.malformed == 1);
    REQUIRE(records.size() == 1);
    CHECK(records[0].sender == "phillip.allen@enron.com");
    REQUIRE(records[0].recipients.size() == 2);
    CHECK(records[0].recipients[0] == "john.doe@enron.com");
    CHECK(records[0].recipients[1] == "tim.belden@enron.com");
    // 16:39 PDT = 23:39 UTC
    const auto dt = civil::from_epoch(records[0].timestamp);
    CHECK(dt.year == 2001);
    CHECK(dt.month == 5);
    CHECK(dt.day == 14);
    CHECK(dt.hour == 23);
    CHECK(dt.minute == 39);
}

TEST_CASE("weighted edge export round trips") {
    learn::memory_network net;
    net.n_nodes = 4;
    net.win = {3, 9};
    net.edges = {{0, 1, 1.23456789}, {1, 3, 0.000123456}, {2, 3, 99999.5}};
    temp_dir dir;

    SUBCASE("identity ids") {
        io::export_weighted_edges(net, dir.file("net.tsv"), nullptr, true);
        const auto back = io::load_weighted_edges(dir.file("net.tsv"));
        CHECK(back.partial);
        CHECK(back.net.win == window{3, 9});
        REQUIRE(back.net.edges.size() == 3);
        CHECK(back.id_map == std::vector<node_id>{0, 1, 2, 3});
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(back.net.edges[i].weight ==
                  doctest::Approx(net.edges[i].weight).epsilon(1e-5));
        }
    }

    SUBCASE("empty network writes only the header") {
        learn::memory_network empty;
        empty.n_nodes = 2;
        io::export_weighted_edges(empty, dir.file("empty.tsv"));
        const auto text = testutil::read_file(dir.file("empty.tsv"));
        CHECK(text.find("# memnet network") == 0);
        CHECK(text.find('\t') == std::string::npos);
        const auto back = io::load_weighted_edges(dir.file("empty.tsv"));
        CHECK(back.net.edges.empty());
        CHECK(back.net.n_nodes == 0);
    }

    SUBCASE("id map remaps to original ids") {
        const std::vector<node_id> id_map = {10, 7, 30, 20};
        io::export_weighted_edges(net, dir.file("mapped.tsv"), &id_map);
        const auto back = io::load_weighted_edges(dir.file("mapped.tsv"));
        CHECK(back.id_map == std::vector<node_id>{7, 10, 20, 30});
        // edge (0,1) -> (10,7) -> stored as 7..10
        CHECK(back.net.edges[0].u == 0);  // dense id of original 7
        CHECK(back.net.edges[0].v == 1);  // dense id of original 10
    }
}

TEST_CASE("gexf export escapes labels and carries communities") {
    learn::memory_network net;
    net.n_nodes = 3;
    net.edges = {{0, 1, 1.0}, {0, 2, 2.0}, {1, 2, 3.0}};
    community::partition p;
    p.assignment = {0, 0, 1};
    p.n_communities = 2;
    const std::vector<std::string> labels = {"alice & bob", "x<y", "plain"};
    temp_dir dir;
    io::export_gexf(net, p, dir.file("g.gexf"), nullptr, &labels);
    const auto text = testutil::read_file(dir.file("g.gexf"));
    CHECK(text.find("<gexf xmlns=\"http://www.gexf.net/1.2draft\"") != std::string::npos);
    CHECK(text.find("alice &amp; bob") != std::string::npos);
    CHECK(text.find("x&lt;y") != std::string::npos);
    CHECK(text.find("defaultedgetype=\"undirected\"") != std::string::npos);
    // 3 nodes, 3 edges, each node carries a community attvalue
    std::size_t nodes = 0, edges = 0, attrs = 0;
    for (std::size_t pos = 0; (pos = text.find("<node id=", pos)) != std::string::npos; ++pos) ++nodes;
    for (std::size_t pos = 0; (pos = text.find("<edge id=", pos)) != std::string::npos; ++pos) ++edges;
    for (std::size_t pos = 0; (pos = text.find("attvalue for=\"0\"", pos)) != std::string::npos; ++pos)
        ++attrs;
    CHECK(nodes == 3);
    CHECK(edges == 3);
    CHECK(attrs == 3);
}

TEST_CASE("gexf singleton graph") {
    learn::memory_network net;
    net.n_nodes = 1;
    community::partition p;
    p.assignment = {0};
    p.n_communities = 1;
    temp_dir dir;
    io::export_gexf(net, p, dir.file("one.gexf"));
    const auto text = testutil::read_file(dir.file("one.gexf"));
    CHECK(text.find("<node id=\"0\"") != std::string::npos);
    CHECK(text.find("<edge id=") == std::string::npos);
}

TEST_CASE("report export matches the in-memory records") {
    community::cluster_report rep;
    rep.window_id = 2;
    rep.win = {10, 14};
    rep.partial = true;
    rep.kind = "component";
    rep.cluster_id = 0;
    rep.q = 0.25;
    rep.nodes = {3, 5};
    rep.labels = {"three", "five"};
    rep.peak_time = 12;
    rep.activity = {0, 50, 100, 0};
    rep.activity_raw = {0, 1, 2, 0};
    temp_dir dir;

    SUBCASE("zero clusters -> valid empty document") {
        io::export_report({}, dir.file("empty.json"));
        const auto text = testutil::read_file(dir.file("empty.json"));
        CHECK(text.find("\"records\": []") != std::string::npos);
    }

    SUBCASE("one record round trips") {
        io::export_report(std::vector{rep}, dir.file("rep.json"));
        const auto text = testutil::read_file(dir.file("rep.json"));
        CHECK(text.find("\"window_id\": 2") != std::string::npos);
        CHECK(text.find("\"kind\": \"component\"") != std::string::npos);
        CHECK(text.find("\"nodes\": [") != std::string::npos);
        CHECK(text.find("\"three\"") != std::string::npos);
        CHECK(text.find("\"peak_time\": 12") != std::string::npos);
        CHECK(rep.activity.size() == rep.win.length());
    }
}

TEST_CASE("ground truth round trips") {
    synth::ground_truth truth;
    truth.events.push_back({{4, 9, 17}, {100, 124}, {100, 100, 103}});
    temp_dir dir;
    io::export_ground_truth(truth, dir.file("truth.tsv"));
    const auto back = io::load_ground_truth(dir.file("truth.tsv"));
    REQUIRE(back.events.size() == 1);
    CHECK(back.events[0].nodes == std::vector<node_id>{4, 9, 17});
    CHECK(back.events[0].interval == window{100, 124});
}

TEST_CASE("manifest round trips") {
    temp_dir dir;
    io::dataset_manifest m;
    m.edges_path = dir.file("edges.tsv");
    m.series_path = dir.file("series.csv");
    m.layout = io::series_layout::long_fmt;
    m.labels_path = dir.file("labels.tsv");
    m.has_origin = true;
    m.t_origin = 915148800;
    m.step_seconds = 86400;
    m.n_steps = 1308;
    m.n_nodes = 42;
    io::save_manifest(m, dir.file("manifest.json"));
    const auto back = io::load_manifest(dir.file("manifest.json"));
    CHECK(back.edges_path == m.edges_path);
    CHECK(back.series_path == m.series_path);
    CHECK(back.layout == io::series_layout::long_fmt);
    CHECK(back.has_origin);
    CHECK(back.t_origin == m.t_origin);
    CHECK(back.n_steps == 1308);
    CHECK(back.n_nodes == 42);
}

} // TEST_SUITE
