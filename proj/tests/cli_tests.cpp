// End-to-end tests of the memnet binary: exit codes, determinism, and the
// pipeline-vs-staged-composition equality. The binary path comes from the
// MEMNET_CLI environment variable (set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "test_helpers.hpp"

using testutil::read_file;
using testutil::temp_dir;
using testutil::write_file;

namespace {

struct run_result {
    int exit_code = -1;
    std::string output;
};

std::string cli_path() {
    const char* env = std::getenv("MEMNET_CLI");
    REQUIRE_MESSAGE(env != nullptr, "MEMNET_CLI must point at the built binary");
    return env;
}

run_result run_cli_raw(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    run_result res;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

run_result run_cli(const std::string& args, const std::string& env_prefix = "") {
    return run_cli_raw(env_prefix + (env_prefix.empty() ? "" : " ") + cli_path() + " " + args +
                       " 2>&1");
}

// 100-node fixture: nodes 0..9 carry three clear spikes, the rest are flat.
void write_bursty_fixture(const temp_dir& dir) {
    std::string edges;
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j)
            if ((i + j) % 3 == 0) edges += std::to_string(i) + "\t" + std::to_string(j) + "\n";
    for (int i = 10; i < 99; ++i) edges += std::to_string(i) + "\t" + std::to_string(i + 1) + "\n";
    write_file(dir.file("edges.tsv"), edges);

    std::string series;
    const int T = 50;
    for (int i = 0; i < 100; ++i) {
        series += std::to_string(i);
        for (int t = 0; t < T; ++t) {
            int v = 1;
            if (i < 10 && (t == 10 || t == 11 || t == 12)) v = 100;
            series += "," + std::to_string(v);
        }
        series += "\n";
    }
    write_file(dir.file("series.csv"), series);
}

} // namespace

TEST_CASE("filter keeps exactly the bursty nodes") {
    temp_dir dir;
    write_bursty_fixture(dir);
    temp_dir out;
    const auto res = run_cli("filter --edges " + dir.file("edges.tsv") + " --series " +
                             dir.file("series.csv") + " --out " + out.path());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("kept 10 / 100 nodes") != std::string::npos);

    // burstiness table: three bursts each for kept nodes
    const auto table = read_file(out.file("burstiness.tsv"));
    CHECK(table.find("0\t3\t1") != std::string::npos);
    CHECK(table.find("99\t0\t0") != std::string::npos);
}

TEST_CASE("filter with min-bursts 0 keeps everything") {
    temp_dir dir;
    write_bursty_fixture(dir);
    temp_dir out;
    const auto res = run_cli("filter --edges " + dir.file("edges.tsv") + " --series " +
                             dir.file("series.csv") + " --min-bursts 0 --out " + out.path());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("kept 100 / 100 nodes") != std::string::npos);
}

TEST_CASE("missing input file exits 2 and names the path") {
    temp_dir out;
    const auto res = run_cli("filter --edges /no/such/file.tsv --series /no/such/series.csv "
                             "--out " + out.path());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("/no/such/file.tsv") != std::string::npos);
}

TEST_CASE("invalid configuration exits 3") {
    temp_dir dir;
    write_bursty_fixture(dir);
    temp_dir out;
    {
        const auto res = run_cli("filter --edges " + dir.file("edges.tsv") + " --series " +
                                 dir.file("series.csv") + " --c0 -1 --out " + out.path());
        CHECK(res.exit_code == 3);
    }
    {
        const auto res = run_cli("pipeline --edges " + dir.file("edges.tsv") + " --series " +
                                 dir.file("series.csv") + " --window nonsense --out " + out.path());
        CHECK(res.exit_code == 3);
    }
    {
        // monthly windows without --t0
        const auto res = run_cli("pipeline --edges " + dir.file("edges.tsv") + " --series " +
                                 dir.file("series.csv") + " --out " + out.path());
        CHECK(res.exit_code == 3);
        CHECK(res.output.find("missing-timestamps") != std::string::npos);
    }
    {
        const auto res = run_cli("no-such-subcommand");
        CHECK(res.exit_code == 3);
    }
}

TEST_CASE("synth then pipeline detects the planted event deterministically") {
    temp_dir data;
    auto res = run_cli("synth --n-nodes 300 --steps 240 --rate 1 --event 15:100:124:10 --seed 5 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);

    temp_dir out1, out2;
    const std::string common = "pipeline --manifest " + data.file("manifest.json") +
                               " --window 240 --seed 9 --jobs 1 --out ";
    res = run_cli(common + out1.path());
    REQUIRE(res.exit_code == 0);
    res = run_cli(common + out2.path());
    REQUIRE(res.exit_code == 0);

    const auto rep1 = read_file(out1.file("report.json"));
    CHECK(rep1 == read_file(out2.file("report.json")));
    CHECK(read_file(out1.file("index.json")) == read_file(out2.file("index.json")));
    CHECK(read_file(out1.file("window_w000.tsv")) == read_file(out2.file("window_w000.tsv")));
    CHECK(rep1.find("\"kind\": \"component\"") != std::string::npos);
}

TEST_CASE("pipeline equals filter -> learn -> report composed by hand") {
    temp_dir data;
    auto res = run_cli("synth --n-nodes 250 --steps 200 --rate 1 --event 12:80:104:10 --seed 21 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);

    temp_dir direct;
    res = run_cli("pipeline --manifest " + data.file("manifest.json") +
                  " --window 100 --seed 4 --out " + direct.path());
    REQUIRE(res.exit_code == 0);

    temp_dir reduced, learned, reported;
    res = run_cli("filter --manifest " + data.file("manifest.json") + " --out " + reduced.path());
    REQUIRE(res.exit_code == 0);
    res = run_cli("learn --manifest " + reduced.file("manifest.json") +
                  " --window 100 --seed 4 --out " + learned.path());
    REQUIRE(res.exit_code == 0);
    res = run_cli("report --manifest " + data.file("manifest.json") + " --index " +
                  learned.file("index.json") + " --seed 4 --out " + reported.path());
    REQUIRE(res.exit_code == 0);

    CHECK(read_file(direct.file("window_w000.tsv")) == read_file(learned.file("window_w000.tsv")));
    CHECK(read_file(direct.file("window_w001.tsv")) == read_file(learned.file("window_w001.tsv")));
    CHECK(read_file(direct.file("report.json")) == read_file(reported.file("report.json")));
}

TEST_CASE("communities command reproduces pipeline partitions") {
    temp_dir data;
    auto res = run_cli("synth --n-nodes 200 --steps 240 --rate 1 --event 10:100:124:10 --seed 31 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);
    temp_dir piped;
    res = run_cli("pipeline --manifest " + data.file("manifest.json") +
                  " --window 240 --seed 2 --out " + piped.path());
    REQUIRE(res.exit_code == 0);
    temp_dir comm;
    res = run_cli("communities --network " + piped.file("window_w000.tsv") +
                  " --seed 2 --window-id 0 --out " + comm.path());
    REQUIRE(res.exit_code == 0);
    CHECK(read_file(comm.file("network.gexf")) == read_file(piped.file("window_w000.gexf")));
}

TEST_CASE("scalar and simd kernel selections produce identical artifacts") {
    temp_dir data;
    auto res = run_cli("synth --n-nodes 220 --steps 180 --rate 1 --event 12:60:84:10 --seed 13 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);

    temp_dir scalar_out, simd_out;
    const std::string args = "pipeline --manifest " + data.file("manifest.json") +
                             " --window 90 --seed 3 --out ";
    res = run_cli(args + scalar_out.path(), "MEMNET_KERNELS=scalar");
    REQUIRE(res.exit_code == 0);
    res = run_cli(args + simd_out.path(), "MEMNET_KERNELS=avx2");
    REQUIRE(res.exit_code == 0);

    CHECK(read_file(scalar_out.file("report.json")) == read_file(simd_out.file("report.json")));
    CHECK(read_file(scalar_out.file("window_w000.tsv")) ==
          read_file(simd_out.file("window_w000.tsv")));
    CHECK(read_file(scalar_out.file("window_w001.tsv")) ==
          read_file(simd_out.file("window_w001.tsv")));
    CHECK(read_file(scalar_out.file("stats.json")) == read_file(simd_out.file("stats.json")));
}

TEST_CASE("worker count does not change any artifact") {
    temp_dir data;
    auto res = run_cli("synth --n-nodes 260 --steps 200 --rate 1 --event 12:80:104:10 --seed 40 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);
    temp_dir j1, j2;
    const std::string args = "pipeline --manifest " + data.file("manifest.json") +
                             " --window 100 --seed 8 --out ";
    res = run_cli(args + j1.path() + " --jobs 1");
    REQUIRE(res.exit_code == 0);
    res = run_cli(args + j2.path() + " --jobs 2");
    REQUIRE(res.exit_code == 0);
    CHECK(read_file(j1.file("report.json")) == read_file(j2.file("report.json")));
    CHECK(read_file(j1.file("window_w000.tsv")) == read_file(j2.file("window_w000.tsv")));
    CHECK(read_file(j1.file("window_w001.tsv")) == read_file(j2.file("window_w001.tsv")));
}

TEST_CASE("gexf output is well-formed xml") {
    const auto probe = run_cli_raw("python3 -c 'import xml.dom.minidom' 2>/dev/null");
    if (probe.exit_code != 0) {
        MESSAGE("python3 unavailable; skipping xml well-formedness check");
        return;
    }
    temp_dir data;
    auto res = run_cli("synth --n-nodes 150 --steps 200 --rate 1 --event 10:80:104:10 --seed 51 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);
    temp_dir out;
    res = run_cli("pipeline --manifest " + data.file("manifest.json") +
                  " --window 200 --out " + out.path());
    REQUIRE(res.exit_code == 0);
    const auto check = run_cli_raw(
        "python3 -c \"import xml.dom.minidom,sys; "
        "d=xml.dom.minidom.parse('" + out.file("window_w000.gexf") + "'); "
        "assert d.documentElement.tagName=='gexf'; "
        "assert d.getElementsByTagName('graph'); "
        "assert d.getElementsByTagName('node'); "
        "assert d.getElementsByTagName('attvalue')\"");
    CHECK(check.exit_code == 0);
}

TEST_CASE("all-zero dataset produces empty networks and exit 0") {
    temp_dir dir;
    write_file(dir.file("edges.tsv"), "0\t1\n1\t2\n");
    std::string series;
    for (int i = 0; i < 3; ++i) {
        series += std::to_string(i);
        for (int t = 0; t < 12; ++t) series += ",0";
        series += "\n";
    }
    write_file(dir.file("series.csv"), series);
    temp_dir out;
    const auto res = run_cli("pipeline --edges " + dir.file("edges.tsv") + " --series " +
                             dir.file("series.csv") + " --window 4 --out " + out.path());
    CHECK(res.exit_code == 0);
    const auto report = read_file(out.file("report.json"));
    CHECK(report.find("\"records\": []") != std::string::npos);
    const auto net = read_file(out.file("window_w000.tsv"));
    CHECK(net.find('\t') == std::string::npos); // header only
}

TEST_CASE("recall command completes patterns") {
    temp_dir data;
    auto res = run_cli("synth --n-nodes 300 --steps 240 --rate 1 --event 15:100:124:10 --seed 5 "
                       "--out " + data.path());
    REQUIRE(res.exit_code == 0);
    temp_dir piped;
    res = run_cli("pipeline --manifest " + data.file("manifest.json") +
                  " --window 240 --seed 9 --out " + piped.path());
    REQUIRE(res.exit_code == 0);

    // Seed with 80% of the planted cluster (from the ground-truth file).
    const auto truth = read_file(data.file("truth.tsv"));
    const auto tab = truth.rfind('\t');
    REQUIRE(tab != std::string::npos);
    std::string ids = truth.substr(tab + 1);
    std::vector<std::string> cluster;
    std::string cur;
    for (const char c : ids) {
        if (c == ',' || c == '\n') {
            if (!cur.empty()) cluster.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    REQUIRE(cluster.size() == 15);
    std::string seeds;
    for (std::size_t i = 0; i < 12; ++i) seeds += cluster[i] + "\n";
    write_file(data.file("seeds.txt"), seeds);

    const std::string base = "recall --manifest " + data.file("manifest.json") + " --network " +
                             piped.file("window_w000.tsv") + " --seeds " + data.file("seeds.txt");
    res = run_cli(base + " --out " + data.file("pattern.tsv"));
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("status=converged") != std::string::npos);
    const auto pattern = read_file(data.file("pattern.tsv"));
    CHECK(pattern.find("# memnet pattern") == 0);
    CHECK(pattern.find("status converged") != std::string::npos);

    // Empty seed file: everything stays inactive.
    write_file(data.file("empty_seeds.txt"), "");
    res = run_cli("recall --manifest " + data.file("manifest.json") + " --network " +
                  piped.file("window_w000.tsv") + " --seeds " + data.file("empty_seeds.txt"));
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("status=converged") != std::string::npos);
    CHECK(res.output.find("active_entries=0") != std::string::npos);

    // Threshold above any possible row sum: one step to all-inactive.
    res = run_cli(base + " --theta 1e9");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("active_entries=0") != std::string::npos);

    // Network window outside the dataset: shape error.
    temp_dir tiny;
    write_file(tiny.file("edges.tsv"), "0\t1\n");
    write_file(tiny.file("series.csv"), "0,1,2\n1,3,4\n");
    res = run_cli("recall --edges " + tiny.file("edges.tsv") + " --series " +
                  tiny.file("series.csv") + " --network " + piped.file("window_w000.tsv") +
                  " --seeds " + data.file("seeds.txt"));
    CHECK(res.exit_code == 3);
}

TEST_CASE("monthly email pipeline localizes a burst month end to end") {
    // Six months of logs (1999-01-01..1999-06-30). Eight group addresses
    // exchange two emails each per day over March 10-20; everyone else sends
    // background mail on staggered days so no background pair co-bursts.
    std::vector<std::string> addr;
    for (int i = 0; i < 8; ++i) addr.push_back("g" + std::to_string(i) + "@x");
    for (int i = 0; i < 10; ++i) addr.push_back("f" + std::to_string(i) + "@x");

    auto date_of_day = [](int day) {
        static const int month_len[] = {31, 28, 31, 30, 31, 30};
        int m = 0;
        while (day >= month_len[m]) {
            day -= month_len[m];
            ++m;
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "1999-%02d-%02d 09:00:00", m + 1, day + 1);
        return std::string(buf);
    };

    std::string log;
    for (std::size_t i = 0; i < addr.size(); ++i)
        for (int k = 0; k < 20; ++k) {
            const int day = static_cast<int>(3 + i + 9 * k) % 181;
            log += date_of_day(day) + "\t" + addr[i] + "\t" + addr[(i + 1) % addr.size()] + "\n";
        }
    for (int day = 68; day <= 78; ++day)
        for (int i = 0; i < 8; ++i) {
            log += date_of_day(day) + "\t" + addr[i] + "\t" + addr[(i + 1) % 8] + "\n";
            log += date_of_day(day) + "\t" + addr[i] + "\t" + addr[(i + 2) % 8] + "\n";
        }

    temp_dir dir;
    write_file(dir.file("mail.tsv"), log);
    temp_dir ingested;
    auto res = run_cli("ingest --input " + dir.file("mail.tsv") +
                       " --format simple --from 1999-01-01 --to 1999-07-01 --min-sent 3 --out " +
                       ingested.path());
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("kept 18 / 18 addresses") != std::string::npos);

    temp_dir out;
    res = run_cli("pipeline --manifest " + ingested.file("manifest.json") +
                  " --window monthly --out " + out.path());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.output.find("6 window(s)") != std::string::npos);

    const auto report = nlohmann::json::parse(read_file(out.file("report.json")));
    // Largest component of the March window (id 2) is the 8-address group and
    // its full-span activity peaks inside March (days 59..89).
    std::size_t best_size = 0;
    nlohmann::json best;
    for (const auto& rec : report.at("records")) {
        if (rec.at("window_id") != 2 || rec.at("kind") != "component") continue;
        if (rec.at("size").get<std::size_t>() > best_size) {
            best_size = rec.at("size").get<std::size_t>();
            best = rec;
        }
    }
    REQUIRE(best_size == 8);
    const auto labels = best.at("labels");
    for (const auto& l : labels) CHECK(l.get<std::string>().front() == 'g');
    const std::size_t peak = best.at("peak_time").get<std::size_t>();
    CHECK(peak >= 68);
    CHECK(peak <= 78);
    // No other window harbors a component anywhere near that size.
    for (const auto& rec : report.at("records"))
        if (rec.at("window_id") != 2) CHECK(rec.at("size").get<std::size_t>() <= 3);
}

TEST_CASE("ingest builds a dataset from a simple email log") {
    temp_dir dir;
    write_file(dir.file("mail.tsv"),
               "2001-01-02 10:00:00\ta@corp\tb@corp,c@corp\n"
               "2001-01-02 11:00:00\ta@corp\tb@corp\n"
               "2001-01-05 09:00:00\ta@corp\tb@corp\n"
               "2001-01-06 09:00:00\tb@corp\ta@corp\n"
               "2001-01-07 09:00:00\tb@corp\ta@corp\n"
               "2001-01-08 09:00:00\tb@corp\tc@corp\n"
               "garbage line without tabs\n");
    temp_dir out;
    const auto res = run_cli("ingest --input " + dir.file("mail.tsv") +
                             " --format simple --from 2001-01-01 --to 2001-02-01 --min-sent 3 "
                             "--out " + out.path());
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("kept 2 / 3 addresses") != std::string::npos);
    const auto labels = read_file(out.file("labels.tsv"));
    CHECK(labels.find("a@corp") != std::string::npos);
    CHECK(labels.find("b@corp") != std::string::npos);
    CHECK(labels.find("c@corp") == std::string::npos);

    // The produced manifest loads and runs through the pipeline.
    temp_dir piperun;
    const auto res2 = run_cli("pipeline --manifest " + out.file("manifest.json") +
                              " --window monthly --out " + piperun.path());
    CHECK(res2.exit_code == 0);
}

