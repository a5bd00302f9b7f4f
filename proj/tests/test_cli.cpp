#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "pskg/cli.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = pskg::run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pskg_cli_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

double value_after(const std::string& text, const std::string& key) {
    const std::size_t at = text.find(key);
    REQUIRE(at != std::string::npos);
    return std::strtod(text.c_str() + at + key.size(), nullptr);
}

const std::string kInlineRef = "0.4532,0.2622;0.2622,0.0225";

}  // namespace

TEST_CASE("help and usage errors", "[cli]") {
    const CliResult help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK_THAT(help.out, ContainsSubstring("gen"));
    CHECK_THAT(help.out, ContainsSubstring("partition"));
    CHECK_THAT(help.out, ContainsSubstring("analyze"));
    CHECK_THAT(help.out, ContainsSubstring("compare"));
    CHECK_THAT(help.out, ContainsSubstring("bound"));

    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"gen", "--edges", "10", "--out", "x"}).code == 1);  // missing --k
    CHECK(cli({"bound", "--edges", "10", "--workers", "4", "--bogus"}).code == 1);
}

TEST_CASE("gen writes a parseable edge list and echoes its config", "[cli]") {
    const auto dir = scratch("gen_basic");
    const std::string out_path = (dir / "graph.tsv").string();
    const CliResult r = cli({"gen", "--initiator-inline", kInlineRef, "--k", "12", "--edges",
                             "11400", "--seed", "7", "--out", out_path});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.err, ContainsSubstring("config: cmd=gen model=pskg n=2 k=12"));
    CHECK_THAT(r.err, ContainsSubstring("seed=7"));
    CHECK_THAT(r.err, ContainsSubstring("generated"));

    const pskg::EdgeList g = pskg::read_edge_list_tsv(pskg::read_file(out_path));
    CHECK(g.n_vertices == 4096);
    CHECK(static_cast<double>(g.edges.size()) == Approx(11400.0).margin(427.0));
}

TEST_CASE("gen without a seed derives one and echoes it", "[cli]") {
    const auto dir = scratch("gen_seed");
    const std::string out_path = (dir / "g.tsv").string();
    const CliResult r = cli({"gen", "--initiator-inline", kInlineRef, "--k", "4", "--edges",
                             "50", "--out", out_path});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.err, ContainsSubstring(" seed="));
}

TEST_CASE("gen handles the exact-count models and zero edges", "[cli]") {
    const auto dir = scratch("gen_skg");
    const std::string out_path = (dir / "empty.tsv").string();
    const CliResult r = cli({"gen", "--initiator-inline", kInlineRef, "--k", "6", "--edges",
                             "0", "--model", "skg", "--seed", "1", "--out", out_path});
    REQUIRE(r.code == 0);
    const pskg::EdgeList g = pskg::read_edge_list_tsv(pskg::read_file(out_path));
    CHECK(g.n_vertices == 64);
    CHECK(g.edges.empty());

    const std::string exact_path = (dir / "exact.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", kInlineRef, "--k", "6", "--edges", "500",
                 "--model", "skg-equiv", "--seed", "1", "--out", exact_path})
                .code == 0);
    CHECK(pskg::read_edge_list_tsv(pskg::read_file(exact_path)).edges.size() == 500);
}

TEST_CASE("gen worker count does not change the bytes", "[cli]") {
    const auto dir = scratch("gen_workers");
    const std::string one = (dir / "w1.bin").string();
    const std::string four = (dir / "w4.bin").string();
    const std::vector<std::string> base{"gen",    "--initiator-inline", kInlineRef,
                                        "--k",    "10",                 "--edges",
                                        "4000",   "--seed",             "5",
                                        "--format", "binary"};
    auto args1 = base;
    args1.insert(args1.end(), {"--workers", "1", "--out", one});
    auto args4 = base;
    args4.insert(args4.end(), {"--workers", "4", "--out", four});
    REQUIRE(cli(std::move(args1)).code == 0);
    REQUIRE(cli(std::move(args4)).code == 0);
    CHECK(pskg::read_file(one) == pskg::read_file(four));
}

TEST_CASE("gen dedupe collapses duplicates", "[cli]") {
    const auto dir = scratch("gen_dedupe");
    const std::string out_path = (dir / "d.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", "0.25,0.25;0.25,0.25", "--k", "4", "--edges",
                 "500", "--model", "skg", "--seed", "2", "--dedupe", "--out", out_path})
                .code == 0);
    const pskg::EdgeList g = pskg::read_edge_list_tsv(pskg::read_file(out_path));
    CHECK(g.edges.size() < 500);
    for (std::size_t i = 1; i < g.edges.size(); ++i) {
        REQUIRE(g.edges[i - 1] < g.edges[i]);
    }
}

TEST_CASE("gen rejects bad inputs with the right exit codes", "[cli]") {
    const auto dir = scratch("gen_bad");
    const std::string out_path = (dir / "g.tsv").string();

    // Unreadable initiator file is a runtime failure.
    const CliResult missing = cli({"gen", "--initiator", (dir / "absent.init").string(),
                                   "--k", "2", "--edges", "5", "--out", out_path});
    CHECK(missing.code == 2);
    CHECK_THAT(missing.err, ContainsSubstring("absent.init"));

    // Conflicting or absent initiator choices are usage errors.
    CHECK(cli({"gen", "--initiator", "x", "--initiator-inline", kInlineRef, "--k", "2",
               "--edges", "5", "--out", out_path})
              .code == 1);
    CHECK(cli({"gen", "--k", "2", "--edges", "5", "--out", out_path}).code == 1);

    const CliResult model = cli({"gen", "--initiator-inline", kInlineRef, "--k", "2",
                                 "--edges", "5", "--model", "erdos", "--out", out_path});
    CHECK(model.code == 1);
    CHECK_THAT(model.err, ContainsSubstring("skg-equiv"));

    CHECK(cli({"gen", "--initiator-inline", kInlineRef, "--k", "2", "--edges", "5",
               "--format", "xml", "--out", out_path})
              .code == 1);
    CHECK(cli({"gen", "--initiator-inline", "0.5,0.5;0.5", "--k", "2", "--edges", "5",
               "--out", out_path})
              .code == 1);
}

TEST_CASE("partition prints the load-balanced table", "[cli]") {
    const CliResult r =
        cli({"partition", "--initiator-inline", "0.3,0.25;0.2,0.25", "--k", "3", "--workers", "4"});
    REQUIRE(r.code == 0);
    const pskg::PartitionTable table = pskg::read_partition_table(r.out);
    REQUIRE(table.n_workers() == 4);
    CHECK(table.workers[0].u_low == 0);
    CHECK(table.workers[0].u_up == 1);
    CHECK(table.workers[1].u_up == 3);
    CHECK(table.workers[2].u_up == 5);
    CHECK(table.workers[3].u_up == 8);
    CHECK(table.workers[1].expected_mass == Approx(0.27225).margin(1e-12));

    const auto dir = scratch("partition_out");
    const std::string out_path = (dir / "parts.tsv").string();
    REQUIRE(cli({"partition", "--initiator-inline", "0.3,0.25;0.2,0.25", "--k", "3",
                 "--workers", "4", "--out", out_path})
                .code == 0);
    CHECK(pskg::read_partition_table(pskg::read_file(out_path)) == table);

    CHECK(cli({"partition", "--initiator-inline", kInlineRef, "--k", "3", "--workers", "0"})
              .code == 1);
}

TEST_CASE("bound prints the confidence bound", "[cli]") {
    const CliResult r = cli({"bound", "--edges", "16000", "--workers", "16"});
    REQUIRE(r.code == 0);
    CHECK(value_after(r.out, "per_worker_mean=") == Approx(1000.0));
    CHECK(value_after(r.out, "delta=") == Approx(87.97473981325241).epsilon(1e-12));
    CHECK(value_after(r.out, "max_load_bound=") == Approx(1087.9747398132524).epsilon(1e-12));

    CHECK(cli({"bound", "--edges", "16000", "--workers", "16", "--alpha", "1.0"}).code == 1);
    CHECK(cli({"bound", "--edges", "16000", "--workers", "1"}).code == 1);
}

TEST_CASE("analyze writes one csv per requested pattern", "[cli]") {
    const auto dir = scratch("analyze");
    const std::string graph = (dir / "g.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", kInlineRef, "--k", "8", "--edges", "2000",
                 "--seed", "3", "--out", graph})
                .code == 0);

    const std::string out_dir = (dir / "patterns").string();
    const CliResult r = cli({"analyze", "--in", graph, "--out-dir", out_dir});
    REQUIRE(r.code == 0);
    for (const std::string kind : {"degree", "hop", "scree", "netvalue"}) {
        const std::string path = out_dir + "/" + kind + ".csv";
        CHECK_THAT(r.err, ContainsSubstring("wrote " + path));
        const pskg::PatternSeries s =
            pskg::read_series_csv(pskg::read_file(path), pskg::parse_kind(kind));
        CHECK(!s.points.empty());
    }
    // Default scree depth is 20 ranks.
    const pskg::PatternSeries scree = pskg::read_series_csv(
        pskg::read_file(out_dir + "/scree.csv"), pskg::PatternKind::scree);
    CHECK(scree.points.size() == 20);

    const std::string only = (dir / "only").string();
    REQUIRE(cli({"analyze", "--in", graph, "--patterns", "degree", "--out-dir", only}).code == 0);
    CHECK(std::filesystem::exists(only + "/degree.csv"));
    CHECK_FALSE(std::filesystem::exists(only + "/hop.csv"));
}

TEST_CASE("analyze clamps spectra to the graph size and sniffs binary", "[cli]") {
    const auto dir = scratch("analyze_small");
    const std::string graph = (dir / "tiny.bin").string();
    REQUIRE(cli({"gen", "--initiator-inline", kInlineRef, "--k", "2", "--edges", "9",
                 "--seed", "4", "--format", "binary", "--out", graph})
                .code == 0);

    const std::string out_dir = (dir / "p").string();
    REQUIRE(cli({"analyze", "--in", graph, "--out-dir", out_dir, "--hop-sources", "2"}).code == 0);
    const pskg::PatternSeries scree = pskg::read_series_csv(
        pskg::read_file(out_dir + "/scree.csv"), pskg::PatternKind::scree);
    CHECK(scree.points.size() == 4);  // N = 4 caps the default 20
}

TEST_CASE("analyze rejects unknown patterns and missing files", "[cli]") {
    const auto dir = scratch("analyze_bad");
    const std::string graph = (dir / "g.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", kInlineRef, "--k", "3", "--edges", "20",
                 "--seed", "1", "--out", graph})
                .code == 0);

    const CliResult unknown = cli({"analyze", "--in", graph, "--patterns", "degree,wavelet"});
    CHECK(unknown.code == 1);
    CHECK_THAT(unknown.err, ContainsSubstring("netvalue"));

    CHECK(cli({"analyze", "--in", graph, "--direction", "sideways"}).code == 1);
    CHECK(cli({"analyze", "--in", (dir / "absent.tsv").string()}).code == 2);
}

TEST_CASE("compare pipelines end to end", "[cli]") {
    const auto dir = scratch("compare");
    const std::string graph = (dir / "g.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", kInlineRef, "--k", "8", "--edges", "1500",
                 "--seed", "11", "--out", graph})
                .code == 0);
    const std::string dir_a = (dir / "a").string();
    const std::string dir_b = (dir / "b").string();
    REQUIRE(cli({"analyze", "--in", graph, "--out-dir", dir_a}).code == 0);
    REQUIRE(cli({"analyze", "--in", graph, "--out-dir", dir_b}).code == 0);

    const CliResult same = cli({"compare", "-a", dir_a, "-b", dir_b});
    CHECK(same.code == 0);
    CHECK_THAT(same.out, ContainsSubstring("degree: distance=0 threshold="));
    CHECK_THAT(same.out, ContainsSubstring("\nPASS\n"));

    // Identical inputs under a zero threshold still pass; a different graph fails.
    const std::string other = (dir / "h.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", "0.25,0.25;0.25,0.25", "--k", "8", "--edges",
                 "1500", "--seed", "12", "--out", other})
                .code == 0);
    const std::string dir_c = (dir / "c").string();
    REQUIRE(cli({"analyze", "--in", other, "--out-dir", dir_c}).code == 0);
    const CliResult diff =
        cli({"compare", "-a", dir_a, "-b", dir_c, "--threshold-degree", "0"});
    CHECK(diff.code == 2);
    CHECK_THAT(diff.out, ContainsSubstring("degree: distance="));
    CHECK_THAT(diff.out, ContainsSubstring("FAIL"));
}

TEST_CASE("compare accepts single files and partial directories", "[cli]") {
    const auto dir = scratch("compare_files");
    const std::string graph = (dir / "g.tsv").string();
    REQUIRE(cli({"gen", "--initiator-inline", kInlineRef, "--k", "6", "--edges", "300",
                 "--seed", "2", "--out", graph})
                .code == 0);
    const std::string dir_a = (dir / "a").string();
    REQUIRE(cli({"analyze", "--in", graph, "--out-dir", dir_a}).code == 0);

    CHECK(cli({"compare", "-a", dir_a + "/degree.csv", "-b", dir_a + "/degree.csv"}).code == 0);

    // Mismatched kinds across two single files cannot be compared.
    const CliResult mismatch =
        cli({"compare", "-a", dir_a + "/degree.csv", "-b", dir_a + "/hop.csv"});
    CHECK(mismatch.code == 1);

    // A partial directory compares over the shared subset only.
    const std::string dir_b = (dir / "b").string();
    std::filesystem::create_directories(dir_b);
    std::filesystem::copy_file(dir_a + "/degree.csv", dir_b + "/degree.csv");
    const CliResult subset = cli({"compare", "-a", dir_a, "-b", dir_b});
    CHECK(subset.code == 0);
    CHECK_THAT(subset.out, ContainsSubstring("degree:"));
    CHECK(subset.out.find("hop:") == std::string::npos);

    const std::string empty_dir = (dir / "empty").string();
    std::filesystem::create_directories(empty_dir);
    CHECK(cli({"compare", "-a", dir_a, "-b", empty_dir}).code == 1);

    // A name that identifies no pattern kind is rejected.
    std::filesystem::copy_file(dir_a + "/degree.csv", (dir / "mystery.csv").string());
    CHECK(cli({"compare", "-a", (dir / "mystery.csv").string(), "-b", dir_a + "/degree.csv"})
              .code == 1);
}
