#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pskg/analysis.hpp"
#include "pskg/generator.hpp"
#include "pskg/initiator.hpp"
#include "pskg/io.hpp"
#include "pskg/partition.hpp"
#include "pskg/runner.hpp"

namespace pskg {

namespace detail {

inline InitiatorMatrix load_initiator(const std::string& path, const std::string& inline_text) {
    if (path.empty() == inline_text.empty()) {
        throw std::invalid_argument("provide exactly one of --initiator and --initiator-inline");
    }
    if (!path.empty()) return parse_initiator(read_file(path));
    return parse_initiator_inline(inline_text);
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

inline PatternKind kind_from_filename(const std::string& path) {
    const std::string name = std::filesystem::path(path).filename().string();
    if (name.find("netvalue") != std::string::npos) return PatternKind::netvalue;
    if (name.find("degree") != std::string::npos) return PatternKind::degree;
    if (name.find("hop") != std::string::npos) return PatternKind::hop;
    if (name.find("scree") != std::string::npos) return PatternKind::scree;
    throw std::invalid_argument("cannot infer pattern kind from file name '" + name +
                                "' (expected it to contain degree, hop, scree or netvalue)");
}

/// Series set from either an analyze output directory (<kind>.csv files) or
/// a single series file whose name identifies its kind.
inline std::vector<PatternSeries> load_pattern_set(const std::string& path,
                                                   const std::vector<PatternKind>& kinds) {
    std::vector<PatternSeries> set;
    if (std::filesystem::is_directory(path)) {
        for (PatternKind kind : kinds) {
            const std::string file = (std::filesystem::path(path) / (std::string(kind_name(kind)) + ".csv")).string();
            if (std::filesystem::exists(file)) set.push_back(read_series_csv(read_file(file), kind));
        }
        if (set.empty()) {
            throw std::invalid_argument("no pattern CSV files (degree.csv, hop.csv, scree.csv, netvalue.csv) in '" + path + "'");
        }
        return set;
    }
    set.push_back(read_series_csv(read_file(path), kind_from_filename(path)));
    return set;
}

}  // namespace detail

/// Full command-line driver; kept out of main() so tests can run subcommands
/// in-process. args excludes the program name. Returns the process exit
/// status: 0 success, 1 usage error, 2 runtime failure.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kronecker-family graph generation, partitioning and pattern analysis"};
    app.name("pskg");
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a graph and write its edge list");
    std::string gen_initiator, gen_inline, gen_model = "pskg", gen_out, gen_format = "tsv";
    unsigned gen_k = 1;
    double gen_edges = 0.0;
    std::uint64_t gen_seed = 0;
    unsigned gen_workers = 1;
    bool gen_dedupe = false, gen_uniform = false;
    gen->add_option("--initiator", gen_initiator, "initiator matrix file");
    gen->add_option("--initiator-inline", gen_inline, "inline initiator, e.g. \"0.5,0.2;0.2,0.1\"");
    gen->add_option("--k", gen_k, "Kronecker depth")->required();
    gen->add_option("--edges", gen_edges, "edge count (exact for skg/skg-equiv, mean for pskg)")->required();
    gen->add_option("--seed", gen_seed, "random seed (default: derived from the clock, echoed)");
    gen->add_option("--model", gen_model, "skg, skg-equiv or pskg")->capture_default_str();
    gen->add_option("--workers", gen_workers, "worker thread count (pskg only)")->capture_default_str();
    gen->add_option("--out", gen_out, "output edge list path")->required();
    gen->add_option("--format", gen_format, "tsv or binary")->capture_default_str();
    gen->add_flag("--dedupe", gen_dedupe, "collapse duplicate edges after generation");
    gen->add_flag("--uniform-split", gen_uniform, "split vertices evenly instead of by expected load");

    // partition
    auto* part = app.add_subcommand("partition", "Compute load-balanced vertex ranges");
    std::string part_initiator, part_inline, part_out;
    unsigned part_k = 1;
    std::size_t part_workers = 1;
    part->add_option("--initiator", part_initiator, "initiator matrix file");
    part->add_option("--initiator-inline", part_inline, "inline initiator");
    part->add_option("--k", part_k, "Kronecker depth")->required();
    part->add_option("--workers", part_workers, "worker count")->required();
    part->add_option("--out", part_out, "output path (default: standard output)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Compute graph patterns as CSV series");
    std::string an_in, an_format = "auto", an_patterns = "degree,hop,scree,netvalue";
    std::string an_direction = "out", an_outdir = ".";
    double an_bin_ratio = 2.0;
    unsigned an_max_hops = 8;
    std::size_t an_hop_sources = 0;
    std::uint64_t an_hop_seed = 1;
    std::size_t an_top_m = 20, an_netvalue_top = 100;
    analyze->add_option("--in", an_in, "edge list path")->required();
    analyze->add_option("--format", an_format, "tsv, binary or auto")->capture_default_str();
    analyze->add_option("--patterns", an_patterns, "comma list of degree,hop,scree,netvalue")->capture_default_str();
    analyze->add_option("--direction", an_direction, "degree direction: in, out or total")->capture_default_str();
    analyze->add_option("--bin-ratio", an_bin_ratio, "degree histogram bin ratio")->capture_default_str();
    analyze->add_option("--max-hops", an_max_hops, "largest hop count h in the hop plot")->capture_default_str();
    analyze->add_option("--hop-sources", an_hop_sources,
                        "estimate the hop plot from this many sampled BFS sources (0 = exact)")
        ->capture_default_str();
    analyze->add_option("--hop-seed", an_hop_seed, "seed for BFS source sampling")->capture_default_str();
    analyze->add_option("--top-m", an_top_m, "singular values in the scree plot")->capture_default_str();
    analyze->add_option("--netvalue-top", an_netvalue_top, "components in the network value series")
        ->capture_default_str();
    analyze->add_option("--out-dir", an_outdir, "directory for <pattern>.csv outputs")->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "Compare two pattern sets");
    std::string cmp_a, cmp_b;
    PatternThresholds thresholds;
    compare->add_option("-a,--a", cmp_a, "analyze output dir or single series CSV")->required();
    compare->add_option("-b,--b", cmp_b, "analyze output dir or single series CSV")->required();
    compare->add_option("--threshold-degree", thresholds.degree)->capture_default_str();
    compare->add_option("--threshold-hop", thresholds.hop)->capture_default_str();
    compare->add_option("--threshold-scree", thresholds.scree)->capture_default_str();
    compare->add_option("--threshold-netvalue", thresholds.netvalue)->capture_default_str();

    // bound
    auto* bound = app.add_subcommand("bound", "Load-imbalance confidence bound");
    double bnd_edges = 0.0, bnd_alpha = 0.95;
    std::size_t bnd_workers = 2;
    bound->add_option("--edges", bnd_edges, "expected total edges E")->required();
    bound->add_option("--workers", bnd_workers, "worker count")->required();
    bound->add_option("--alpha", bnd_alpha, "confidence level in (0,1)")->capture_default_str();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            if (gen->count("--seed") == 0) {
                gen_seed = static_cast<std::uint64_t>(
                    std::chrono::system_clock::now().time_since_epoch().count());
            }
            const FileFormat format = parse_format(gen_format);
            InitiatorMatrix p = detail::load_initiator(gen_initiator, gen_inline);
            GraphSpec spec{std::move(p), gen_k, gen_edges, gen_seed, parse_model(gen_model), gen_workers};
            spec.validate();
            err << "config: cmd=gen model=" << model_name(spec.model) << " n=" << spec.initiator.n()
                << " k=" << spec.k << " edges=" << detail::format_double(spec.expected_edges)
                << " seed=" << spec.seed << " workers=" << spec.workers << " format=" << gen_format
                << " dedupe=" << (gen_dedupe ? 1 : 0) << " uniform-split=" << (gen_uniform ? 1 : 0)
                << " out=" << gen_out << "\n";
            const auto start = std::chrono::steady_clock::now();
            EdgeList g = run_generation(spec, {gen_uniform});
            if (gen_dedupe) g = dedupe_edges(g);
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::vector<std::string> fingerprint{
                "model=" + std::string(model_name(spec.model)) + " n=" + std::to_string(spec.initiator.n()) +
                " k=" + std::to_string(spec.k) + " E=" + detail::format_double(spec.expected_edges) +
                " seed=" + std::to_string(spec.seed)};
            write_file(gen_out, write_edge_list(g, format, fingerprint));
            err << "generated " << g.edges.size() << " edges in " << detail::format_double(elapsed) << " s\n";
            return 0;
        }

        if (part->parsed()) {
            InitiatorMatrix p = detail::load_initiator(part_initiator, part_inline);
            const Marginals marg = derive_marginals(p);
            err << "config: cmd=partition n=" << p.n() << " k=" << part_k << " workers=" << part_workers
                << " out=" << (part_out.empty() ? "-" : part_out) << "\n";
            const PartitionTable table = compute_partition(marg, part_k, part_workers);
            const std::string bytes = write_partition_table(table);
            if (part_out.empty()) {
                out << bytes;
            } else {
                write_file(part_out, bytes);
            }
            return 0;
        }

        if (analyze->parsed()) {
            std::string bytes = read_file(an_in);
            FileFormat format;
            if (an_format == "auto") {
                format = bytes.size() >= 4 && bytes.compare(0, 4, kEdgeMagic, 4) == 0 ? FileFormat::binary
                                                                                      : FileFormat::tsv;
            } else {
                format = parse_format(an_format);
            }
            const EdgeList g = read_edge_list(bytes, format);
            bytes.clear();
            bytes.shrink_to_fit();
            const std::vector<std::string> names = detail::split_list(an_patterns);
            if (names.empty()) throw std::invalid_argument("no patterns requested");
            std::vector<PatternKind> kinds;
            for (const std::string& name : names) kinds.push_back(parse_kind(name));
            const Direction direction = parse_direction(an_direction);
            const std::size_t scree_m =
                std::max<std::size_t>(1, std::min<std::size_t>({an_top_m, static_cast<std::size_t>(g.n_vertices), 100}));
            const std::size_t net_m =
                std::max<std::size_t>(1, std::min<std::size_t>(an_netvalue_top, static_cast<std::size_t>(g.n_vertices)));
            err << "config: cmd=analyze in=" << an_in << " patterns=" << an_patterns
                << " direction=" << an_direction << " bin-ratio=" << detail::format_double(an_bin_ratio)
                << " max-hops=" << an_max_hops << " hop-sources=" << an_hop_sources
                << " hop-seed=" << an_hop_seed << " top-m=" << scree_m << " netvalue-top=" << net_m
                << " out-dir=" << an_outdir << "\n";
            std::filesystem::create_directories(an_outdir);
            for (PatternKind kind : kinds) {
                PatternSeries series;
                switch (kind) {
                    case PatternKind::degree:
                        series = degree_distribution(g, direction, an_bin_ratio);
                        break;
                    case PatternKind::hop:
                        series = hop_plot(g, an_max_hops, an_hop_sources, an_hop_seed);
                        break;
                    case PatternKind::scree:
                        series = scree_plot(g, scree_m);
                        break;
                    case PatternKind::netvalue:
                        series = network_values(g, net_m);
                        break;
                }
                const std::string path =
                    (std::filesystem::path(an_outdir) / (std::string(kind_name(kind)) + ".csv")).string();
                write_file(path, write_series_csv(series));
                err << "wrote " << path << "\n";
            }
            return 0;
        }

        if (compare->parsed()) {
            const std::vector<PatternKind> all_kinds{PatternKind::degree, PatternKind::hop,
                                                     PatternKind::scree, PatternKind::netvalue};
            std::vector<PatternSeries> set_a = detail::load_pattern_set(cmp_a, all_kinds);
            std::vector<PatternSeries> set_b = detail::load_pattern_set(cmp_b, all_kinds);
            // Directories may hold different subsets; compare the overlap.
            if (std::filesystem::is_directory(cmp_a) || std::filesystem::is_directory(cmp_b)) {
                const auto keep_common = [](std::vector<PatternSeries>& mine,
                                            const std::vector<PatternSeries>& theirs) {
                    std::erase_if(mine, [&](const PatternSeries& s) {
                        return std::none_of(theirs.begin(), theirs.end(),
                                            [&](const PatternSeries& t) { return t.kind == s.kind; });
                    });
                };
                keep_common(set_a, set_b);
                keep_common(set_b, set_a);
                if (set_a.empty()) throw std::invalid_argument("the two inputs share no pattern kinds");
            }
            err << "config: cmd=compare a=" << cmp_a << " b=" << cmp_b
                << " threshold-degree=" << detail::format_double(thresholds.degree)
                << " threshold-hop=" << detail::format_double(thresholds.hop)
                << " threshold-scree=" << detail::format_double(thresholds.scree)
                << " threshold-netvalue=" << detail::format_double(thresholds.netvalue) << "\n";
            const PatternDistanceReport report = compare_patterns(set_a, set_b, thresholds);
            for (const PatternDistance& entry : report.entries) {
                out << kind_name(entry.kind) << ": distance=" << detail::format_double(entry.distance)
                    << " threshold=" << detail::format_double(entry.threshold) << " "
                    << (entry.pass ? "PASS" : "FAIL") << "\n";
            }
            out << (report.pass ? "PASS" : "FAIL") << "\n";
            return report.pass ? 0 : 2;
        }

        if (bound->parsed()) {
            err << "config: cmd=bound edges=" << detail::format_double(bnd_edges) << " workers=" << bnd_workers
                << " alpha=" << detail::format_double(bnd_alpha) << "\n";
            const ImbalanceBound b = imbalance_bound(bnd_edges, bnd_workers, bnd_alpha);
            out << "per_worker_mean=" << detail::format_double(b.per_worker_mean) << "\n";
            out << "delta=" << detail::format_double(b.delta) << "\n";
            out << "max_load_bound=" << detail::format_double(b.per_worker_mean + b.delta) << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace pskg
