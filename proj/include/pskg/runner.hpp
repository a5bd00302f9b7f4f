#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pskg/generator.hpp"
#include "pskg/initiator.hpp"
#include "pskg/partition.hpp"
#include "pskg/random.hpp"

namespace pskg {

struct WorkerOutput {
    std::size_t worker_id = 0;
    EdgeList edges;
};

struct RunOptions {
    /// Split the vertex range evenly instead of by expected load. Output is
    /// identical either way; only the per-worker wall clock changes.
    bool uniform_split = false;
};

/// Single list in canonical order (ascending source, then per-source draw
/// order). Parts are reordered by worker id; their source ranges must be
/// disjoint and ascending in that order.
inline EdgeList merge_edge_outputs(std::vector<WorkerOutput> parts) {
    std::sort(parts.begin(), parts.end(),
              [](const WorkerOutput& a, const WorkerOutput& b) { return a.worker_id < b.worker_id; });
    EdgeList merged;
    std::size_t total = 0;
    for (const auto& part : parts) {
        merged.n_vertices = std::max(merged.n_vertices, part.edges.n_vertices);
        total += part.edges.edges.size();
    }
    merged.edges.reserve(total);
    bool have_prev = false;
    std::uint64_t prev_max = 0;
    for (const auto& part : parts) {
        if (part.edges.edges.empty()) continue;
        std::uint64_t lo = part.edges.edges.front().u;
        std::uint64_t hi = lo;
        for (const Edge& e : part.edges.edges) {
            lo = std::min(lo, e.u);
            hi = std::max(hi, e.u);
        }
        if (have_prev && lo <= prev_max) {
            throw std::invalid_argument("merge_edge_outputs: worker source ranges overlap");
        }
        prev_max = hi;
        have_prev = true;
        merged.edges.insert(merged.edges.end(), part.edges.edges.begin(), part.edges.edges.end());
    }
    return merged;
}

namespace detail {

/// One worker's share: every vertex in [u_low, u_up), each with its own
/// stream, so the output depends only on (seed, vertex), never on the split.
inline EdgeList pskg_worker_range(const Marginals& marg, const GraphSpec& spec,
                                  std::uint64_t u_low, std::uint64_t u_up) {
    EdgeList out{spec.n_vertices(), {}};
    for (std::uint64_t u = u_low; u < u_up; ++u) {
        RandomStream rng = derive_vertex_stream(spec.seed, u);
        for (std::uint64_t v : pskg_vertex_edges(marg, spec.k, spec.expected_edges, u, rng)) {
            out.edges.push_back({u, v});
        }
    }
    return out;
}

}  // namespace detail

/// Generate per the spec's model. PSKG fans out over spec.workers with no
/// shared mutable state and no inter-worker data flow: only the spec goes in
/// and only per-worker buffers come out, merged after the join.
inline EdgeList run_generation(const GraphSpec& spec, const RunOptions& options = {}) {
    spec.validate();
    if (spec.model == Model::skg || spec.model == Model::skg_equiv) {
        RandomStream rng(spec.seed, 0);
        return spec.model == Model::skg ? skg_generate(spec, rng) : skg_equiv_generate(spec, rng);
    }

    const Marginals marg = derive_marginals(spec.initiator);
    const std::uint64_t n_vertices = spec.n_vertices();
    const std::size_t n_workers =
        static_cast<std::size_t>(std::min<std::uint64_t>(spec.workers, n_vertices));

    std::vector<std::uint64_t> bounds(n_workers + 1);
    if (options.uniform_split) {
        for (std::size_t w = 0; w <= n_workers; ++w) {
            bounds[w] = n_vertices / n_workers * w + std::min<std::uint64_t>(n_vertices % n_workers, w);
        }
    } else {
        const PartitionTable table = compute_partition(marg, spec.k, n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) bounds[w] = table.workers[w].u_low;
        bounds[n_workers] = n_vertices;
    }

    std::vector<WorkerOutput> parts(n_workers);
    if (n_workers == 1) {
        parts[0] = {0, detail::pskg_worker_range(marg, spec, 0, n_vertices)};
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            threads.emplace_back([&, w] {
                parts[w] = {w, detail::pskg_worker_range(marg, spec, bounds[w], bounds[w + 1])};
            });
        }
        for (std::thread& t : threads) t.join();
    }
    EdgeList merged = merge_edge_outputs(std::move(parts));
    merged.n_vertices = n_vertices;
    return merged;
}

}  // namespace pskg
