#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pskg/generator.hpp"
#include "pskg/initiator.hpp"

namespace pskg {

struct WorkerRange {
    std::uint64_t u_low = 0;   // inclusive
    std::uint64_t u_up = 0;    // exclusive
    double expected_mass = 0.0;
    friend bool operator==(const WorkerRange&, const WorkerRange&) = default;
};

/// Contiguous half-open ranges covering [0, N), one per worker.
struct PartitionTable {
    std::uint64_t n_vertices = 0;
    std::vector<WorkerRange> workers;
    std::size_t n_workers() const { return workers.size(); }
    friend bool operator==(const PartitionTable&, const PartitionTable&) = default;
};

struct ImbalanceBound {
    double per_worker_mean = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
};

/// The vertex whose cumulative-load interval [C(u), C(u+1)) contains r,
/// found by descending the n-ary digit tree; never materializes U^[k].
/// Boundary hits resolve rightward (r == C(u) returns u); r = 1 returns N-1.
inline std::uint64_t locate_boundary(const Marginals& marg, unsigned k, double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument("locate_boundary: r must be in [0, 1]");
    }
    const std::size_t n = marg.n();
    if (r >= 1.0) return vertex_count(n, k) - 1;
    std::uint64_t u = 0;
    double base = 0.0;
    double range = 1.0;
    for (unsigned level = 0; level < k; ++level) {
        std::size_t child = n - 1;
        for (std::size_t d = 0; d + 1 < n; ++d) {
            const double mass = marg.u(d) * range;
            if (r < base + mass) {
                child = d;
                break;
            }
            base += mass;
        }
        u = u * n + child;
        range *= marg.u(child);
    }
    return u;
}

/// Prefix mass C(u) = sum of vertex_load over vertices below u, via the same
/// digit tree in O(k*n). u = N yields the full mass.
inline double cumulative_load(const Marginals& marg, unsigned k, std::uint64_t u) {
    const std::size_t n = marg.n();
    const std::uint64_t n_vertices = vertex_count(n, k);
    if (u > n_vertices) throw std::invalid_argument("cumulative_load: vertex id above n^k");
    if (u == n_vertices) {
        double total = 0.0;
        for (std::size_t d = 0; d < n; ++d) total += marg.u(d);
        return std::pow(total, static_cast<double>(k));
    }
    unsigned digits[64];
    extract_digits(u, n, k, digits);
    double base = 0.0;
    double range = 1.0;
    for (unsigned level = 0; level < k; ++level) {
        const unsigned digit = digits[k - 1 - level];
        for (unsigned d = 0; d < digit; ++d) base += marg.u(d) * range;
        range *= marg.u(digit);
    }
    return base;
}

/// Worker w gets [locate_boundary(w/N_w), locate_boundary((w+1)/N_w)), with
/// the outer boundaries clamped to 0 and N so coverage is exact regardless of
/// floating-point drift. Ranges may be empty when one vertex spans several
/// quantiles.
inline PartitionTable compute_partition(const Marginals& marg, unsigned k,
                                        std::size_t n_workers) {
    const std::uint64_t n_vertices = vertex_count(marg.n(), k);
    if (n_workers < 1 || n_workers > n_vertices) {
        throw std::invalid_argument("compute_partition: need 1 <= workers <= N");
    }
    std::vector<std::uint64_t> bounds(n_workers + 1);
    bounds[0] = 0;
    bounds[n_workers] = n_vertices;
    for (std::size_t w = 1; w < n_workers; ++w) {
        const double r = static_cast<double>(w) / static_cast<double>(n_workers);
        std::uint64_t b = locate_boundary(marg, k, r);
        if (b < bounds[w - 1]) b = bounds[w - 1];
        bounds[w] = b;
    }
    PartitionTable table;
    table.n_vertices = n_vertices;
    table.workers.resize(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        table.workers[w].u_low = bounds[w];
        table.workers[w].u_up = bounds[w + 1];
        table.workers[w].expected_mass = cumulative_load(marg, k, bounds[w + 1]) -
                                         cumulative_load(marg, k, bounds[w]);
    }
    return table;
}

/// Confidence half-width for the maximum worker load when E edges are spread
/// over N_w workers: delta = sqrt(2E/N_w) * sqrt(ln N_w + |ln|ln(1-alpha)||),
/// natural logarithms throughout.
inline ImbalanceBound imbalance_bound(double expected_edges, std::size_t n_workers,
                                      double alpha) {
    if (!(expected_edges > 0.0) || !std::isfinite(expected_edges)) {
        throw std::invalid_argument("imbalance_bound: E must be finite and > 0");
    }
    if (n_workers < 2) throw std::invalid_argument("imbalance_bound: need at least 2 workers");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("imbalance_bound: alpha must lie in (0, 1)");
    }
    const double mean = expected_edges / static_cast<double>(n_workers);
    const double tail = std::fabs(std::log(std::fabs(std::log(1.0 - alpha))));
    const double delta = std::sqrt(2.0 * mean) *
                         std::sqrt(std::log(static_cast<double>(n_workers)) + tail);
    return {mean, delta, alpha};
}

}  // namespace pskg
