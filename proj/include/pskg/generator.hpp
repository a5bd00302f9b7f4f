#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pskg/initiator.hpp"
#include "pskg/random.hpp"

namespace pskg {

struct Edge {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Multi-edges and self-loops are intentional: every generated edge is kept.
struct EdgeList {
    std::uint64_t n_vertices = 0;
    std::vector<Edge> edges;
    friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

/// Base-n digits of u, least significant first. digits must hold k entries.
inline void extract_digits(std::uint64_t u, std::size_t n, unsigned k, unsigned* digits) {
    for (unsigned i = 0; i < k; ++i) {
        digits[i] = static_cast<unsigned>(u % n);
        u /= n;
    }
}

/// Expected fraction of all edges sourced at u: the product of U over u's
/// digits. Equals the entry of the k-th Kronecker power of U at u.
inline double vertex_load(const Marginals& marg, unsigned k, std::uint64_t u) {
    const std::size_t n = marg.n();
    double load = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        load *= marg.u(static_cast<std::size_t>(u % n));
        u /= n;
    }
    return load;
}

/// One edge dropped per trial: k times, pick a cell (r,s) of P and accumulate
/// both endpoint ids most-significant-digit first.
inline EdgeList skg_generate(const GraphSpec& spec, RandomStream& rng) {
    spec.validate();
    const std::size_t n = spec.initiator.n();
    const double* cells = spec.initiator.entries().data();
    const std::uint64_t count = static_cast<std::uint64_t>(std::llround(spec.expected_edges));
    EdgeList g{spec.n_vertices(), {}};
    g.edges.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) {
        std::uint64_t u = 0, v = 0;
        for (unsigned level = 0; level < spec.k; ++level) {
            const std::size_t cell = sample_index(cells, n * n, rng);
            u = u * n + cell / n;
            v = v * n + cell % n;
        }
        g.edges.push_back({u, v});
    }
    return g;
}

/// Source first (k draws from U), then the destination digit for each level
/// is drawn from the V row selected by the source digit of that same level.
inline EdgeList skg_equiv_generate(const GraphSpec& spec, RandomStream& rng) {
    spec.validate();
    const Marginals marg = derive_marginals(spec.initiator);
    const std::size_t n = marg.n();
    const std::uint64_t count = static_cast<std::uint64_t>(std::llround(spec.expected_edges));
    EdgeList g{spec.n_vertices(), {}};
    g.edges.reserve(count);
    std::vector<unsigned> digits(spec.k);
    for (std::uint64_t e = 0; e < count; ++e) {
        std::uint64_t u = 0, v = 0;
        for (unsigned level = 0; level < spec.k; ++level) {
            const std::size_t r = sample_index(marg.u_vector().data(), n, rng);
            digits[level] = static_cast<unsigned>(r);
            u = u * n + r;
        }
        for (unsigned level = 0; level < spec.k; ++level) {
            const std::size_t s = sample_index(marg.v_row(digits[level]), n, rng);
            v = v * n + s;
        }
        g.edges.push_back({u, v});
    }
    return g;
}

/// Out-edges of a single vertex: X ~ Poisson(E · vertex_load(u)) destinations,
/// each built from k conditional draws. The V row for each level is indexed by
/// the source digit of the same level, so the realized cell distribution is
/// the Kronecker power of P rather than a digit-reversed relative of it.
inline std::vector<std::uint64_t> pskg_vertex_edges(const Marginals& marg, unsigned k,
                                                    double expected_edges, std::uint64_t u,
                                                    RandomStream& rng) {
    const double mean = expected_edges * vertex_load(marg, k, u);
    const std::uint64_t x = sample_poisson(mean, rng);
    std::vector<std::uint64_t> destinations;
    if (x == 0) return destinations;
    destinations.reserve(x);
    const std::size_t n = marg.n();
    unsigned digits[64];
    extract_digits(u, n, k, digits);
    for (std::uint64_t e = 0; e < x; ++e) {
        std::uint64_t v = 0;
        for (unsigned level = 0; level < k; ++level) {
            const std::size_t s = sample_index(marg.v_row(digits[k - 1 - level]), n, rng);
            v = v * n + s;
        }
        destinations.push_back(v);
    }
    return destinations;
}

/// Optional post-pass: collapse duplicates and sort by (source, destination).
/// Changes the distributions the generators guarantee; off by default.
inline EdgeList dedupe_edges(const EdgeList& g) {
    EdgeList out{g.n_vertices, g.edges};
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

}  // namespace pskg
