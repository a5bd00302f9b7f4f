#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "pskg/generator.hpp"
#include "pskg/random.hpp"

namespace pskg {

enum class PatternKind { degree, hop, scree, netvalue };

inline const char* kind_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::degree: return "degree";
        case PatternKind::hop: return "hop";
        case PatternKind::scree: return "scree";
        case PatternKind::netvalue: return "netvalue";
    }
    return "?";
}

inline PatternKind parse_kind(const std::string& name) {
    if (name == "degree") return PatternKind::degree;
    if (name == "hop") return PatternKind::hop;
    if (name == "scree") return PatternKind::scree;
    if (name == "netvalue") return PatternKind::netvalue;
    throw std::invalid_argument("unknown pattern '" + name +
                                "' (expected degree, hop, scree or netvalue)");
}

struct PatternPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const PatternPoint&, const PatternPoint&) = default;
};

/// One measured pattern curve; x strictly increasing. degenerate marks
/// conventional output for inputs where the quantity is undefined (for now
/// only the principal eigenvector of an edgeless graph).
struct PatternSeries {
    PatternKind kind = PatternKind::degree;
    std::vector<PatternPoint> points;
    bool degenerate = false;
    friend bool operator==(const PatternSeries&, const PatternSeries&) = default;
};

enum class Direction { in, out, total };

inline Direction parse_direction(const std::string& name) {
    if (name == "in") return Direction::in;
    if (name == "out") return Direction::out;
    if (name == "total") return Direction::total;
    throw std::invalid_argument("unknown direction '" + name + "' (expected in, out or total)");
}

/// Exponentially binned degree histogram. Bin boundaries are ceil(ratio^i),
/// deduplicated; bin i covers [b_i, b_{i+1}) and is plotted at the geometric
/// mean of its boundaries. Degree-0 vertices get their own bin at x = 0.
/// Multi-edges count individually. Only nonempty bins are emitted.
inline PatternSeries degree_distribution(const EdgeList& g, Direction direction = Direction::out,
                                         double bin_ratio = 2.0) {
    if (!(bin_ratio > 1.0)) throw std::invalid_argument("degree_distribution: bin ratio must be > 1");
    std::vector<std::uint64_t> degree(g.n_vertices, 0);
    for (const Edge& e : g.edges) {
        if (e.u >= g.n_vertices || e.v >= g.n_vertices) {
            throw std::invalid_argument("degree_distribution: vertex id out of range");
        }
        if (direction != Direction::in) ++degree[e.u];
        if (direction != Direction::out) ++degree[e.v];
    }
    std::uint64_t max_degree = 0;
    std::uint64_t zero_count = 0;
    for (std::uint64_t d : degree) {
        max_degree = std::max(max_degree, d);
        if (d == 0) ++zero_count;
    }

    PatternSeries series{PatternKind::degree, {}, false};
    if (zero_count > 0) series.points.push_back({0.0, static_cast<double>(zero_count)});
    if (max_degree == 0) return series;

    std::vector<std::uint64_t> bounds{1};
    for (double power = bin_ratio;; power *= bin_ratio) {
        const auto b = static_cast<std::uint64_t>(std::ceil(power));
        if (b > bounds.back()) bounds.push_back(b);
        if (bounds.back() > max_degree) break;
    }
    std::vector<std::uint64_t> counts(bounds.size() - 1, 0);
    for (std::uint64_t d : degree) {
        if (d == 0) continue;
        const auto it = std::upper_bound(bounds.begin(), bounds.end(), d);
        ++counts[static_cast<std::size_t>(it - bounds.begin()) - 1];
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        const double x = std::sqrt(static_cast<double>(bounds[i]) * static_cast<double>(bounds[i + 1]));
        series.points.push_back({x, static_cast<double>(counts[i])});
    }
    return series;
}

namespace detail {

/// Out-adjacency in CSR form; multi-edges keep their duplicate slots.
struct Csr {
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint64_t> targets;

    explicit Csr(const EdgeList& g) {
        const std::uint64_t n = g.n_vertices;
        if (n > (1ull << 27)) {
            throw std::runtime_error("adjacency build: vertex count too large to index in memory");
        }
        offsets.assign(static_cast<std::size_t>(n) + 1, 0);
        for (const Edge& e : g.edges) {
            if (e.u >= n || e.v >= n) throw std::invalid_argument("adjacency build: vertex id out of range");
            ++offsets[static_cast<std::size_t>(e.u) + 1];
        }
        for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
        targets.resize(g.edges.size());
        std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
        for (const Edge& e : g.edges) targets[cursor[static_cast<std::size_t>(e.u)]++] = e.v;
    }
};

}  // namespace detail

/// Reachable ordered pairs r(h) within h hops of directed distance, self-pairs
/// included (r(0) = N). Exact per-source BFS when source_sample is 0, which is
/// only allowed up to 10^6 vertices; otherwise source_sample sources are drawn
/// uniformly without replacement and per-source counts are scaled by N/S.
inline PatternSeries hop_plot(const EdgeList& g, unsigned max_h, std::size_t source_sample = 0,
                              std::uint64_t sample_seed = 1) {
    const std::uint64_t n = g.n_vertices;
    if (source_sample == 0 && n > 1000000) {
        throw std::invalid_argument(
            "hop_plot: exact mode is capped at 10^6 vertices; pass a source sample size");
    }
    const detail::Csr adj(g);

    std::vector<std::uint64_t> sources;
    double scale = 1.0;
    if (source_sample == 0 || source_sample >= n) {
        sources.resize(static_cast<std::size_t>(n));
        for (std::uint64_t u = 0; u < n; ++u) sources[static_cast<std::size_t>(u)] = u;
    } else {
        RandomStream rng(sample_seed, 0);
        std::unordered_set<std::uint64_t> seen;
        while (seen.size() < source_sample) {
            std::uint64_t u = rng.next_u64() % n;
            if (seen.insert(u).second) sources.push_back(u);
        }
        scale = static_cast<double>(n) / static_cast<double>(source_sample);
    }

    std::vector<double> reach(max_h + 1, 0.0);
    std::vector<std::uint32_t> visited(static_cast<std::size_t>(n), 0);
    std::uint32_t epoch = 0;
    std::vector<std::uint64_t> frontier, next_frontier;
    for (std::uint64_t s : sources) {
        ++epoch;
        visited[static_cast<std::size_t>(s)] = epoch;
        frontier.assign(1, s);
        std::uint64_t within = 1;
        reach[0] += 1.0;
        unsigned h = 1;
        for (; h <= max_h && !frontier.empty(); ++h) {
            next_frontier.clear();
            for (std::uint64_t u : frontier) {
                const std::size_t lo = static_cast<std::size_t>(adj.offsets[static_cast<std::size_t>(u)]);
                const std::size_t hi = static_cast<std::size_t>(adj.offsets[static_cast<std::size_t>(u) + 1]);
                for (std::size_t i = lo; i < hi; ++i) {
                    const std::uint64_t v = adj.targets[i];
                    if (visited[static_cast<std::size_t>(v)] != epoch) {
                        visited[static_cast<std::size_t>(v)] = epoch;
                        next_frontier.push_back(v);
                    }
                }
            }
            within += next_frontier.size();
            reach[h] += static_cast<double>(within);
            frontier.swap(next_frontier);
        }
        // Once the frontier empties the reachable set is final: the count
        // carries flat through the remaining levels.
        for (; h <= max_h; ++h) reach[h] += static_cast<double>(within);
    }
    PatternSeries series{PatternKind::hop, {}, false};
    series.points.reserve(max_h + 1);
    for (unsigned h = 0; h <= max_h; ++h) {
        series.points.push_back({static_cast<double>(h), reach[h] * scale});
    }
    return series;
}

namespace detail {

/// Implicit-QL eigensolver for a symmetric tridiagonal matrix. d holds the
/// diagonal, e[i] the coupling between i and i+1 (e.back() is scratch). When
/// z is given it must be the n x n identity (row-major); on return column j
/// is the eigenvector of d[j]. Returns false if a value fails to converge.
inline bool tridiag_eigen(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z) {
    const std::size_t n = d.size();
    if (n == 0) return true;
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m == l) break;
            if (iterations++ == 60) return false;
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (z) {
                    for (std::size_t row = 0; row < n; ++row) {
                        f = (*z)[row * n + i + 1];
                        (*z)[row * n + i + 1] = s * (*z)[row * n + i] + c * f;
                        (*z)[row * n + i] = c * (*z)[row * n + i] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    return true;
}

struct SpectralResult {
    std::vector<double> values;   // descending
    std::vector<double> vector;   // eigenvector of the algebraically largest value
    bool converged = false;
};

/// Lanczos with full reorthogonalization on an implicit symmetric operator.
/// Exact invariant subspaces (breakdowns) close a segment and restart with a
/// fresh vector orthogonal to everything found so far, so multiplicities and
/// tiny graphs resolve exactly once the basis exhausts the space.
template <class MatVec>
inline SpectralResult lanczos_spectrum(std::size_t n, MatVec&& apply, std::size_t n_pairs,
                                       bool want_vector) {
    SpectralResult result;
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const std::size_t budget = std::min<std::size_t>(n, std::max<std::size_t>(8 * n_pairs, 256));
    const double stop_tol = 1e-10;
    const double accept_tol = 1e-8;

    std::vector<double> basis;  // total_cols columns of length n
    basis.reserve(budget * n);
    std::vector<double> closed;          // exact eigenvalues from closed segments
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> best_vector;

    RandomStream rng(0xCB9A5C1F01234567ull, 0);
    std::size_t total_cols = 0;
    bool space_exhausted = false;
    double workspace_scale = 0.0;
    int trivial_restarts = 0;

    std::vector<double> v(n), v_prev(n), w(n);
    std::vector<double> alphas, betas;

    const auto orthogonalize = [&](std::vector<double>& x) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t col = 0; col < total_cols; ++col) {
                const double* b = basis.data() + col * n;
                double coef = 0.0;
                for (std::size_t i = 0; i < n; ++i) coef += b[i] * x[i];
                for (std::size_t i = 0; i < n; ++i) x[i] -= coef * b[i];
            }
        }
    };
    const auto norm_of = [&](const std::vector<double>& x) {
        double sum = 0.0;
        for (double value : x) sum += value * value;
        return std::sqrt(sum);
    };

    // Ritz data for the running segment, refreshed by the periodic checks.
    std::vector<double> ritz_d, ritz_e, ritz_z;
    const auto segment_ritz = [&](bool with_vectors) {
        ritz_d = alphas;
        ritz_e = betas;
        ritz_e.resize(alphas.size(), 0.0);
        if (with_vectors) {
            const std::size_t m = alphas.size();
            ritz_z.assign(m * m, 0.0);
            for (std::size_t i = 0; i < m; ++i) ritz_z[i * m + i] = 1.0;
            return tridiag_eigen(ritz_d, ritz_e, &ritz_z);
        }
        return tridiag_eigen(ritz_d, ritz_e, nullptr);
    };
    const auto ritz_vector_into = [&](std::size_t idx, std::size_t seg_first_col,
                                      std::vector<double>& out) {
        const std::size_t m = alphas.size();
        out.assign(n, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            const double* b = basis.data() + (seg_first_col + j) * n;
            const double coef = ritz_z[j * m + idx];
            for (std::size_t i = 0; i < n; ++i) out[i] += coef * b[i];
        }
    };

    while (total_cols < budget && !space_exhausted) {
        for (std::size_t i = 0; i < n; ++i) v[i] = rng.next_unit() - 0.5;
        orthogonalize(v);
        double norm = norm_of(v);
        if (norm < 1e-8) {
            space_exhausted = true;
            break;
        }
        for (double& value : v) value /= norm;
        std::fill(v_prev.begin(), v_prev.end(), 0.0);
        alphas.clear();
        betas.clear();
        const std::size_t seg_first_col = total_cols;
        double last_beta = 0.0;
        bool segment_closed = false;
        bool all_converged = false;

        while (total_cols < budget) {
            basis.insert(basis.end(), v.begin(), v.end());
            ++total_cols;
            apply(v, w);
            double alpha = 0.0;
            for (std::size_t i = 0; i < n; ++i) alpha += v[i] * w[i];
            for (std::size_t i = 0; i < n; ++i) w[i] -= alpha * v[i] + last_beta * v_prev[i];
            orthogonalize(w);
            alphas.push_back(alpha);
            workspace_scale = std::max(workspace_scale, std::fabs(alpha));
            const double beta = norm_of(w);
            workspace_scale = std::max(workspace_scale, beta);

            if (beta <= 1e-13 * std::max(workspace_scale, 1e-300)) {
                segment_closed = true;
                break;
            }

            const bool at_budget = total_cols == budget;
            const bool check_now = at_budget || alphas.size() % 16 == 0;
            if (check_now && alphas.size() >= std::max<std::size_t>(n_pairs, 2)) {
                if (segment_ritz(true)) {
                    const std::size_t m = alphas.size();
                    // Residual of Ritz pair j is |beta_m * z[m-1][j]|.
                    std::vector<std::pair<double, double>> pairs;  // (value, residual)
                    pairs.reserve(m + closed.size());
                    for (std::size_t j = 0; j < m; ++j) {
                        pairs.emplace_back(ritz_d[j], std::fabs(beta * ritz_z[(m - 1) * m + j]));
                    }
                    for (double value : closed) pairs.emplace_back(value, 0.0);
                    std::sort(pairs.begin(), pairs.end(),
                              [](const auto& a, const auto& b) { return a.first > b.first; });
                    const double scale = std::max(workspace_scale, 1e-300);
                    const double tol = (at_budget ? accept_tol : stop_tol) * scale;
                    const std::size_t need = std::min(n_pairs, pairs.size());
                    bool ok = pairs.size() >= n_pairs;
                    for (std::size_t j = 0; j < need && ok; ++j) ok = pairs[j].second <= tol;
                    if (want_vector && ok) {
                        // The top pair must come out as a vector too.
                        std::size_t top = 0;
                        for (std::size_t j = 1; j < m; ++j)
                            if (ritz_d[j] > ritz_d[top]) top = j;
                        if (!closed.empty() && *std::max_element(closed.begin(), closed.end()) >
                                                   ritz_d[top] + tol) {
                            ok = best_value >= ritz_d[top];  // captured from an earlier segment
                        } else {
                            ok = ok && std::fabs(beta * ritz_z[(m - 1) * m + top]) <= tol;
                            if (ok && ritz_d[top] > best_value) {
                                best_value = ritz_d[top];
                                ritz_vector_into(top, seg_first_col, best_vector);
                            }
                        }
                    }
                    if (ok) {
                        all_converged = true;
                        break;
                    }
                }
            }
            if (total_cols == budget) break;

            betas.push_back(beta);
            v_prev = v;
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta;
            last_beta = beta;
        }

        if (all_converged) {
            if (segment_ritz(want_vector)) {
                for (double value : ritz_d) closed.push_back(value);
            }
            result.converged = true;
            break;
        }
        // Segment ended by breakdown or budget: its Ritz values are exact for
        // a breakdown (invariant subspace) and best-effort otherwise.
        if (!alphas.empty() && segment_ritz(want_vector)) {
            const std::size_t m = alphas.size();
            double seg_max = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                closed.push_back(ritz_d[j]);
                seg_max = std::max(seg_max, std::fabs(ritz_d[j]));
            }
            if (want_vector) {
                std::size_t top = 0;
                for (std::size_t j = 1; j < m; ++j)
                    if (ritz_d[j] > ritz_d[top]) top = j;
                if (ritz_d[top] > best_value) {
                    best_value = ritz_d[top];
                    ritz_vector_into(top, seg_first_col, best_vector);
                }
            }
            // Restart segments that keep finding only numerically-zero mass
            // mean the unexplored complement is (numerical) kernel: the
            // remaining spectrum is zeros and the extremes are already exact.
            if (seg_first_col > 0 && segment_closed &&
                seg_max <= 1e-12 * std::max(workspace_scale, 1e-300)) {
                if (++trivial_restarts >= 3) {
                    result.converged = true;
                    break;
                }
            } else {
                trivial_restarts = 0;
            }
        }
        if (segment_closed) continue;  // restart with a fresh direction
        break;                         // budget exhausted mid-segment
    }

    if (space_exhausted || total_cols >= n) result.converged = true;

    std::sort(closed.begin(), closed.end(), std::greater<>());
    result.values = std::move(closed);
    result.vector = std::move(best_vector);
    if (result.converged && want_vector && result.vector.empty() && !result.values.empty()) {
        result.converged = false;
    }
    return result;
}

}  // namespace detail

/// Largest top_m singular values of the (multigraph-weighted) adjacency
/// matrix, descending: the square roots of the top eigenvalues of A^T A,
/// which the Lanczos core sees through a two-phase edge sweep.
inline PatternSeries scree_plot(const EdgeList& g, std::size_t top_m = 20) {
    const std::size_t n = static_cast<std::size_t>(g.n_vertices);
    if (top_m < 1 || top_m > std::min<std::size_t>(n, 100)) {
        throw std::invalid_argument("scree_plot: need 1 <= top_m <= min(N, 100)");
    }
    PatternSeries series{PatternKind::scree, {}, false};
    if (g.edges.empty()) {
        for (std::size_t i = 0; i < top_m; ++i) series.points.push_back({static_cast<double>(i + 1), 0.0});
        return series;
    }
    for (const Edge& e : g.edges) {
        if (e.u >= g.n_vertices || e.v >= g.n_vertices) {
            throw std::invalid_argument("scree_plot: vertex id out of range");
        }
    }
    std::vector<double> t(n);
    const auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::fill(t.begin(), t.end(), 0.0);
        for (const Edge& e : g.edges) t[static_cast<std::size_t>(e.u)] += x[static_cast<std::size_t>(e.v)];
        y.assign(n, 0.0);
        for (const Edge& e : g.edges) y[static_cast<std::size_t>(e.v)] += t[static_cast<std::size_t>(e.u)];
    };
    detail::SpectralResult spectrum = detail::lanczos_spectrum(n, apply, top_m, false);
    if (!spectrum.converged) {
        throw std::runtime_error("scree_plot: singular values did not converge within the iteration budget");
    }
    for (std::size_t i = 0; i < top_m; ++i) {
        const double eigenvalue = i < spectrum.values.size() ? std::max(spectrum.values[i], 0.0) : 0.0;
        series.points.push_back({static_cast<double>(i + 1), std::sqrt(eigenvalue)});
    }
    return series;
}

/// Absolute components of the principal eigenvector of (A + A^T)/2, sorted
/// descending, top_m of them; the eigenvector itself is unit length. An
/// edgeless graph has no principal direction: all-zero series, degenerate.
inline PatternSeries network_values(const EdgeList& g, std::size_t top_m = 100) {
    const std::size_t n = static_cast<std::size_t>(g.n_vertices);
    if (top_m < 1 || top_m > n) {
        throw std::invalid_argument("network_values: need 1 <= top_m <= N");
    }
    PatternSeries series{PatternKind::netvalue, {}, false};
    if (g.edges.empty()) {
        series.degenerate = true;
        for (std::size_t i = 0; i < top_m; ++i) series.points.push_back({static_cast<double>(i + 1), 0.0});
        return series;
    }
    for (const Edge& e : g.edges) {
        if (e.u >= g.n_vertices || e.v >= g.n_vertices) {
            throw std::invalid_argument("network_values: vertex id out of range");
        }
    }
    const auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        y.assign(n, 0.0);
        for (const Edge& e : g.edges) {
            y[static_cast<std::size_t>(e.u)] += 0.5 * x[static_cast<std::size_t>(e.v)];
            y[static_cast<std::size_t>(e.v)] += 0.5 * x[static_cast<std::size_t>(e.u)];
        }
    };
    detail::SpectralResult spectrum = detail::lanczos_spectrum(n, apply, 1, true);
    if (!spectrum.converged) {
        throw std::runtime_error("network_values: principal eigenvector did not converge within the iteration budget");
    }
    std::vector<double> components = std::move(spectrum.vector);
    double norm = 0.0;
    for (double value : components) norm += value * value;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        series.degenerate = true;
        for (std::size_t i = 0; i < top_m; ++i) series.points.push_back({static_cast<double>(i + 1), 0.0});
        return series;
    }
    for (double& value : components) value = std::fabs(value) / norm;
    std::sort(components.begin(), components.end(), std::greater<>());
    for (std::size_t i = 0; i < top_m; ++i) {
        series.points.push_back({static_cast<double>(i + 1), components[i]});
    }
    return series;
}

struct PatternThresholds {
    double degree = 0.15;
    double hop = 0.10;
    double scree = 0.10;
    double netvalue = 0.15;

    double get(PatternKind kind) const {
        switch (kind) {
            case PatternKind::degree: return degree;
            case PatternKind::hop: return hop;
            case PatternKind::scree: return scree;
            case PatternKind::netvalue: return netvalue;
        }
        return 0.0;
    }
    void set(PatternKind kind, double value) {
        switch (kind) {
            case PatternKind::degree: degree = value; return;
            case PatternKind::hop: hop = value; return;
            case PatternKind::scree: scree = value; return;
            case PatternKind::netvalue: netvalue = value; return;
        }
    }
};

struct PatternDistance {
    PatternKind kind = PatternKind::degree;
    double distance = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct PatternDistanceReport {
    std::vector<PatternDistance> entries;
    bool pass = false;
};

namespace detail {

inline double series_value_at(const PatternSeries& s, double x) {
    const auto& pts = s.points;
    auto it = std::lower_bound(pts.begin(), pts.end(), x,
                               [](const PatternPoint& p, double value) { return p.x < value; });
    if (it != pts.end() && it->x == x) return it->y;
    const PatternPoint& hi = *it;
    const PatternPoint& lo = *(it - 1);
    const bool log_kind = s.kind == PatternKind::degree || s.kind == PatternKind::netvalue;
    if (log_kind && lo.x > 0.0 && lo.y > 0.0 && hi.y > 0.0) {
        const double t = (std::log(x) - std::log(lo.x)) / (std::log(hi.x) - std::log(lo.x));
        return std::exp(std::log(lo.y) + t * (std::log(hi.y) - std::log(lo.y)));
    }
    const double t = (x - lo.x) / (hi.x - lo.x);
    return lo.y + t * (hi.y - lo.y);
}

inline double pattern_distance(const PatternSeries& a, const PatternSeries& b) {
    if (a.kind != b.kind) throw std::invalid_argument("compare_patterns: pattern kinds differ");
    if (a.points.empty() && b.points.empty()) return 0.0;
    if (a.points.empty() || b.points.empty()) return std::numeric_limits<double>::infinity();
    const double lo = std::max(a.points.front().x, b.points.front().x);
    const double hi = std::min(a.points.back().x, b.points.back().x);
    if (lo > hi) return std::numeric_limits<double>::infinity();
    std::vector<double> grid;
    for (const PatternPoint& p : a.points)
        if (p.x >= lo && p.x <= hi) grid.push_back(p.x);
    for (const PatternPoint& p : b.points)
        if (p.x >= lo && p.x <= hi) grid.push_back(p.x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double numerator = 0.0;
    double denominator = 0.0;
    for (double x : grid) {
        const double va = series_value_at(a, x);
        const double vb = series_value_at(b, x);
        numerator += std::fabs(va - vb);
        denominator += 0.5 * (std::fabs(va) + std::fabs(vb));
    }
    if (denominator == 0.0) return numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

}  // namespace detail

/// Relative L1 distance per pattern kind on the shared x-grid (union of both
/// series' x values over the overlapping range; log-log interpolation for the
/// kinds plotted on log axes). Passes iff every distance meets its threshold.
inline PatternDistanceReport compare_patterns(const std::vector<PatternSeries>& a,
                                              const std::vector<PatternSeries>& b,
                                              const PatternThresholds& thresholds = {}) {
    if (a.size() != b.size()) throw std::invalid_argument("compare_patterns: pattern sets differ in size");
    PatternDistanceReport report;
    report.pass = true;
    for (const PatternSeries& sa : a) {
        const PatternSeries* sb = nullptr;
        for (const PatternSeries& candidate : b) {
            if (candidate.kind == sa.kind) {
                sb = &candidate;
                break;
            }
        }
        if (!sb) {
            throw std::invalid_argument(std::string("compare_patterns: no counterpart for pattern '") +
                                        kind_name(sa.kind) + "'");
        }
        PatternDistance entry;
        entry.kind = sa.kind;
        entry.distance = detail::pattern_distance(sa, *sb);
        entry.threshold = thresholds.get(sa.kind);
        entry.pass = entry.distance <= entry.threshold;
        report.pass = report.pass && entry.pass;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace pskg
