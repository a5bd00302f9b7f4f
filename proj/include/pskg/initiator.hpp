#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pskg {

/// Number of vertices n^k, rejecting anything that does not fit in 64 bits.
inline std::uint64_t vertex_count(std::uint64_t n, unsigned k) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (count > std::numeric_limits<std::uint64_t>::max() / n) {
            throw std::invalid_argument("vertex_count: n^k overflows 64 bits");
        }
        count *= n;
    }
    return count;
}

/// The n x n probability matrix that seeds the recursive edge distribution.
///
/// Construction accepts raw entries whose sum deviates from 1 by at most
/// 1e-3 and renormalizes them, so published parameter sets that round to
/// 1.0001 or 0.9996 are usable as printed.
class InitiatorMatrix {
public:
    InitiatorMatrix(std::size_t n, std::vector<double> entries) : n_(n), p_(std::move(entries)) {
        if (n_ < 2) throw std::invalid_argument("initiator: side length must be >= 2");
        if (p_.size() != n_ * n_) {
            throw std::invalid_argument("initiator: expected " + std::to_string(n_ * n_) +
                                        " entries, got " + std::to_string(p_.size()));
        }
        double sum = 0.0;
        for (double value : p_) {
            if (!(value >= 0.0) || !std::isfinite(value)) {
                throw std::invalid_argument("initiator: entries must be finite and >= 0");
            }
            sum += value;
        }
        if (std::fabs(sum - 1.0) > 1e-3) {
            std::ostringstream msg;
            msg << "initiator: entries sum to " << sum << ", more than 1e-3 away from 1";
            throw std::invalid_argument(msg.str());
        }
        for (double& value : p_) value /= sum;
    }

    std::size_t n() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
    const std::vector<double>& entries() const { return p_; }

private:
    std::size_t n_;
    std::vector<double> p_;
};

/// Source marginal U (row sums of P) and destination conditional V
/// (row-normalized P). Rows of P with zero mass are rejected because the
/// conditional is undefined there.
class Marginals {
public:
    explicit Marginals(const InitiatorMatrix& p) : n_(p.n()), u_(n_), v_(n_ * n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            double row_sum = 0.0;
            for (std::size_t j = 0; j < n_; ++j) row_sum += p.at(i, j);
            if (row_sum <= 0.0) {
                throw std::invalid_argument("marginals: initiator row " + std::to_string(i) +
                                            " has zero mass");
            }
            u_[i] = row_sum;
            for (std::size_t j = 0; j < n_; ++j) v_[i * n_ + j] = p.at(i, j) / row_sum;
        }
    }

    std::size_t n() const { return n_; }
    double u(std::size_t i) const { return u_[i]; }
    double v(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
    const std::vector<double>& u_vector() const { return u_; }
    /// Row i of V as a pointer range usable with sample_index.
    const double* v_row(std::size_t i) const { return v_.data() + i * n_; }

private:
    std::size_t n_;
    std::vector<double> u_;
    std::vector<double> v_;
};

inline Marginals derive_marginals(const InitiatorMatrix& p) { return Marginals(p); }

enum class Model { skg, skg_equiv, pskg };

inline const char* model_name(Model m) {
    switch (m) {
        case Model::skg: return "skg";
        case Model::skg_equiv: return "skg-equiv";
        case Model::pskg: return "pskg";
    }
    return "?";
}

inline Model parse_model(const std::string& name) {
    if (name == "skg") return Model::skg;
    if (name == "skg-equiv") return Model::skg_equiv;
    if (name == "pskg") return Model::pskg;
    throw std::invalid_argument("unknown model '" + name + "' (expected skg, skg-equiv or pskg)");
}

/// Full generation configuration. expected_edges is an exact count for the
/// SKG models (rounded to nearest) and a Poisson mean for PSKG.
struct GraphSpec {
    InitiatorMatrix initiator;
    unsigned k = 1;
    double expected_edges = 0.0;
    std::uint64_t seed = 0;
    Model model = Model::pskg;
    unsigned workers = 1;

    std::uint64_t n_vertices() const {
        return vertex_count(static_cast<std::uint64_t>(initiator.n()), k);
    }

    void validate() const {
        if (k < 1) throw std::invalid_argument("spec: k must be >= 1");
        (void)n_vertices();  // rejects 64-bit overflow
        if (!(expected_edges >= 0.0) || !std::isfinite(expected_edges)) {
            throw std::invalid_argument("spec: expected edge count must be finite and >= 0");
        }
        if (workers < 1) throw std::invalid_argument("spec: worker count must be >= 1");
    }
};

/// Parse the initiator text format: first non-comment line holds n, the next
/// n lines hold n whitespace-separated reals each. '#' lines are ignored.
inline InitiatorMatrix parse_initiator(const std::string& text) {
    std::istringstream input(text);
    std::vector<std::string> lines;
    for (std::string line; std::getline(input, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw std::invalid_argument("initiator: empty input");

    std::size_t n = 0;
    {
        std::istringstream head(lines[0]);
        long long value = 0;
        std::string extra;
        if (!(head >> value) || value < 0 || (head >> extra)) {
            throw std::invalid_argument("initiator: first line must be the side length n");
        }
        n = static_cast<std::size_t>(value);
    }
    if (n < 2) throw std::invalid_argument("initiator: side length must be >= 2");
    if (lines.size() != n + 1) {
        throw std::invalid_argument("initiator: expected " + std::to_string(n) +
                                    " matrix rows, got " + std::to_string(lines.size() - 1));
    }

    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::istringstream row(lines[i + 1]);
        for (std::size_t j = 0; j < n; ++j) {
            double value = 0.0;
            if (!(row >> value)) {
                throw std::invalid_argument("initiator: row " + std::to_string(i) +
                                            " needs " + std::to_string(n) + " numeric entries");
            }
            entries.push_back(value);
        }
        std::string extra;
        if (row >> extra) {
            throw std::invalid_argument("initiator: row " + std::to_string(i) +
                                        " has more than " + std::to_string(n) + " entries");
        }
    }
    return InitiatorMatrix(n, std::move(entries));
}

/// Parse the inline form "p00,p01;p10,p11" used by the CLI.
inline InitiatorMatrix parse_initiator_inline(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream input(text);
    for (std::string row_text; std::getline(input, row_text, ';');) {
        std::vector<double> row;
        std::istringstream cells(row_text);
        for (std::string cell; std::getline(cells, cell, ',');) {
            try {
                std::size_t used = 0;
                const double value = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(value);
            } catch (const std::exception&) {
                throw std::invalid_argument("initiator: bad inline entry '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw std::invalid_argument("initiator: inline matrix must be square");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return InitiatorMatrix(n, std::move(entries));
}

/// Dense k-th Kronecker power of P. Test oracle only; capped at N <= 4096.
/// Index convention everywhere: the most significant base-n digit of a
/// vertex id names the first (outermost) recursion level.
inline std::vector<double> kron_power_dense(const InitiatorMatrix& p, unsigned k) {
    if (k < 1) throw std::invalid_argument("kron_power_dense: k must be >= 1");
    const std::uint64_t n_vertices = vertex_count(p.n(), k);
    if (n_vertices > 4096) {
        throw std::invalid_argument("kron_power_dense: N exceeds the 4096 oracle cap");
    }
    const std::size_t n = p.n();
    std::vector<double> result(p.entries());
    std::size_t side = n;
    for (unsigned level = 1; level < k; ++level) {
        const std::size_t next_side = side * n;
        std::vector<double> next(next_side * next_side);
        for (std::size_t bi = 0; bi < side; ++bi)
            for (std::size_t bj = 0; bj < side; ++bj) {
                const double block = result[bi * side + bj];
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        next[(bi * n + i) * next_side + (bj * n + j)] = block * p.at(i, j);
            }
        result.swap(next);
        side = next_side;
    }
    return result;
}

/// Dense k-th Kronecker power of a marginal vector. Test oracle; N <= 2^24.
inline std::vector<double> kron_power_vector(const std::vector<double>& u, unsigned k) {
    if (u.size() < 2) throw std::invalid_argument("kron_power_vector: need n >= 2");
    if (k < 1) throw std::invalid_argument("kron_power_vector: k must be >= 1");
    const std::uint64_t n_entries = vertex_count(u.size(), k);
    if (n_entries > (1ull << 24)) {
        throw std::invalid_argument("kron_power_vector: N exceeds the 2^24 oracle cap");
    }
    std::vector<double> result(u);
    for (unsigned level = 1; level < k; ++level) {
        std::vector<double> next(result.size() * u.size());
        std::size_t out = 0;
        for (double left : result)
            for (double right : u) next[out++] = left * right;
        result.swap(next);
    }
    return result;
}

}  // namespace pskg
