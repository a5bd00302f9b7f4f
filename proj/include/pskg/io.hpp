#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pskg/analysis.hpp"
#include "pskg/generator.hpp"
#include "pskg/partition.hpp"

namespace pskg {

enum class FileFormat { tsv, binary };

inline FileFormat parse_format(const std::string& name) {
    if (name == "tsv") return FileFormat::tsv;
    if (name == "binary") return FileFormat::binary;
    throw std::invalid_argument("unknown format '" + name + "' (expected tsv or binary)");
}

namespace detail {

inline void append_u64_le(std::string& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

inline std::uint64_t read_u64_le(const std::string& bytes, std::size_t offset) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        value |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    }
    return value;
}

inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

/// Strict decimal u64 parse of [begin, end); returns false on any other text.
inline bool parse_u64(const char* begin, const char* end, std::uint64_t& out) {
    if (begin == end) return false;
    std::uint64_t value = 0;
    for (const char* p = begin; p != end; ++p) {
        if (*p < '0' || *p > '9') return false;
        const std::uint64_t digit = static_cast<std::uint64_t>(*p - '0');
        if (value > (UINT64_MAX - digit) / 10) return false;
        value = value * 10 + digit;
    }
    out = value;
    return true;
}

}  // namespace detail

inline constexpr char kEdgeMagic[4] = {'P', 'S', 'K', 'G'};
inline constexpr unsigned char kEdgeFormatVersion = 1;

/// Text form: '#' header comments (the first always records the vertex
/// count, the rest are caller-supplied fingerprint lines), then one
/// "u<TAB>v" line per edge.
inline std::string write_edge_list_tsv(const EdgeList& g,
                                       const std::vector<std::string>& comments = {}) {
    std::string out = "# vertices=" + std::to_string(g.n_vertices) + "\n";
    for (const std::string& comment : comments) {
        out += "# ";
        out += comment;
        out += "\n";
    }
    for (const Edge& e : g.edges) {
        out += std::to_string(e.u);
        out += '\t';
        out += std::to_string(e.v);
        out += '\n';
    }
    return out;
}

/// Binary form: magic, version byte, little-endian u64 vertex and edge
/// counts, then the little-endian u64 id pairs.
inline std::string write_edge_list_binary(const EdgeList& g) {
    std::string out(kEdgeMagic, 4);
    out.push_back(static_cast<char>(kEdgeFormatVersion));
    detail::append_u64_le(out, g.n_vertices);
    detail::append_u64_le(out, g.edges.size());
    for (const Edge& e : g.edges) {
        detail::append_u64_le(out, e.u);
        detail::append_u64_le(out, e.v);
    }
    return out;
}

inline std::string write_edge_list(const EdgeList& g, FileFormat format,
                                   const std::vector<std::string>& comments = {}) {
    return format == FileFormat::tsv ? write_edge_list_tsv(g, comments) : write_edge_list_binary(g);
}

/// Comment lines never carry edges, but a "vertices=N" token in one fixes the
/// vertex count; without it the count falls back to max id + 1.
inline EdgeList read_edge_list_tsv(const std::string& bytes) {
    EdgeList g;
    bool have_n = false;
    std::uint64_t max_id = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) eol = bytes.size();
        std::size_t end = eol;
        if (end > pos && bytes[end - 1] == '\r') --end;
        ++line_no;
        if (end == pos) {
            pos = eol + 1;
            continue;
        }
        if (bytes[pos] == '#') {
            const std::size_t key = bytes.find("vertices=", pos);
            if (!have_n && key != std::string::npos && key < end) {
                std::size_t value_end = key + 9;
                while (value_end < end && bytes[value_end] >= '0' && bytes[value_end] <= '9') ++value_end;
                if (detail::parse_u64(bytes.data() + key + 9, bytes.data() + value_end, g.n_vertices)) {
                    have_n = true;
                }
            }
            pos = eol + 1;
            continue;
        }
        const std::size_t tab = bytes.find('\t', pos);
        Edge e;
        if (tab == std::string::npos || tab >= end ||
            !detail::parse_u64(bytes.data() + pos, bytes.data() + tab, e.u) ||
            !detail::parse_u64(bytes.data() + tab + 1, bytes.data() + end, e.v)) {
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": expected two tab-separated vertex ids");
        }
        if (have_n && (e.u >= g.n_vertices || e.v >= g.n_vertices)) {
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": vertex id exceeds declared vertex count");
        }
        max_id = std::max({max_id, e.u, e.v});
        g.edges.push_back(e);
        pos = eol + 1;
    }
    if (!have_n) g.n_vertices = g.edges.empty() ? 0 : max_id + 1;
    return g;
}

inline EdgeList read_edge_list_binary(const std::string& bytes) {
    constexpr std::size_t header = 4 + 1 + 8 + 8;
    if (bytes.size() < header) throw std::runtime_error("edge list: truncated binary header");
    if (bytes.compare(0, 4, kEdgeMagic, 4) != 0) throw std::runtime_error("edge list: bad magic");
    const auto version = static_cast<unsigned char>(bytes[4]);
    if (version != kEdgeFormatVersion) {
        throw std::runtime_error("edge list: unsupported format version " + std::to_string(version));
    }
    EdgeList g;
    g.n_vertices = detail::read_u64_le(bytes, 5);
    const std::uint64_t count = detail::read_u64_le(bytes, 13);
    if (count > (bytes.size() - header) / 16 || bytes.size() != header + count * 16) {
        throw std::runtime_error("edge list: truncated binary body");
    }
    g.edges.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t at = header + static_cast<std::size_t>(i) * 16;
        Edge e{detail::read_u64_le(bytes, at), detail::read_u64_le(bytes, at + 8)};
        if (e.u >= g.n_vertices || e.v >= g.n_vertices) {
            throw std::runtime_error("edge list: vertex id exceeds declared vertex count");
        }
        g.edges.push_back(e);
    }
    return g;
}

inline EdgeList read_edge_list(const std::string& bytes, FileFormat format) {
    return format == FileFormat::tsv ? read_edge_list_tsv(bytes) : read_edge_list_binary(bytes);
}

inline std::string write_series_csv(const PatternSeries& s) {
    std::string out = "x,y\n";
    if (s.degenerate) out += "# degenerate\n";
    for (const PatternPoint& p : s.points) {
        out += detail::format_double(p.x);
        out += ',';
        out += detail::format_double(p.y);
        out += '\n';
    }
    return out;
}

inline PatternSeries read_series_csv(const std::string& bytes, PatternKind kind) {
    PatternSeries s{kind, {}, false};
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) eol = bytes.size();
        std::size_t end = eol;
        if (end > pos && bytes[end - 1] == '\r') --end;
        ++line_no;
        const std::string line = bytes.substr(pos, end - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "x,y") throw std::runtime_error("series line 1: expected 'x,y' header");
            saw_header = true;
            continue;
        }
        if (line == "# degenerate") {
            s.degenerate = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("series line " + std::to_string(line_no) + ": expected 'x,y'");
        }
        char* rest = nullptr;
        PatternPoint p;
        p.x = std::strtod(line.c_str(), &rest);
        if (rest != line.c_str() + comma) {
            throw std::runtime_error("series line " + std::to_string(line_no) + ": bad x value");
        }
        p.y = std::strtod(line.c_str() + comma + 1, &rest);
        if (rest != line.c_str() + line.size()) {
            throw std::runtime_error("series line " + std::to_string(line_no) + ": bad y value");
        }
        s.points.push_back(p);
    }
    if (!saw_header) throw std::runtime_error("series: empty input, expected 'x,y' header");
    return s;
}

inline std::string write_partition_table(const PartitionTable& t) {
    std::string out;
    for (std::size_t w = 0; w < t.workers.size(); ++w) {
        out += std::to_string(w);
        out += '\t';
        out += std::to_string(t.workers[w].u_low);
        out += '\t';
        out += std::to_string(t.workers[w].u_up);
        out += '\t';
        out += detail::format_double(t.workers[w].expected_mass);
        out += '\n';
    }
    return out;
}

inline PartitionTable read_partition_table(const std::string& bytes) {
    PartitionTable t;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) eol = bytes.size();
        std::size_t end = eol;
        if (end > pos && bytes[end - 1] == '\r') --end;
        ++line_no;
        const std::string line = bytes.substr(pos, end - pos);
        pos = eol + 1;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        std::uint64_t worker_id = 0;
        WorkerRange range;
        char* rest = nullptr;
        if (fields.size() != 4 ||
            !detail::parse_u64(fields[0].data(), fields[0].data() + fields[0].size(), worker_id) ||
            !detail::parse_u64(fields[1].data(), fields[1].data() + fields[1].size(), range.u_low) ||
            !detail::parse_u64(fields[2].data(), fields[2].data() + fields[2].size(), range.u_up) ||
            (range.expected_mass = std::strtod(fields[3].c_str(), &rest),
             rest != fields[3].c_str() + fields[3].size())) {
            throw std::runtime_error("partition table line " + std::to_string(line_no) +
                                     ": expected worker_id, u_low, u_up, expected_mass");
        }
        if (worker_id != t.workers.size()) {
            throw std::runtime_error("partition table line " + std::to_string(line_no) +
                                     ": worker ids must be consecutive from 0");
        }
        t.workers.push_back(range);
    }
    if (!t.workers.empty()) t.n_vertices = t.workers.back().u_up;
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failure on '" + path + "'");
    return bytes;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

}  // namespace pskg
