#include "modnull/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "modnull/error.hpp"

namespace modnull {

std::string to_string(WideCount value) {
    if (value == 0) return "0";
    std::string out;
    while (value > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
    if (n > std::numeric_limits<VertexId>::max()) {
        throw InputError("vertex count exceeds 32-bit id range", "n=" + std::to_string(n));
    }
    std::vector<std::size_t> counts(n + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw InputError("edge endpoint out of range",
                             std::to_string(u) + "-" + std::to_string(v));
        }
        if (u == v) {
            throw InputError("self-loop", "vertex " + std::to_string(u));
        }
        ++counts[u + 1];
        ++counts[v + 1];
    }
    for (std::size_t i = 1; i <= n; ++i) counts[i] += counts[i - 1];
    offsets_ = counts;
    targets_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        targets_[cursor[u]++] = v;
        targets_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
        auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
        std::sort(first, last);
        if (auto dup = std::adjacent_find(first, last); dup != last) {
            throw InputError("duplicate edge",
                             std::to_string(i) + "-" + std::to_string(*dup));
        }
    }
    num_edges_ = edges.size();
}

bool Graph::has_edge(VertexId u, VertexId v) const noexcept {
    if (u >= num_vertices() || v >= num_vertices()) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (VertexId u = 0; u < num_vertices(); ++u) {
        for (VertexId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

namespace {

std::string line_context(std::size_t line) { return "line " + std::to_string(line); }

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::optional<std::uint64_t> parse_uint(std::string_view token) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
    std::optional<std::uint64_t> declared_n;
    struct Row {
        Edge edge;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::uint64_t max_id = 0;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            if (body.starts_with("n=")) {
                if (declared_n) throw InputError("repeated n directive", line_context(line_no));
                auto n = parse_uint(trim(body.substr(2)));
                if (!n) throw InputError("malformed n directive", line_context(line_no));
                declared_n = *n;
            }
            continue;
        }

        std::istringstream fields{std::string(line)};
        std::string a, b, extra;
        fields >> a >> b;
        if (a.empty() || b.empty() || (fields >> extra)) {
            throw InputError("expected two vertex ids", line_context(line_no));
        }
        auto u = parse_uint(a);
        auto v = parse_uint(b);
        if (!u || !v) throw InputError("vertex id is not a nonnegative integer", line_context(line_no));
        if (*u == *v) throw InputError("self-loop", line_context(line_no));
        if (*u > std::numeric_limits<VertexId>::max() || *v > std::numeric_limits<VertexId>::max()) {
            throw InputError("vertex id exceeds 32-bit range", line_context(line_no));
        }
        max_id = std::max({max_id, *u, *v});
        rows.push_back({{static_cast<VertexId>(std::min(*u, *v)), static_cast<VertexId>(std::max(*u, *v))},
                        line_no});
    }

    if (rows.empty()) throw InputError("edge list has no edges", "m=0");

    const std::uint64_t n = declared_n ? *declared_n : max_id + 1;
    if (max_id >= n) {
        for (const auto& row : rows) {
            if (row.edge.second >= n) {
                throw InputError("vertex id not below declared n=" + std::to_string(n),
                                 line_context(row.line));
            }
        }
    }

    std::vector<Row> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Row& x, const Row& y) { return x.edge < y.edge; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].edge == sorted[i - 1].edge) {
            throw InputError("duplicate edge", line_context(sorted[i].line));
        }
    }

    std::vector<Edge> edges;
    edges.reserve(rows.size());
    for (const auto& row : rows) edges.push_back(row.edge);
    return Graph(static_cast<std::size_t>(n), edges);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open graph file", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_edge_list(buffer.str());
}

std::string write_edge_list(const Graph& g) {
    std::string out = "# n=" + std::to_string(g.num_vertices()) + "\n";
    for (const auto& [u, v] : g.edges()) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    return out;
}

DegreeSummary degree_summary(const Graph& g) {
    DegreeSummary s;
    s.n = g.num_vertices();
    s.m = g.num_edges();
    WideCount total = 0;
    for (VertexId v = 0; v < s.n; ++v) {
        const WideCount k = g.degree(v);
        total += k;
        s.s2 += k * k;
        s.s4 += k * k * k * k;
        s.kmax = std::max(s.kmax, g.degree(v));
    }
    if (total != 2 * static_cast<WideCount>(s.m)) {
        throw std::logic_error("degree sum does not equal 2m");
    }
    return s;
}

WideCount common_neighbor_frobenius(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::uint64_t> row(n, 0);
    std::vector<VertexId> touched;
    WideCount total = 0;
    for (VertexId i = 0; i < n; ++i) {
        touched.clear();
        for (VertexId l : g.neighbors(i)) {
            for (VertexId j : g.neighbors(l)) {
                if (row[j]++ == 0) touched.push_back(j);
            }
        }
        for (VertexId j : touched) {
            total += static_cast<WideCount>(row[j]) * row[j];
            row[j] = 0;
        }
    }
    return total;
}

}  // namespace modnull
