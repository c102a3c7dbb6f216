#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modnull/numeric.hpp"

namespace modnull {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/**
 * Simple undirected graph in CSR form.
 *
 * Immutable after construction. Neighbor lists are sorted ascending; the
 * constructor rejects self-loops, duplicate edges (in either orientation)
 * and out-of-range endpoints.
 */
class Graph {
public:
    Graph() = default;

    /// Build from an unordered edge list. Throws InputError on invalid edges.
    Graph(std::size_t n, std::span<const Edge> edges);

    std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return num_edges_; }

    std::uint32_t degree(VertexId v) const noexcept {
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }

    std::span<const VertexId> neighbors(VertexId v) const noexcept {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    bool has_edge(VertexId u, VertexId v) const noexcept;

    /// Edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    bool operator==(const Graph& other) const = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> targets_;
    std::size_t num_edges_ = 0;
};

struct DegreeSummary {
    std::size_t n = 0;
    std::size_t m = 0;
    WideCount s2 = 0;  // sum k_i^2
    WideCount s4 = 0;  // sum k_i^4
    std::uint32_t kmax = 0;

    bool operator==(const DegreeSummary&) const = default;
};

/**
 * Parse the edge-list text format: two whitespace-separated vertex ids per
 * line, '#' comments, optional "# n=<count>" directive. Blank lines are
 * skipped. Throws InputError naming the offending line.
 */
Graph parse_edge_list(std::string_view text);
Graph read_edge_list_file(const std::string& path);

/// Canonical form: "# n=<n>" then edges u < v in lexicographic order.
std::string write_edge_list(const Graph& g);

DegreeSummary degree_summary(const Graph& g);

/// Sum over all ordered (i, j), diagonal included, of (sum_l A_il A_jl)^2.
/// Cost O(sum_l k_l^2) with an O(n) scratch row.
WideCount common_neighbor_frobenius(const Graph& g);

}  // namespace modnull
