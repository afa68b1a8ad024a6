#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geodetect {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Immutable simple undirected graph in compressed adjacency form.
/// Neighbor lists are sorted ascending with no duplicates or self-loops;
/// adjacency is symmetric. Safe for concurrent readers.
class Graph {
public:
    Graph() = default;

    /// Builds from an arbitrary edge list: symmetrizes, deduplicates, sorts.
    /// Rejects out-of-range endpoints and self-loops.
    static Graph from_edge_list(std::size_t n, std::span<const Edge> edges);

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return m_; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(VertexId u, VertexId v) const;

    /// Unique edges as (u,v) with u < v, lexicographically sorted.
    std::vector<Edge> edge_list() const;

    bool operator==(const Graph& other) const = default;

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<std::size_t> offsets_;  // n+1 entries
    std::vector<VertexId> adj_;         // 2m entries
};

/// Reads the edge-list format: one `u v` pair per line, `#` comment lines
/// ignored. Vertex count is max id + 1 unless the header carries an explicit
/// `n=<count>` token. Malformed lines are reported with their line number.
Graph load_edge_list(const std::filesystem::path& path);

/// Writes `# geodetect v1 ...` header, an `# n=<count>` line, then one edge
/// per line `u v` with u < v, lexicographically sorted. load(save(g)) == g.
void save_edge_list(const Graph& g, const std::filesystem::path& path,
                    const std::string& params_string = {});

}  // namespace geodetect
