#include "geodetect/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

namespace geodetect {

Graph Graph::from_edge_list(std::size_t n, std::span<const Edge> edges) {
    Graph g;
    g.n_ = n;
    g.offsets_.assign(n + 1, 0);

    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw std::invalid_argument("edge endpoint " + std::to_string(std::max(u, v)) +
                                        " out of range for n=" + std::to_string(n));
        }
        if (u == v) {
            throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        }
    }

    // Degree count, fill, then per-vertex sort + dedup.
    for (const auto& [u, v] : edges) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adj_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        g.adj_[cursor[u]++] = v;
        g.adj_[cursor[v]++] = u;
    }

    std::size_t write = 0;
    std::vector<std::size_t> new_offsets(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t begin = g.offsets_[v];
        const std::size_t end = g.offsets_[v + 1];
        std::sort(g.adj_.begin() + begin, g.adj_.begin() + end);
        const auto last = std::unique(g.adj_.begin() + begin, g.adj_.begin() + end);
        const std::size_t len = static_cast<std::size_t>(last - (g.adj_.begin() + begin));
        std::copy(g.adj_.begin() + begin, g.adj_.begin() + begin + len, g.adj_.begin() + write);
        write += len;
        new_offsets[v + 1] = write;
    }
    g.adj_.resize(write);
    g.adj_.shrink_to_fit();
    g.offsets_ = std::move(new_offsets);
    g.m_ = write / 2;
    return g;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    const auto ns = neighbors(u);
    return std::binary_search(ns.begin(), ns.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (VertexId u = 0; u < n_; ++u) {
        for (VertexId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& line) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": malformed edge line '" + line + "'");
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file " + path.string());

    std::vector<Edge> edges;
    std::size_t declared_n = 0;
    bool have_declared_n = false;
    VertexId max_id = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("n=");
            if (pos != std::string::npos) {
                std::size_t value = 0;
                const char* first = line.data() + pos + 2;
                const char* last = line.data() + line.size();
                if (auto [p, ec] = std::from_chars(first, last, value); ec == std::errc{}) {
                    declared_n = value;
                    have_declared_n = true;
                }
            }
            continue;
        }
        std::uint32_t u = 0, v = 0;
        const char* first = line.data();
        const char* last = line.data() + line.size();
        auto r1 = std::from_chars(first, last, u);
        if (r1.ec != std::errc{} || r1.ptr == last || *r1.ptr != ' ') parse_fail(path, line_no, line);
        auto r2 = std::from_chars(r1.ptr + 1, last, v);
        if (r2.ec != std::errc{} || r2.ptr != last) parse_fail(path, line_no, line);
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    const std::size_t n = have_declared_n
                              ? declared_n
                              : (edges.empty() ? 0 : static_cast<std::size_t>(max_id) + 1);
    return Graph::from_edge_list(n, edges);
}

void save_edge_list(const Graph& g, const std::filesystem::path& path,
                    const std::string& params_string) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# geodetect v1";
    if (!params_string.empty()) out << " params: " << params_string;
    out << '\n';
    out << "# n=" << g.num_vertices() << '\n';
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        for (VertexId v : g.neighbors(u)) {
            if (u < v) out << u << ' ' << v << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

}  // namespace geodetect
