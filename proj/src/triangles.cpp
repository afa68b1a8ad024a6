#include "geodetect/triangles.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>

#include "geodetect/numeric.hpp"
#include "geodetect/parallel.hpp"

namespace geodetect {

namespace {

// Degree-ordered orientation. rankpos[v] is v's position in the total order
// by (degree, id); fwd[v] holds the rank positions of higher-ranked
// neighbors, ascending, so intersections walk in canonical order.
struct Orientation {
    std::vector<std::uint32_t> rankpos;
    std::vector<VertexId> vertex_at;          // inverse of rankpos
    std::vector<std::size_t> offsets;         // n+1, into fwd
    std::vector<std::uint32_t> fwd;
};

Orientation build_orientation(const Graph& g) {
    const std::size_t n = g.num_vertices();
    Orientation o;
    o.vertex_at.resize(n);
    std::iota(o.vertex_at.begin(), o.vertex_at.end(), VertexId{0});
    std::sort(o.vertex_at.begin(), o.vertex_at.end(), [&](VertexId a, VertexId b) {
        const auto da = g.degree(a), db = g.degree(b);
        return da != db ? da < db : a < b;
    });
    o.rankpos.resize(n);
    for (std::size_t r = 0; r < n; ++r) o.rankpos[o.vertex_at[r]] = static_cast<std::uint32_t>(r);

    o.offsets.assign(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) {
        std::size_t count = 0;
        for (VertexId u : g.neighbors(v)) {
            if (o.rankpos[u] > o.rankpos[v]) ++count;
        }
        o.offsets[v + 1] = count;
    }
    for (std::size_t v = 0; v < n; ++v) o.offsets[v + 1] += o.offsets[v];
    o.fwd.resize(o.offsets[n]);
    for (VertexId v = 0; v < n; ++v) {
        std::size_t at = o.offsets[v];
        for (VertexId u : g.neighbors(v)) {
            if (o.rankpos[u] > o.rankpos[v]) o.fwd[at++] = o.rankpos[u];
        }
        std::sort(o.fwd.begin() + o.offsets[v], o.fwd.begin() + at);
    }
    return o;
}

using Triangle = std::array<VertexId, 3>;  // (u, v, w) in orientation order

template <typename Visit>
void enumerate_source(const Graph& /*g*/, const Orientation& o, VertexId u, Visit&& visit) {
    const std::size_t begin = o.offsets[u];
    const std::size_t end = o.offsets[u + 1];
    for (std::size_t i = begin; i < end; ++i) {
        const std::uint32_t rv = o.fwd[i];
        const VertexId v = o.vertex_at[rv];
        // Two-pointer intersection of fwd[u] and fwd[v]; common entries have
        // rank above rv by construction, so each triangle appears once.
        std::size_t a = begin;
        std::size_t b = o.offsets[v];
        const std::size_t a_end = end;
        const std::size_t b_end = o.offsets[v + 1];
        while (a < a_end && b < b_end) {
            const std::uint32_t ra = o.fwd[a];
            const std::uint32_t rb = o.fwd[b];
            if (ra < rb) {
                ++a;
            } else if (rb < ra) {
                ++b;
            } else {
                visit(u, v, o.vertex_at[ra]);
                ++a;
                ++b;
            }
        }
    }
}

// Fixed partition of source vertices into contiguous blocks, balanced by
// forward-degree work estimate. Independent of the thread count, so the
// block-ordered merge is schedule-independent.
std::vector<std::size_t> block_boundaries(const Orientation& o, std::size_t n) {
    constexpr std::size_t kBlocks = 512;
    const std::size_t nb = std::min(kBlocks, std::max<std::size_t>(n, 1));
    const double total = static_cast<double>(o.fwd.size() + n);
    std::vector<std::size_t> bounds;
    bounds.reserve(nb + 1);
    bounds.push_back(0);
    double acc = 0.0;
    std::size_t next_block = 1;
    for (std::size_t v = 0; v < n; ++v) {
        acc += static_cast<double>(o.offsets[v + 1] - o.offsets[v]) + 1.0;
        while (next_block < nb &&
               acc >= total * static_cast<double>(next_block) / static_cast<double>(nb)) {
            bounds.push_back(v + 1);
            ++next_block;
        }
    }
    while (bounds.size() < nb + 1) bounds.push_back(n);
    bounds.back() = n;
    return bounds;
}

std::vector<std::vector<Triangle>> enumerate_blocks(const Graph& g, const Orientation& o,
                                                    unsigned jobs) {
    const std::size_t n = g.num_vertices();
    const auto bounds = block_boundaries(o, n);
    const std::size_t nb = bounds.size() - 1;
    std::vector<std::vector<Triangle>> blocks(nb);
    parallel_blocks(nb, jobs, [&](std::size_t b) {
        auto& out = blocks[b];
        for (VertexId u = static_cast<VertexId>(bounds[b]);
             u < static_cast<VertexId>(bounds[b + 1]); ++u) {
            enumerate_source(g, o, u, [&](VertexId a, VertexId v, VertexId w) {
                out.push_back(Triangle{a, v, w});
            });
        }
    });
    return blocks;
}

inline void neumaier_add(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
        comp += (sum - t) + v;
    } else {
        comp += (v - t) + sum;
    }
    sum = t;
}

// 1/(w_a w_b w_c) with a fixed multiplication order (ascending vertex id),
// so every consumer sees the identical bits for the same triangle.
inline double triangle_term(const Triangle& t, std::span<const double> inv_w) {
    VertexId i0 = t[0], i1 = t[1], i2 = t[2];
    if (i0 > i1) std::swap(i0, i1);
    if (i1 > i2) std::swap(i1, i2);
    if (i0 > i1) std::swap(i0, i1);
    return (inv_w[i0] * inv_w[i1]) * inv_w[i2];
}

std::vector<double> inverse_weights(const WeightSequence& ws) {
    std::vector<double> inv(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) inv[i] = 1.0 / ws.values[i];
    return inv;
}

void check_sizes(const Graph& g, const WeightSequence& ws) {
    if (ws.size() != g.num_vertices()) {
        throw std::invalid_argument("weight sequence length must equal the vertex count");
    }
}

}  // namespace

void enumerate_triangles(const Graph& g,
                         const std::function<void(VertexId, VertexId, VertexId)>& visit) {
    const Orientation o = build_orientation(g);
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        enumerate_source(g, o, u, visit);
    }
}

double weighted_triangles(const Graph& g, const WeightSequence& ws, unsigned jobs) {
    check_sizes(g, ws);
    const Orientation o = build_orientation(g);
    const auto blocks = enumerate_blocks(g, o, jobs);
    const auto inv = inverse_weights(ws);
    KahanSum w;
    for (const auto& block : blocks) {
        for (const Triangle& t : block) w.add(triangle_term(t, inv));
    }
    return w.value();
}

TriangleStatistics triangle_statistics(const Graph& g, const WeightSequence& ws, unsigned jobs) {
    check_sizes(g, ws);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = g.num_vertices();
    const Orientation o = build_orientation(g);
    const auto blocks = enumerate_blocks(g, o, jobs);
    const auto inv = inverse_weights(ws);

    TriangleStatistics stats;
    KahanSum w;
    std::vector<double> acc(n, 0.0), comp(n, 0.0);
    for (const auto& block : blocks) {
        for (const Triangle& t : block) {
            const double term = triangle_term(t, inv);
            w.add(term);
            ++stats.triangle_count;
            neumaier_add(acc[t[0]], comp[t[0]], term);
            neumaier_add(acc[t[1]], comp[t[1]], term);
            neumaier_add(acc[t[2]], comp[t[2]], term);
        }
    }
    stats.w_global = w.value();
    stats.per_vertex.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t a = 0; a < n; ++a) {
        stats.per_vertex[a] = dn * (acc[a] + comp[a]) / ws.values[a];
    }
    stats.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return stats;
}

std::vector<double> all_localized(const Graph& g, const WeightSequence& ws, unsigned jobs) {
    return triangle_statistics(g, ws, jobs).per_vertex;
}

double localized_weighted_triangles(const Graph& g, const WeightSequence& ws, VertexId a) {
    check_sizes(g, ws);
    if (a >= g.num_vertices()) {
        throw std::invalid_argument("vertex out of range");
    }
    const Orientation o = build_orientation(g);
    const auto inv = inverse_weights(ws);

    // Collect a's triangles, then replay them in the canonical enumeration
    // order (source id, then rank positions) so the compensated sum sees the
    // same addend sequence as the batch pass.
    struct Keyed {
        std::uint64_t source;
        std::uint32_t rv, rw;
        double term;
    };
    std::vector<Keyed> found;
    const auto nb = g.neighbors(a);
    for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            if (!g.has_edge(nb[i], nb[j])) continue;
            std::array<VertexId, 3> corners{a, nb[i], nb[j]};
            std::sort(corners.begin(), corners.end(), [&](VertexId x, VertexId y) {
                return o.rankpos[x] < o.rankpos[y];
            });
            found.push_back(Keyed{corners[0], o.rankpos[corners[1]], o.rankpos[corners[2]],
                                  triangle_term(Triangle{corners[0], corners[1], corners[2]}, inv)});
        }
    }
    std::sort(found.begin(), found.end(), [](const Keyed& x, const Keyed& y) {
        return std::tie(x.source, x.rv, x.rw) < std::tie(y.source, y.rv, y.rw);
    });
    double sum = 0.0, comp = 0.0;
    for (const Keyed& kt : found) neumaier_add(sum, comp, kt.term);
    return static_cast<double>(g.num_vertices()) * (sum + comp) / ws.values[a];
}

}  // namespace geodetect
