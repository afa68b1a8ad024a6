#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "geodetect/graph.hpp"
#include "geodetect/weights.hpp"

namespace geodetect {

/// Global and per-vertex weighted triangle statistics.
/// w_global = sum over unordered triangles {a,b,c} of 1/(w_a w_b w_c);
/// per_vertex[a] = W(a) = n/w_a^2 * sum over pairs {b,c} closing a triangle
/// with a of 1/(w_b w_c).
struct TriangleStatistics {
    double w_global = 0.0;
    std::size_t triangle_count = 0;
    std::vector<double> per_vertex;
    std::int64_t runtime_ms = 0;
};

/// Emits each triangle exactly once using the degree-ordered forward
/// algorithm: edges oriented by increasing (degree, id) rank, wedges closed
/// by an edge. Corners arrive as (u,v,w) in orientation order; the triple is
/// unordered for all statistical purposes. Visit order is the canonical
/// summation order used by every weighted sum in this module.
void enumerate_triangles(const Graph& g,
                         const std::function<void(VertexId, VertexId, VertexId)>& visit);

/// W(G). Deterministic: identical bits for identical (graph, weights)
/// regardless of jobs.
double weighted_triangles(const Graph& g, const WeightSequence& ws, unsigned jobs = 1);

/// W(a) for one vertex. Matches all_localized(g, ws)[a] bit-exactly.
double localized_weighted_triangles(const Graph& g, const WeightSequence& ws, VertexId a);

/// W(a) for every vertex from a single enumeration pass.
std::vector<double> all_localized(const Graph& g, const WeightSequence& ws, unsigned jobs = 1);

/// One pass computing the triangle count, W(G) and all W(a).
TriangleStatistics triangle_statistics(const Graph& g, const WeightSequence& ws,
                                       unsigned jobs = 1);

}  // namespace geodetect
