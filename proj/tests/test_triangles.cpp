#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "geodetect/generators.hpp"
#include "geodetect/numeric.hpp"
#include "geodetect/oracle.hpp"
#include "geodetect/triangles.hpp"

using namespace geodetect;

namespace {

WeightSequence unit_weights(std::size_t n) {
    WeightSequence ws;
    ws.tau = 2.5;
    ws.w0 = 1.0;
    ws.c_const = 1.0;
    ws.values.assign(n, 1.0);
    return ws;
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId i = 0; i < n; ++i) {
        for (VertexId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return Graph::from_edge_list(n, edges);
}

}  // namespace

TEST_CASE("K4 has four triangles, stars have none") {
    const Graph k4 = complete_graph(4);
    std::size_t count = 0;
    enumerate_triangles(k4, [&](VertexId, VertexId, VertexId) { ++count; });
    CHECK(count == 4);
    CHECK(weighted_triangles(k4, unit_weights(4)) == doctest::Approx(4.0));

    std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    const Graph s5 = Graph::from_edge_list(6, star);
    CHECK(triangle_statistics(s5, unit_weights(6)).triangle_count == 0);
}

TEST_CASE("weighted triangle values on K3") {
    const Graph k3 = complete_graph(3);
    CHECK(weighted_triangles(k3, unit_weights(3)) == doctest::Approx(1.0));
    WeightSequence w124 = unit_weights(3);
    w124.values = {1.0, 2.0, 4.0};
    CHECK(weighted_triangles(k3, w124) == doctest::Approx(0.125));
}

TEST_CASE("localized statistic on K3 and triangle-free vertices") {
    const Graph k3 = complete_graph(3);
    const auto ws = unit_weights(3);
    CHECK(localized_weighted_triangles(k3, ws, 0) == doctest::Approx(3.0));
    const auto all = all_localized(k3, ws);
    for (double v : all) CHECK(v == doctest::Approx(3.0));

    std::vector<Edge> path{{0, 1}, {1, 2}};
    const Graph p3 = Graph::from_edge_list(3, path);
    CHECK(localized_weighted_triangles(p3, unit_weights(3), 1) == 0.0);
}

TEST_CASE("empty graph gives zero everywhere") {
    const Graph g = Graph::from_edge_list(4, {});
    const auto st = triangle_statistics(g, unit_weights(4));
    CHECK(st.w_global == 0.0);
    CHECK(st.triangle_count == 0);
    for (double v : st.per_vertex) CHECK(v == 0.0);
}

TEST_CASE("per-vertex calls agree with the batch bit-exactly") {
    ModelParams p;
    p.n = 500;
    p.seed = 8;
    const H0Sample s = sample_h0_model(p);
    const auto batch = all_localized(s.graph, s.weights);
    for (VertexId a = 0; a < 500; a += 7) {
        REQUIRE(localized_weighted_triangles(s.graph, s.weights, a) == batch[a]);
    }
}

TEST_CASE("corner identity sum_a w_a W(a) = 3 n W(G)") {
    ModelParams p;
    p.n = 800;
    p.seed = 21;
    const H0Sample s = sample_h0_model(p);
    const auto st = triangle_statistics(s.graph, s.weights);
    KahanSum lhs;
    for (std::size_t a = 0; a < st.per_vertex.size(); ++a) {
        lhs.add(s.weights.values[a] * st.per_vertex[a]);
    }
    const double rhs = 3.0 * static_cast<double>(p.n) * st.w_global;
    CHECK(lhs.value() == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("fast enumeration matches the naive oracle on random graphs") {
    for (std::size_t trial = 0; trial < 20; ++trial) {
        ModelParams p;
        p.n = 80 + 11 * trial;
        p.seed = 3000 + trial;
        Graph g;
        WeightSequence ws;
        if (trial % 2 == 0) {
            auto s = sample_h0_model(p);
            g = std::move(s.graph);
            ws = std::move(s.weights);
        } else {
            p.k = p.n / 4;
            auto s = sample_h1_model(p);
            g = std::move(s.graph);
            ws = std::move(s.weights);
        }
        std::set<std::array<VertexId, 3>> fast;
        enumerate_triangles(g, [&](VertexId a, VertexId b, VertexId c) {
            std::array<VertexId, 3> t{a, b, c};
            std::sort(t.begin(), t.end());
            REQUIRE(fast.insert(t).second);  // emitted exactly once
        });
        const auto naive = oracle::naive_triangle_list(g);
        REQUIRE(fast.size() == naive.size());
        for (const auto& t : naive) REQUIRE(fast.count(t) == 1);
        REQUIRE(weighted_triangles(g, ws) == oracle::naive_weighted_triangles(g, ws));
    }
}

TEST_CASE("statistics are bit-identical across thread counts") {
    ModelParams p;
    p.n = 4000;
    p.k = 400;
    p.seed = 31;
    const H1Sample s = sample_h1_model(p);
    const auto st1 = triangle_statistics(s.graph, s.weights, 1);
    const auto st4 = triangle_statistics(s.graph, s.weights, 4);
    const auto st8 = triangle_statistics(s.graph, s.weights, 8);
    CHECK(st1.w_global == st4.w_global);
    CHECK(st1.w_global == st8.w_global);
    CHECK(st1.triangle_count == st4.triangle_count);
    REQUIRE(st1.per_vertex == st4.per_vertex);
    REQUIRE(st1.per_vertex == st8.per_vertex);
    CHECK(weighted_triangles(s.graph, s.weights, 8) == st1.w_global);
}

TEST_CASE("H0 concentration and H1 growth of W") {
    // light version of the Fig 1 behavior; acceptance runs the full scale
    const std::size_t reps = 60;
    std::vector<double> h0;
    for (std::size_t r = 0; r < reps; ++r) {
        ModelParams p;
        p.n = 10000;
        p.seed = 9000 + r;
        const H0Sample s = sample_h0_model(p);
        h0.push_back(weighted_triangles(s.graph, s.weights));
    }
    const auto mv = mean_variance(h0);
    CHECK(mv.variance < 0.5);  // no divergence

    double prev_mean = mv.mean;
    for (std::size_t k : {std::size_t{100}, std::size_t{300}}) {
        std::vector<double> h1;
        for (std::size_t r = 0; r < reps; ++r) {
            ModelParams p;
            p.n = 10000;
            p.k = k;
            p.seed = 9500 + 100 * k + r;
            const H1Sample s = sample_h1_model(p);
            h1.push_back(weighted_triangles(s.graph, s.weights));
        }
        const double mean = mean_variance(h1).mean;
        CHECK(mean > prev_mean);
        prev_mean = mean;
    }
}
