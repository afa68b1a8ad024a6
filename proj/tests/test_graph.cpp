#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "geodetect/generators.hpp"
#include "geodetect/graph.hpp"

using namespace geodetect;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("triangle graph basics") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
    const Graph g = Graph::from_edge_list(3, edges);
    CHECK(g.num_edges() == 3);
    for (VertexId v = 0; v < 3; ++v) CHECK(g.degree(v) == 2);
    CHECK(g.has_edge(0, 2));
    CHECK(!g.has_edge(0, 0));
}

TEST_CASE("duplicate and reversed edges collapse") {
    const std::vector<Edge> edges{{0, 1}, {1, 0}};
    const Graph g = Graph::from_edge_list(3, edges);
    CHECK(g.num_edges() == 1);
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(2) == 0);
}

TEST_CASE("empty graph") {
    const Graph g = Graph::from_edge_list(2, {});
    CHECK(g.num_vertices() == 2);
    CHECK(g.num_edges() == 0);
}

TEST_CASE("invalid edges rejected") {
    const std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Graph::from_edge_list(3, loop), std::invalid_argument);
    const std::vector<Edge> range{{0, 3}};
    CHECK_THROWS_AS(Graph::from_edge_list(3, range), std::invalid_argument);
}

TEST_CASE("handshake identity and sorted adjacency on a generated graph") {
    ModelParams p;
    p.n = 2000;
    p.seed = 5;
    const H0Sample sample = sample_h0_model(p);
    const Graph& g = sample.graph;
    std::size_t total = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto ns = g.neighbors(v);
        total += ns.size();
        for (std::size_t i = 0; i < ns.size(); ++i) {
            REQUIRE(ns[i] != v);
            if (i > 0) REQUIRE(ns[i] > ns[i - 1]);
            REQUIRE(g.has_edge(ns[i], v));  // symmetry
        }
    }
    CHECK(total == 2 * g.num_edges());
}

TEST_CASE("save/load round trip") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}, {3, 1}};
    const Graph g = Graph::from_edge_list(5, edges);
    const auto path = temp_file("geodetect_roundtrip.txt");
    save_edge_list(g, path, "model=h0 n=5");
    const Graph h = load_edge_list(path);
    CHECK(g == h);
    std::filesystem::remove(path);
}

TEST_CASE("loader ignores comments and canonicalizes unsorted input") {
    const auto path = temp_file("geodetect_unsorted.txt");
    {
        std::ofstream out(path);
        out << "# a comment header\n";
        out << "2 1\n0 2\n1 0\n";
    }
    const Graph g = load_edge_list(path);
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
    CHECK(g.neighbors(0)[0] == 1);
    CHECK(g.neighbors(0)[1] == 2);
    std::filesystem::remove(path);
}

TEST_CASE("malformed lines are reported with their line number") {
    const auto path = temp_file("geodetect_malformed.txt");
    {
        std::ofstream out(path);
        out << "0 1\nnot an edge\n";
    }
    try {
        load_edge_list(path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("round trip preserves isolated trailing vertices via the header") {
    ModelParams p;
    p.n = 500;
    p.seed = 77;
    const Graph g = sample_h0_model(p).graph;
    const auto path = temp_file("geodetect_h0_roundtrip.txt");
    save_edge_list(g, path);
    CHECK(load_edge_list(path) == g);
    std::filesystem::remove(path);
}

TEST_CASE("round trip at n = 10^5") {
    ModelParams p;
    p.n = 100000;
    p.seed = 4242;
    const Graph g = sample_h0_model(p).graph;
    const auto path = temp_file("geodetect_big_roundtrip.txt");
    save_edge_list(g, path);
    CHECK(load_edge_list(path) == g);
    std::filesystem::remove(path);
}
