#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "geodetect/generators.hpp"
#include "geodetect/inference.hpp"
#include "geodetect/io.hpp"
#include "geodetect/rng.hpp"
#include "geodetect/triangles.hpp"

using namespace geodetect;

namespace {

ModelParams random_params(SplitMix64& rng, bool h1) {
    ModelParams p;
    p.n = 50 + static_cast<std::size_t>(rng() % 400);
    p.k = h1 ? 5 + static_cast<std::size_t>(rng() % (p.n / 3)) : 0;
    p.tau = 2.2 + 0.6 * rng.uniform01();
    p.w0 = 0.5 + rng.uniform01();
    p.d = 1 + static_cast<unsigned>(rng() % 3);
    p.gamma = (rng() % 4 == 0) ? ModelParams::gamma_infinity() : 1.5 + 8.0 * rng.uniform01();
    p.sparse_mode = (rng() % 5 == 0);
    p.seed = rng();
    return p;
}

void check_simple(const Graph& g) {
    std::size_t degree_sum = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto ns = g.neighbors(v);
        degree_sum += ns.size();
        for (std::size_t i = 0; i < ns.size(); ++i) {
            REQUIRE(ns[i] != v);
            if (i > 0) REQUIRE(ns[i] > ns[i - 1]);
            REQUIRE(g.has_edge(ns[i], v));
        }
    }
    REQUIRE(degree_sum == 2 * g.num_edges());
}

}  // namespace

TEST_CASE("generated graphs are simple and symmetric (randomized)") {
    SplitMix64 rng(20240801);
    for (int trial = 0; trial < 60; ++trial) {
        const ModelParams p = random_params(rng, trial % 2 == 1);
        if (p.k == 0) {
            check_simple(sample_h0_model(p).graph);
        } else {
            check_simple(sample_h1_model(p).graph);
        }
    }
}

TEST_CASE("identification is scale equivariant (randomized)") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 100 + rng() % 500;
        WeightSequence ws;
        ws.tau = 2.5;
        ws.w0 = 1.0;
        ws.c_const = 1.0;
        std::vector<double> w_a;
        for (std::size_t v = 0; v < n; ++v) {
            ws.values.push_back(1.0 + 50.0 * rng.uniform01());
            w_a.push_back(rng.uniform01() < 0.3 ? 0.0 : 200.0 * rng.uniform01());
        }
        const double c = 0.1 + 2.0 * rng.uniform01();
        const double scale = 0.25 + 10.0 * rng.uniform01();
        const auto base = identify(w_a, ws, n, c, 1.0);
        std::vector<double> scaled = w_a;
        for (double& x : scaled) x *= scale;
        const auto same = identify(scaled, ws, n, c * scale, 1.0);
        REQUIRE(base.identified == same.identified);
    }
}

TEST_CASE("identified set shrinks as C or t_n grows (randomized)") {
    SplitMix64 rng(177);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 100 + rng() % 300;
        WeightSequence ws;
        ws.tau = 2.5;
        ws.w0 = 1.0;
        ws.c_const = 1.0;
        std::vector<double> w_a;
        for (std::size_t v = 0; v < n; ++v) {
            ws.values.push_back(1.0 + 40.0 * rng.uniform01());
            w_a.push_back(rng.uniform01() < 0.2 ? 0.0 : 300.0 * rng.uniform01());
        }
        const double c = 0.2 + rng.uniform01();
        const auto loose = identify(w_a, ws, n, c, 1.0);
        const auto tight = identify(w_a, ws, n, 2.0 * c, 1.0);
        REQUIRE(std::includes(loose.identified.begin(), loose.identified.end(),
                              tight.identified.begin(), tight.identified.end()));

        const auto r1 = loose.identified_restricted();
        auto loose2 = loose;
        loose2.t_n = 10.0;
        const auto r2 = loose2.identified_restricted();
        REQUIRE(std::includes(r1.begin(), r1.end(), r2.begin(), r2.end()));
    }
}

TEST_CASE("detection is monotone in W and antitone in f (randomized)") {
    SplitMix64 rng(277);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 10 + rng() % 100000;
        const double w = 40.0 * rng.uniform01();
        const double bump = 0.1 + 5.0 * rng.uniform01();
        const auto base = detect(w, n, FMode::log_n);
        if (base.reject_h0) {
            REQUIRE(detect(w + bump, n, FMode::log_n).reject_h0);
            REQUIRE(!detect(std::max(w - bump, 0.0), n, FMode::custom,
                            base.threshold + bump + w)
                         .reject_h0);
        } else {
            REQUIRE(!detect(std::max(w - bump, 0.0), n, FMode::log_n).reject_h0);
        }
    }
}

TEST_CASE("save/load round trip on random graphs (randomized)") {
    SplitMix64 rng(377);
    const auto path = std::filesystem::temp_directory_path() / "geodetect_prop_roundtrip.txt";
    for (int trial = 0; trial < 40; ++trial) {
        const ModelParams p = random_params(rng, trial % 3 == 0);
        const Graph g =
            p.k == 0 ? sample_h0_model(p).graph : sample_h1_model(p).graph;
        save_edge_list(g, path, p.canonical_string());
        REQUIRE(load_edge_list(path) == g);
    }
    std::filesystem::remove(path);
}

TEST_CASE("weights files round trip including ground truth") {
    ModelParams p;
    p.n = 300;
    p.k = 40;
    p.seed = 123;
    const H1Sample s = sample_h1_model(p);
    const auto dir = std::filesystem::temp_directory_path() / "geodetect_gt_roundtrip";
    std::filesystem::create_directories(dir);
    save_weights_file(s.weights, dir / "gt.tsv", p.canonical_string(), &s.truth, true);
    const auto loaded = load_weights_file(dir / "gt.tsv", p.tau, p.w0);
    REQUIRE(loaded.weights.values == s.weights.values);
    REQUIRE(loaded.types.has_value());
    REQUIRE(loaded.truth.has_value());
    CHECK(loaded.truth->community_size == 40);
    CHECK(loaded.truth->positions == s.truth.positions);
    CHECK(loaded.header_params == p.canonical_string());
    std::filesystem::remove_all(dir);
}

TEST_CASE("regeneration determinism across params (randomized)") {
    SplitMix64 rng(477);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelParams p = random_params(rng, trial % 2 == 0);
        if (p.k == 0) {
            REQUIRE(sample_h0_model(p).graph == sample_h0_model(p).graph);
        } else {
            const auto a = sample_h1_model(p);
            const auto b = sample_h1_model(p);
            REQUIRE(a.graph == b.graph);
            REQUIRE(a.truth.positions == b.truth.positions);
        }
    }
}

TEST_CASE("generated files are byte-identical across runs") {
    ModelParams p;
    p.n = 1000;
    p.k = 80;
    p.seed = 31415;
    const auto dir1 = std::filesystem::temp_directory_path() / "geodetect_gen1";
    const auto dir2 = std::filesystem::temp_directory_path() / "geodetect_gen2";
    const auto f1 = write_generated_files(p, dir1);
    const auto f2 = write_generated_files(p, dir2);
    auto slurp = [](const std::filesystem::path& f) {
        std::ifstream in(f, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    REQUIRE(slurp(f1.edges) == slurp(f2.edges));
    REQUIRE(slurp(f1.weights) == slurp(f2.weights));
    REQUIRE(slurp(f1.ground_truth) == slurp(f2.ground_truth));
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("k estimator is strictly increasing in the order statistic (randomized)") {
    SplitMix64 rng(577);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = 1.0 + 100.0 * rng.uniform01();
        const double bump = 0.01 + rng.uniform01();
        const std::size_t m = 1 + rng() % 5;
        std::vector<double> lo(m, x), hi(m, x + bump);
        const double tau = 2.1 + 0.8 * rng.uniform01();
        CHECK(estimate_k(hi, tau, m).estimates[m - 1] >
              estimate_k(lo, tau, m).estimates[m - 1]);
    }
}
