#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "geodetect/generators.hpp"
#include "geodetect/numeric.hpp"
#include "geodetect/oracle.hpp"
#include "geodetect/triangles.hpp"

using namespace geodetect;

namespace {

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId i = 0; i < n; ++i) {
        for (VertexId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return Graph::from_edge_list(n, edges);
}

WeightSequence const_weights(std::size_t n, double w) {
    WeightSequence ws;
    ws.tau = 2.5;
    ws.w0 = 1.0;
    ws.c_const = 1.0;
    ws.values.assign(n, w);
    return ws;
}

}  // namespace

TEST_CASE("naive counts") {
    CHECK(oracle::naive_triangle_count(complete_graph(4)) == 4);
    std::vector<Edge> c5{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
    CHECK(oracle::naive_triangle_count(Graph::from_edge_list(5, c5)) == 0);
}

TEST_CASE("guards reject oversized inputs") {
    const Graph g = Graph::from_edge_list(2500, {});
    CHECK_THROWS_AS(oracle::naive_triangle_count(g), std::invalid_argument);
    CHECK_THROWS_AS(oracle::exact_expected_w_h0(const_weights(500, 1.0), 3.0),
                    std::invalid_argument);
}

TEST_CASE("exact expected W under H0: single-triple and cap regimes") {
    // n=3 unit weights, mu=3: each pair probability 1/9
    const double v = oracle::exact_expected_w_h0(const_weights(3, 1.0), 3.0);
    CHECK(v == doctest::Approx(std::pow(1.0 / 9.0, 3.0)).epsilon(1e-12));

    // all probabilities capped at 1: mean = C(n,3) / w^3
    const double cap = oracle::exact_expected_w_h0(const_weights(5, 1000.0), 3.0);
    CHECK(cap == doctest::Approx(10.0 / 1e9).epsilon(1e-12));
}

TEST_CASE("Monte Carlo W mean under H0 matches the exact oracle at n=300") {
    const std::size_t n = 300, reps = 500;
    const auto ws = generate_weights(n, 2.5, 1.0, WeightMode::deterministic_quantile, 0);
    const double mu = moments(2.5, 1.0).mu;
    const double expected = oracle::exact_expected_w_h0(ws, mu);

    std::vector<double> values;
    for (std::size_t r = 0; r < reps; ++r) {
        ModelParams p;
        p.n = n;
        p.seed = 40000 + r;
        const Graph g = sample_h0(ws, p);
        values.push_back(weighted_triangles(g, ws));
    }
    const auto mv = mean_variance(values);
    CHECK(std::abs(mv.mean - expected) <= 3.0 * mv.stderr_of_mean());
}

TEST_CASE("marginal connection probability: closed forms vs Monte Carlo") {
    ModelParams p;
    p.n = 10000;
    p.k = 300;
    p.d = 2;
    p.gamma = 5.0;

    // supercritical: expected exactly 1/(1+C1)
    const auto super = oracle::check_marginal_prob(30.0, 30.0, p, 20000, 9);
    CHECK(super.pass);
    CHECK(super.expected == doctest::Approx(1.0 / 6.0));

    // subcritical finite gamma vs the integrated closed form
    const auto sub = oracle::check_marginal_prob(2.0, 2.0, p, 20000, 9);
    CHECK(sub.pass);

    // threshold rule: ball-volume closed form in both regimes
    ModelParams thr = p;
    thr.gamma = ModelParams::gamma_infinity();
    const auto thr_sub = oracle::check_marginal_prob(2.0, 3.0, thr, 20000, 9);
    CHECK(thr_sub.pass);
    CHECK(thr_sub.expected ==
          doctest::Approx((1.0 / 5.0) * 4.0 * 6.0 / (3.0 * 300.0)).epsilon(1e-12));
    const auto thr_super = oracle::check_marginal_prob(40.0, 40.0, thr, 20000, 9);
    CHECK(thr_super.pass);
    CHECK(thr_super.expected == doctest::Approx(0.2));
}

TEST_CASE("subcritical linearity in w_i w_j / k") {
    ModelParams p;
    p.n = 10000;
    p.k = 300;
    p.d = 2;
    p.gamma = 5.0;
    const auto rep = oracle::check_marginal_prob_linearity(p, 20000, 13);
    CHECK(rep.pass);
    CHECK(rep.observed >= 0.99);

    // doubling w_i w_j doubles the marginal within Monte Carlo error
    const auto a = oracle::check_marginal_prob(2.0, 2.0, p, 50000, 17);
    const auto b = oracle::check_marginal_prob(2.0, 4.0, p, 50000, 19);
    const double se = 2.0 * std::hypot(a.stderr_, b.stderr_);
    CHECK(std::abs(b.observed - 2.0 * a.observed) <= 3.0 * se);
}

TEST_CASE("replica floor is enforced") {
    ModelParams p;
    p.n = 1000;
    p.k = 100;
    CHECK_THROWS_AS(oracle::check_marginal_prob(2.0, 2.0, p, 100, 1), std::invalid_argument);
    oracle::DegreeCheckConfig cfg;
    cfg.params = p;
    cfg.replicas = 10;
    CHECK_THROWS_AS(oracle::check_expected_degrees(cfg), std::invalid_argument);
}

TEST_CASE("expected degrees at small scale, H0 and H1 with negative control") {
    oracle::DegreeCheckConfig cfg;
    cfg.params.n = 2000;
    cfg.params.k = 0;
    cfg.params.weight_mode = WeightMode::deterministic_quantile;
    cfg.params.seed = 4;
    cfg.probe_ids = {500, 501};
    cfg.probe_weights = {10.0, 30.0};
    cfg.replicas = 120;
    cfg.oracle_seed = 606;
    for (const auto& rep : oracle::check_expected_degrees(cfg)) {
        INFO(rep.name, " observed=", rep.observed, " z=", rep.z_score);
        CHECK(rep.pass);
    }

    oracle::DegreeCheckConfig h1;
    h1.params.n = 20000;
    h1.params.k = 2000;
    h1.params.d = 2;
    h1.params.gamma = 5.0;
    h1.params.weight_mode = WeightMode::deterministic_quantile;
    h1.params.seed = 5;
    h1.probe_ids = {500, 5000};  // one type-B, one type-A
    h1.probe_weights = {10.0, 10.0};
    h1.replicas = 120;
    h1.oracle_seed = 707;
    for (const auto& rep : oracle::check_expected_degrees(h1)) {
        INFO(rep.name, " observed=", rep.observed, " z=", rep.z_score);
        CHECK(rep.pass);
    }

    oracle::DegreeCheckConfig nc = h1;
    nc.params.correction = false;
    nc.expect_exceed = {true, false};
    nc.oracle_seed = 808;
    const auto reports = oracle::check_expected_degrees(nc);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].pass);                     // type-B exceeds the band
    CHECK(reports[0].observed > 1.5 * 10.0);    // far above, not a statistical accident
    CHECK(reports[1].pass);                     // type-A stays inside the band
}
