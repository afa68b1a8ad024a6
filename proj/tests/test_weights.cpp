#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "geodetect/rng.hpp"
#include "geodetect/weights.hpp"

using namespace geodetect;

TEST_CASE("deterministic quantile sequence follows w0 (n/i)^{1/(tau-1)}") {
    const auto ws = generate_weights(4, 2.5, 1.0, WeightMode::deterministic_quantile, 0);
    CHECK(ws.values[0] == doctest::Approx(std::pow(4.0, 2.0 / 3.0)).epsilon(1e-12));
    CHECK(ws.values[3] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < ws.size(); ++i) {
        CHECK(ws.values[i] <= ws.values[i - 1]);  // non-increasing by rank
    }
    CHECK(ws.c_const == doctest::Approx(1.0));
}

TEST_CASE("singleton deterministic sequence is [w0]") {
    const auto ws = generate_weights(1, 2.7, 2.0, WeightMode::deterministic_quantile, 0);
    REQUIRE(ws.size() == 1);
    CHECK(ws.values[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("iid pareto tail fraction matches the law") {
    const std::size_t n = 100000;
    const auto ws = generate_weights(n, 2.5, 1.0, WeightMode::iid_pareto, 7);
    std::size_t above = 0;
    for (double w : ws.values) {
        REQUIRE(w >= 1.0);
        if (w > 10.0) ++above;
    }
    const double p = std::pow(10.0, -1.5);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    const double frac = static_cast<double>(above) / static_cast<double>(n);
    CHECK(std::abs(frac - p) <= 3.0 * se);
}

TEST_CASE("iid draws are reproducible and index-addressed") {
    const auto a = generate_weights(5000, 2.5, 1.0, WeightMode::iid_pareto, 42);
    const auto b = generate_weights(5000, 2.5, 1.0, WeightMode::iid_pareto, 42);
    CHECK(a.values == b.values);
    // per-index substreams: a longer sequence shares its prefix
    const auto c = generate_weights(6000, 2.5, 1.0, WeightMode::iid_pareto, 42);
    for (std::size_t i = 0; i < 5000; ++i) REQUIRE(c.values[i] == a.values[i]);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate_weights(10, 2.0, 1.0, WeightMode::iid_pareto, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_weights(10, 3.0, 1.0, WeightMode::iid_pareto, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_weights(10, 2.5, 0.0, WeightMode::iid_pareto, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_weights(10, 2.5, -1.0, WeightMode::iid_pareto, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_weights(0, 2.5, 1.0, WeightMode::iid_pareto, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(moments(3.5, 1.0), std::invalid_argument);
}

TEST_CASE("analytic moments") {
    const auto m1 = moments(2.5, 1.0);
    CHECK(m1.mu == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m1.nu == doctest::Approx(0.6).epsilon(1e-12));
    const auto m2 = moments(2.5, 2.0);
    CHECK(m2.mu == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(m2.nu == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("empirical moments") {
    WeightSequence ws;
    ws.tau = 2.5;
    ws.w0 = 1.0;
    ws.values = {1.0, 2.0, 4.0};
    const auto m = empirical_moments(ws);
    CHECK(m.mu == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK(m.nu == doctest::Approx((1.0 + 0.5 + 0.25) / 3.0).epsilon(1e-12));

    ws.values = {5.0};
    const auto s = empirical_moments(ws);
    CHECK(s.mu == doctest::Approx(5.0));
    CHECK(s.nu == doctest::Approx(0.2));

    ws.values.clear();
    CHECK_THROWS_AS(empirical_moments(ws), std::invalid_argument);
}

TEST_CASE("empirical mu of the quantile sequence converges to the analytic value") {
    double prev_err = 1e9;
    for (std::size_t n : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
        const auto ws = generate_weights(n, 2.5, 1.0, WeightMode::deterministic_quantile, 0);
        const double mu = empirical_moments(ws).mu;
        const double err = std::abs(mu - 3.0) / 3.0;
        if (n == 10000) CHECK(err < 0.05);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("finite-n tail bound on the quantile sequence") {
    const std::size_t n = 100000;
    const double tau = 2.5, w0 = 1.0;
    const auto ws = generate_weights(n, tau, w0, WeightMode::deterministic_quantile, 0);
    const double c = std::pow(w0, tau - 1.0);
    const double x_max = std::pow(static_cast<double>(n), 1.0 / (tau - 1.0)) /
                         std::log(static_cast<double>(n));
    // geometric grid over the admissible range [2 w0, n^{1/(tau-1)}/log n]
    for (int i = 0; i <= 200; ++i) {
        const double x =
            2.0 * w0 * std::pow(x_max / (2.0 * w0), static_cast<double>(i) / 200.0);
        std::size_t above = 0;
        for (double w : ws.values) {
            if (w > x) ++above;
        }
        const double tail = static_cast<double>(above) / static_cast<double>(n);
        const double ratio = tail * std::pow(x, tau - 1.0) / c;
        REQUIRE(std::abs(ratio - 1.0) <= 0.05);
    }
}
