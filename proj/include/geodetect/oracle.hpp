#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geodetect/graph.hpp"
#include "geodetect/params.hpp"
#include "geodetect/weights.hpp"

namespace geodetect::oracle {

/// One numeric check: pass iff |z_score| <= z_threshold. For band and
/// regime checks z_score measures the distance beyond the allowed slack in
/// standard-error units.
struct OracleReport {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double stderr_ = 0.0;
    double z_score = 0.0;
    double z_threshold = 3.0;
    bool pass = false;
};

/// O(n^3) triple loop over sorted ids. Guard: n <= 2000.
std::vector<std::array<VertexId, 3>> naive_triangle_list(const Graph& g);
std::size_t naive_triangle_count(const Graph& g);

/// W(G) recomputed from scratch (triple loop + the canonical summation-order
/// contract), sharing no code with the fast path. Guard: n <= 2000.
double naive_weighted_triangles(const Graph& g, const WeightSequence& ws);

/// Exact E[W | H0] = sum over unordered triples of p_ab p_bc p_ca /
/// (w_a w_b w_c). Guard: n <= 400.
double exact_expected_w_h0(const WeightSequence& ws, double mu);

/// Closed-form marginal P(i <-> j) over uniform positions for a community
/// pair (any gamma, both regimes). Derived by integrating the connection
/// rule over the ball-volume variable.
double marginal_connection_prob_exact(double w_i, double w_j, const ModelParams& params);

/// Monte Carlo of the pair marginal over uniform positions vs. the regime
/// claim: the constant 1/(1+C1) when w_i w_j / k >= mu / 2^d; for the
/// threshold rule the exact ball-volume value in both regimes.
OracleReport check_marginal_prob(double w_i, double w_j, const ModelParams& params,
                                 std::size_t replicas, std::uint64_t oracle_seed);

/// Fits observed marginal vs w_i w_j / k over a subcritical grid; passes on
/// R^2 >= 0.99 (z_score = (1 - R^2) / 0.01, threshold 1).
OracleReport check_marginal_prob_linearity(const ModelParams& params, std::size_t replicas,
                                           std::uint64_t oracle_seed);

struct DegreeCheckConfig {
    ModelParams params;                 // k = 0 checks the null model
    std::vector<VertexId> probe_ids;    // weights get overridden at these ids
    std::vector<double> probe_weights;
    std::size_t replicas = 150;
    double slack_fraction = 0.10;       // the finite-n o(1) band
    // Negative-control semantics per probe: pass iff the mean leaves the
    // band upward. Empty means every probe must sit inside the band.
    std::vector<bool> expect_exceed;
    std::uint64_t oracle_seed = 1;
    unsigned jobs = 1;
};

/// Monte Carlo mean degree per probe vs its weight, z-tested at 3 sigma
/// around the +-slack band. One report per probe.
std::vector<OracleReport> check_expected_degrees(const DegreeCheckConfig& cfg);

struct OracleSuiteConfig {
    std::uint64_t seed = 1;
    unsigned jobs = 0;
    std::size_t degree_replicas = 120;
    std::size_t negative_control_replicas = 100;
    std::size_t marginal_replicas = 20000;
};

/// The full verification suite behind `oracle-check` and the acceptance
/// gate: pair-marginal regime checks plus expected-degree checks under H0,
/// H1 (both vertex types) and the no-correction negative control.
std::vector<OracleReport> run_oracle_suite(const OracleSuiteConfig& cfg);

}  // namespace geodetect::oracle
