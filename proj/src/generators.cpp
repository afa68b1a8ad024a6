#include "geodetect/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "geodetect/rng.hpp"

namespace geodetect {

namespace {

// min(x,1)^gamma with the threshold rule at gamma = infinity and a fast
// path for small integral gamma (the experiment presets use gamma = 5).
double capped_pow(double x, double gamma) {
    if (x >= 1.0) return 1.0;
    if (std::isinf(gamma)) return 0.0;
    const double rounded = std::nearbyint(gamma);
    if (rounded == gamma && gamma <= 32.0) {
        double acc = 1.0;
        for (int i = 0; i < static_cast<int>(rounded); ++i) acc *= x;
        return acc;
    }
    return std::pow(x, gamma);
}

double geometric_pair_prob(double w_i, double w_j, double dist, double scale_count,
                           double prefactor, const ModelParams& params) {
    const double budget = w_i * w_j / (params.mu() * scale_count);
    if (dist <= 0.0) return prefactor;  // coincident positions: capped value
    const double powd = std::pow(dist, static_cast<double>(params.d));
    if (params.threshold_rule()) {
        return powd <= budget ? prefactor : 0.0;
    }
    return prefactor * capped_pow(budget / powd, params.gamma);
}

}  // namespace

double connection_prob(double w_i, double w_j, const PairContext& ctx,
                       const ModelParams& params) {
    params.validate();
    if (w_i < params.w0 || w_j < params.w0) {
        throw std::invalid_argument("connection_prob: weight below w0");
    }
    const double corr = params.correction ? 1.0 / (1.0 + params.c1()) : 1.0;
    switch (ctx.kind) {
        case PairContext::Kind::h0:
            return std::min(w_i * w_j / (params.mu() * static_cast<double>(params.n)), 1.0);
        case PairContext::Kind::h1_nongeo:
            return corr *
                   std::min(w_i * w_j / (params.mu() * static_cast<double>(params.n)), 1.0);
        case PairContext::Kind::h1_geo:
            if (params.k == 0) throw std::invalid_argument("h1_geo context requires k >= 1");
            return geometric_pair_prob(w_i, w_j, ctx.dist, static_cast<double>(params.k), corr,
                                       params);
        case PairContext::Kind::h1_sparse_geo:
            return geometric_pair_prob(w_i, w_j, ctx.dist, static_cast<double>(params.n), 1.0,
                                       params);
    }
    throw std::logic_error("unreachable pair context");
}

namespace {

// Weight-ordered skip sampling over candidate pairs (Miller & Hagberg).
// Walks targets in non-increasing weight order per source with geometric
// jumps under the envelope probability min(w_s w_t/(mu n), 1), then thins
// with pair_factor (1 keeps the envelope, 0 removes the pair entirely).
// Each source consumes its own counter-based stream, so the edge set does
// not depend on evaluation order.
void sample_pairs_skip(std::span<const double> weights_by_vertex, double mu_n,
                       std::uint64_t seed,
                       const std::function<double(VertexId, VertexId)>& pair_factor,
                       std::vector<Edge>& out) {
    const std::size_t n = weights_by_vertex.size();
    if (n < 2) return;

    std::vector<VertexId> ids(n);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    std::sort(ids.begin(), ids.end(), [&](VertexId a, VertexId b) {
        if (weights_by_vertex[a] != weights_by_vertex[b]) {
            return weights_by_vertex[a] > weights_by_vertex[b];
        }
        return a < b;
    });
    std::vector<double> w(n);
    for (std::size_t s = 0; s < n; ++s) w[s] = weights_by_vertex[ids[s]];

    for (std::size_t s = 0; s + 1 < n; ++s) {
        auto rng = substream(seed, RngDomain::edges_background, ids[s]);
        std::size_t t = s + 1;
        double p = std::min(w[s] * w[t] / mu_n, 1.0);
        while (t < n && p > 0.0) {
            if (p < 1.0) {
                const double r = rng.uniform01_open_low();
                const double skip = std::floor(std::log(r) / std::log1p(-p));
                if (!(skip < static_cast<double>(n - t))) break;
                t += static_cast<std::size_t>(skip);
            }
            const double q = std::min(w[s] * w[t] / mu_n, 1.0);
            const double accept = (q / p) * pair_factor(ids[s], ids[t]);
            if (rng.uniform01() < accept) out.emplace_back(ids[s], ids[t]);
            p = q;
            ++t;
        }
    }
}

}  // namespace

Graph sample_h0(const WeightSequence& ws, const ModelParams& params) {
    params.validate();
    if (ws.size() != params.n) {
        throw std::invalid_argument("sample_h0: weight sequence length must equal n");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(1.1 * params.mu() * static_cast<double>(params.n)));
    sample_pairs_skip(ws.values, params.mu() * static_cast<double>(params.n), params.seed,
                      [](VertexId, VertexId) { return 1.0; }, edges);
    return Graph::from_edge_list(params.n, edges);
}

std::pair<Graph, GroundTruth> sample_h1(const WeightSequence& ws_community,
                                        const WeightSequence& ws_rest,
                                        const ModelParams& params) {
    params.validate();
    const std::size_t k = params.k;
    if (k == 0) {
        throw std::invalid_argument("sample_h1 requires k >= 1; use sample_h0 for the null model");
    }
    if (ws_community.size() != k || ws_rest.size() != params.n - k) {
        throw std::invalid_argument("sample_h1: weight sequence lengths must be (k, n-k)");
    }

    GroundTruth truth;
    truth.community_size = k;
    truth.dim = params.d;
    truth.positions.resize(k * params.d);
    for (std::size_t i = 0; i < k; ++i) {
        auto rng = substream(params.seed, RngDomain::positions, i);
        for (unsigned c = 0; c < params.d; ++c) {
            truth.positions[i * params.d + c] = rng.uniform01();
        }
    }

    std::vector<double> all_weights(params.n);
    std::copy(ws_community.values.begin(), ws_community.values.end(), all_weights.begin());
    std::copy(ws_rest.values.begin(), ws_rest.values.end(), all_weights.begin() + k);

    const double corr = params.correction ? 1.0 / (1.0 + params.c1()) : 1.0;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(1.2 * params.mu() * static_cast<double>(params.n)));

    // Non-geometric part: plain rule between two non-community vertices,
    // corrected rule for mixed pairs, community pairs excluded here.
    sample_pairs_skip(all_weights, params.mu() * static_cast<double>(params.n), params.seed,
                      [&](VertexId a, VertexId b) -> double {
                          const bool ca = a < k;
                          const bool cb = b < k;
                          if (ca && cb) return 0.0;
                          return (ca || cb) ? corr : 1.0;
                      },
                      edges);

    // Geometric part over community pairs. Every pair probability carries
    // the constant prefactor, so pairs are thinned in two stages: geometric
    // skips find the pairs surviving a Bernoulli(prefactor) stage, then the
    // position-dependent factor decides acceptance. One stream per lower
    // vertex keeps the edge set independent of evaluation order.
    const double scale_count =
        params.sparse_mode ? static_cast<double>(params.n) : static_cast<double>(k);
    const double pair_prefactor = params.sparse_mode ? 1.0 : corr;
    const double log1m_prefactor = pair_prefactor < 1.0 ? std::log1p(-pair_prefactor) : 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        auto rng = substream(params.seed, RngDomain::edges_community, i);
        const auto pos_i = truth.position(i);
        std::size_t j = i + 1;
        while (j < k) {
            if (pair_prefactor < 1.0) {
                const double r = rng.uniform01_open_low();
                const double skip = std::floor(std::log(r) / log1m_prefactor);
                if (!(skip < static_cast<double>(k - j))) break;
                j += static_cast<std::size_t>(skip);
            }
            const double dist = torus_distance(pos_i, truth.position(j));
            const double p = geometric_pair_prob(all_weights[i], all_weights[j], dist,
                                                 scale_count, 1.0, params);
            if (rng.uniform01() < p) {
                edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
            }
            ++j;
        }
    }

    return {Graph::from_edge_list(params.n, edges), std::move(truth)};
}

H0Sample sample_h0_model(const ModelParams& params) {
    params.validate();
    if (params.k != 0) {
        throw std::invalid_argument("sample_h0_model: params.k must be 0 under the null model");
    }
    H0Sample out;
    out.weights = generate_weights(params.n, params.tau, params.w0, params.weight_mode, params.seed);
    out.graph = sample_h0(out.weights, params);
    return out;
}

H1Sample sample_h1_model(const ModelParams& params) {
    params.validate();
    if (params.k == 0) {
        throw std::invalid_argument("sample_h1_model requires k >= 1");
    }
    // Community and rest are generated as their own power-law sequences, so
    // both tail assumptions hold by construction.
    const std::uint64_t seed_comm = derive_seed(params.seed, RngDomain::weights, 0xC0DE);
    const std::uint64_t seed_rest = derive_seed(params.seed, RngDomain::weights, 0xBEEF);
    WeightSequence comm =
        generate_weights(params.k, params.tau, params.w0, params.weight_mode, seed_comm);
    WeightSequence rest;
    rest.tau = params.tau;
    rest.w0 = params.w0;
    rest.c_const = comm.c_const;
    if (params.n > params.k) {
        rest = generate_weights(params.n - params.k, params.tau, params.w0, params.weight_mode,
                                seed_rest);
    }

    H1Sample out;
    auto [graph, truth] = sample_h1(comm, rest, params);
    out.graph = std::move(graph);
    out.truth = std::move(truth);
    out.weights.tau = params.tau;
    out.weights.w0 = params.w0;
    out.weights.c_const = comm.c_const;
    out.weights.values.reserve(params.n);
    out.weights.values.insert(out.weights.values.end(), comm.values.begin(), comm.values.end());
    out.weights.values.insert(out.weights.values.end(), rest.values.begin(), rest.values.end());
    return out;
}

}  // namespace geodetect
