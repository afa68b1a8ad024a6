#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "geodetect/graph.hpp"
#include "geodetect/params.hpp"
#include "geodetect/torus.hpp"
#include "geodetect/weights.hpp"

namespace geodetect {

/// Community membership and positions for an alternative-model sample.
/// Community vertices occupy ids [0, community_size); positions are defined
/// exactly on the community. Immutable after creation.
struct GroundTruth {
    std::size_t community_size = 0;
    unsigned dim = 0;
    std::vector<double> positions;  // community_size * dim, row-major

    bool is_community(VertexId v) const { return v < community_size; }

    std::span<const double> position(std::size_t i) const {
        return {positions.data() + i * dim, dim};
    }
};

/// Which connection rule applies to a pair.
///   h0            plain inhomogeneous rule min(w_i w_j / (mu n), 1); also
///                 used for pairs of two non-community vertices under H1
///   h1_nongeo     mixed pair (one community endpoint): h0 value / (1+C1)
///   h1_geo        community pair: (1/(1+C1)) min(w_i w_j/(mu k dist^d), 1)^gamma
///   h1_sparse_geo community pair, discussion variant scaled by n, no 1/(1+C1)
struct PairContext {
    enum class Kind { h0, h1_nongeo, h1_geo, h1_sparse_geo };

    Kind kind = Kind::h0;
    double dist = 0.0;

    static PairContext h0() { return {Kind::h0, 0.0}; }
    static PairContext h1_nongeo() { return {Kind::h1_nongeo, 0.0}; }
    static PairContext h1_geo(double dist) { return {Kind::h1_geo, dist}; }
    static PairContext h1_sparse_geo(double dist) { return {Kind::h1_sparse_geo, dist}; }
};

/// Pair connection probability under the given context. gamma = infinity is
/// the threshold rule. Coincident positions (dist = 0) return the capped
/// value rather than faulting. params.correction = false drops the 1/(1+C1)
/// factor (oracle negative control).
double connection_prob(double w_i, double w_j, const PairContext& ctx, const ModelParams& params);

/// Samples the null model: every pair independent with the h0 probability.
/// Expected work proportional to the edge count (weight-sorted skip
/// sampling); the edge set depends only on (seed, params, weights).
Graph sample_h0(const WeightSequence& ws, const ModelParams& params);

/// Samples the alternative model. Community ids are [0, k): uniform torus
/// positions, geometric rule inside the community, h1_nongeo for mixed
/// pairs, plain h0 rule for pairs of two non-community vertices — the one
/// scoping under which every expected degree stays at w_i, so degree counts
/// carry no signal. ws_community must have length k >= 1, ws_rest length n-k.
std::pair<Graph, GroundTruth> sample_h1(const WeightSequence& ws_community,
                                        const WeightSequence& ws_rest,
                                        const ModelParams& params);

struct H0Sample {
    Graph graph;
    WeightSequence weights;
};

struct H1Sample {
    Graph graph;
    GroundTruth truth;
    WeightSequence weights;  // community weights first, then the rest
};

/// Generates weights from params and samples the respective model.
H0Sample sample_h0_model(const ModelParams& params);
H1Sample sample_h1_model(const ModelParams& params);

}  // namespace geodetect
