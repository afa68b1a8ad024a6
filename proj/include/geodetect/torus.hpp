#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "geodetect/rng.hpp"

namespace geodetect {

/// Point on the d-dimensional unit torus; every coordinate in [0,1).
struct TorusPoint {
    std::vector<double> coords;
};

/// Circular sup-distance: max_i min(|dx_i|, 1-|dx_i|). Always in [0, 1/2].
inline double torus_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("torus_distance: dimension mismatch");
    }
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = std::abs(x[i] - y[i]);
        const double circ = std::min(delta, 1.0 - delta);
        dist = std::max(dist, circ);
    }
    return dist;
}

inline double torus_distance(const TorusPoint& x, const TorusPoint& y) {
    return torus_distance(std::span<const double>(x.coords), std::span<const double>(y.coords));
}

/// Uniform position for one vertex, derived only from (seed, vertex id).
inline TorusPoint sample_torus_point(unsigned d, std::uint64_t seed, std::uint64_t vertex_id) {
    auto rng = substream(seed, RngDomain::positions, vertex_id);
    TorusPoint p;
    p.coords.resize(d);
    for (unsigned i = 0; i < d; ++i) p.coords[i] = rng.uniform01();
    return p;
}

}  // namespace geodetect
