#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "geodetect/weights.hpp"

namespace geodetect {

/// Full model parameter record; the single source of truth for mu and C1.
/// k = 0 means the null model (no community). gamma = infinity selects the
/// threshold connection rule.
struct ModelParams {
    std::size_t n = 0;
    std::size_t k = 0;
    double tau = 2.5;
    double w0 = 1.0;
    unsigned d = 2;
    double gamma = 5.0;
    std::uint64_t seed = 0;
    bool sparse_mode = false;   // community rule scaled by n instead of k
    bool correction = true;     // 1/(1+C1) factor; disable only as oracle negative control
    WeightMode weight_mode = WeightMode::iid_pareto;

    static constexpr double gamma_infinity() { return std::numeric_limits<double>::infinity(); }

    bool threshold_rule() const { return std::isinf(gamma); }

    /// mu = w0 (tau-1)/(tau-2).
    double mu() const;

    /// C1 = (1 + (gamma-1)^{-1}) 2^d; at gamma = infinity this is 2^d.
    double c1() const;

    /// Throws std::invalid_argument on any violated invariant
    /// (tau outside (2,3), w0 <= 0, k > n, gamma <= 1, d = 0, n = 0).
    void validate() const;

    /// Canonical parameter string embedded in every emitted file header.
    /// Equal parameter records always produce equal strings.
    std::string canonical_string() const;
};

}  // namespace geodetect
