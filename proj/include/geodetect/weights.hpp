#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace geodetect {

enum class WeightMode {
    deterministic_quantile,  // w_i = w0 (n/i)^{1/(tau-1)}, rank i = 1..n
    iid_pareto,              // i.i.d. with tail P(X > x) = (w0/x)^{tau-1}
};

/// Power-law weight sequence with its tail parameters. values[v] is the
/// weight of vertex v. tau in (2,3), minimum weight w0 > 0, tail constant
/// c_const = w0^{tau-1} (the unique choice making the Pareto law proper).
struct WeightSequence {
    std::vector<double> values;
    double tau = 0.0;
    double w0 = 0.0;
    double c_const = 0.0;

    std::size_t size() const { return values.size(); }
};

struct MomentConstants {
    double mu = 0.0;  // mean weight
    double nu = 0.0;  // mean inverse weight
};

/// Validates (tau, w0); throws std::invalid_argument outside tau in (2,3),
/// w0 > 0.
void validate_tail_params(double tau, double w0);

/// Generates a weight sequence of the given length. Deterministic per
/// (seed, mode); iid draws use one counter-based stream per index, so the
/// result is independent of evaluation order.
WeightSequence generate_weights(std::size_t count, double tau, double w0, WeightMode mode,
                                std::uint64_t seed);

/// Analytic moment constants for the Pareto law with C = w0^{tau-1}:
/// mu = w0 (tau-1)/(tau-2), nu = (tau-1)/(tau w0).
MomentConstants moments(double tau, double w0);

/// Plain averages of w_i and 1/w_i over the sequence.
MomentConstants empirical_moments(const WeightSequence& ws);

}  // namespace geodetect
