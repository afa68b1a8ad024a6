#include "geodetect/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "geodetect/numeric.hpp"
#include "geodetect/rng.hpp"

namespace geodetect {

void validate_tail_params(double tau, double w0) {
    if (!(tau > 2.0 && tau < 3.0)) {
        throw std::invalid_argument("tau must lie in (2,3), got " + std::to_string(tau));
    }
    if (!(w0 > 0.0)) {
        throw std::invalid_argument("w0 must be positive, got " + std::to_string(w0));
    }
}

WeightSequence generate_weights(std::size_t count, double tau, double w0, WeightMode mode,
                                std::uint64_t seed) {
    validate_tail_params(tau, w0);
    if (count == 0) {
        throw std::invalid_argument("weight sequence length must be at least 1");
    }

    WeightSequence ws;
    ws.tau = tau;
    ws.w0 = w0;
    ws.c_const = std::pow(w0, tau - 1.0);
    ws.values.resize(count);

    const double inv_exp = 1.0 / (tau - 1.0);
    if (mode == WeightMode::deterministic_quantile) {
        const double n = static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
            ws.values[i] = w0 * std::pow(n / static_cast<double>(i + 1), inv_exp);
        }
        // Rank n evaluates to w0 up to rounding; the invariant w_i >= w0 is hard.
        ws.values[count - 1] = std::max(ws.values[count - 1], w0);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const double u = substream(seed, RngDomain::weights, i).uniform01_open_low();
            ws.values[i] = w0 * std::pow(u, -inv_exp);
        }
    }
    return ws;
}

MomentConstants moments(double tau, double w0) {
    validate_tail_params(tau, w0);
    return MomentConstants{
        .mu = w0 * (tau - 1.0) / (tau - 2.0),
        .nu = (tau - 1.0) / (tau * w0),
    };
}

MomentConstants empirical_moments(const WeightSequence& ws) {
    if (ws.values.empty()) {
        throw std::invalid_argument("empirical_moments requires a nonempty sequence");
    }
    KahanSum sum;
    KahanSum inv_sum;
    for (double w : ws.values) {
        sum.add(w);
        inv_sum.add(1.0 / w);
    }
    const double n = static_cast<double>(ws.values.size());
    return MomentConstants{.mu = sum.value() / n, .nu = inv_sum.value() / n};
}

}  // namespace geodetect
