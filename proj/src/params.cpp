#include "geodetect/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "geodetect/format.hpp"

namespace geodetect {

double ModelParams::mu() const { return moments(tau, w0).mu; }

double ModelParams::c1() const {
    const double pow2d = std::ldexp(1.0, static_cast<int>(d));  // 2^d
    if (threshold_rule()) return pow2d;
    return (1.0 + 1.0 / (gamma - 1.0)) * pow2d;
}

void ModelParams::validate() const {
    validate_tail_params(tau, w0);
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (k > n) throw std::invalid_argument("community size k must not exceed n");
    if (d == 0) throw std::invalid_argument("torus dimension d must be at least 1");
    if (!(gamma > 1.0)) {
        throw std::invalid_argument("gamma must lie in (1, infinity], got " +
                                    std::to_string(gamma));
    }
}

std::string ModelParams::canonical_string() const {
    std::ostringstream out;
    out << "model=" << (k == 0 ? "h0" : "h1")
        << " n=" << n
        << " k=" << k
        << " tau=" << format_double(tau)
        << " w0=" << format_double(w0)
        << " d=" << d
        << " gamma=" << format_double(gamma)
        << " seed=" << seed
        << " weights=" << (weight_mode == WeightMode::deterministic_quantile ? "det" : "iid")
        << " sparse=" << (sparse_mode ? 1 : 0)
        << " correction=" << (correction ? 1 : 0);
    return out.str();
}

}  // namespace geodetect
