#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geodetect/graph.hpp"
#include "geodetect/weights.hpp"

namespace geodetect {

enum class FMode { log_n, sqrt_n, custom };

/// Outcome of the weighted-triangle detection test: reject H0 iff
/// W(G) >= f(n).
struct DetectionReport {
    double w_value = 0.0;
    double threshold = 0.0;
    bool reject_h0 = false;
    FMode f_mode = FMode::log_n;
};

DetectionReport detect(double w_value, std::size_t n, FMode mode, double custom_threshold = 0.0);

struct IdentificationRow {
    VertexId vertex = 0;
    double weight = 0.0;
    double w_a = 0.0;
    bool flagged = false;
};

/// Per-vertex identification via T(a) = 1{W(a) > C n/(w_a sqrt(log n))}.
/// `identified` is the unrestricted flagged set; restricted views keep only
/// vertices with weight >= t_n.
struct IdentificationReport {
    std::vector<IdentificationRow> per_vertex;
    std::vector<VertexId> identified;
    double threshold_constant = 1.0;
    double t_n = 0.0;
    std::size_t n = 0;

    std::vector<VertexId> identified_restricted() const;
};

IdentificationReport identify(std::span<const double> w_a, const WeightSequence& ws,
                              std::size_t n, double threshold_constant, double t_n);

/// Weight-cutoff choice for the exact-recovery window
/// (n log n / k)^{1/tau} << t_n << k^{1/(tau-1)}. With k known the value is
/// the geometric mean of the two bounds; with k unknown, 2 (n log n)^{1/tau}.
struct TnChoice {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool k_known = false;
};

/// Throws std::domain_error naming both bounds when the window is empty.
TnChoice default_t_n(std::size_t n, std::optional<std::size_t> k, double tau);

/// Community-size estimates k_hat_m = m X_(m)^{tau-1} from the identified
/// weights sorted descending. Truncates with a warning flag when fewer than
/// m_requested weights are available.
struct SizeEstimateReport {
    std::vector<double> estimates;    // k_hat_1 .. k_hat_m_used
    std::vector<double> order_stats;  // X_(1) .. X_(m_used)
    std::size_t m_used = 0;
    std::size_t m_requested = 0;
    bool truncated = false;
};

SizeEstimateReport estimate_k(std::vector<double> identified_weights, double tau, std::size_t m);

/// Normalized symmetric-difference risk |V_hat ^ V_C| / (2 |V_C|) over the
/// weight-restricted sets. Returns 0 when both restricted sets are empty and
/// nullopt (not applicable) when only the ground-truth side is empty.
std::optional<double> identification_risk(std::span<const VertexId> identified,
                                          std::span<const VertexId> ground_truth,
                                          std::span<const double> weights, double t_n);

/// Fits the threshold constant on one labeled replica: picks the constant
/// minimizing the restricted symmetric-difference risk (largest constant on
/// ties). community_size gives the true members as ids [0, community_size).
double calibrate_threshold_constant(std::span<const double> w_a, const WeightSequence& ws,
                                    std::size_t n, std::size_t community_size, double t_n);

std::string to_string(FMode mode);

}  // namespace geodetect
