#include "geodetect/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "geodetect/format.hpp"

namespace geodetect {

std::string to_string(FMode mode) {
    switch (mode) {
        case FMode::log_n: return "log_n";
        case FMode::sqrt_n: return "sqrt_n";
        case FMode::custom: return "custom";
    }
    return "?";
}

DetectionReport detect(double w_value, std::size_t n, FMode mode, double custom_threshold) {
    if (!(w_value >= 0.0)) {
        throw std::invalid_argument("detect: W must be non-negative");
    }
    if (n == 0) {
        throw std::invalid_argument("detect: n must be positive");
    }
    DetectionReport report;
    report.w_value = w_value;
    report.f_mode = mode;
    switch (mode) {
        case FMode::log_n:
            report.threshold = std::log(static_cast<double>(n));
            break;
        case FMode::sqrt_n:
            report.threshold = std::sqrt(static_cast<double>(n));
            break;
        case FMode::custom:
            if (!(custom_threshold > 0.0)) {
                throw std::invalid_argument("detect: custom threshold must be positive");
            }
            report.threshold = custom_threshold;
            break;
    }
    report.reject_h0 = w_value >= report.threshold;
    return report;
}

std::vector<VertexId> IdentificationReport::identified_restricted() const {
    std::vector<VertexId> out;
    for (VertexId v : identified) {
        if (per_vertex[v].weight >= t_n) out.push_back(v);
    }
    return out;
}

IdentificationReport identify(std::span<const double> w_a, const WeightSequence& ws,
                              std::size_t n, double threshold_constant, double t_n) {
    if (n < 3) {
        throw std::invalid_argument("identify: n must be at least 3");
    }
    if (!(threshold_constant > 0.0)) {
        throw std::invalid_argument("identify: threshold constant must be positive");
    }
    if (!(t_n >= ws.w0)) {
        throw std::invalid_argument("identify: t_n must be at least w0");
    }
    if (w_a.size() != ws.size()) {
        throw std::invalid_argument("identify: W(a) map and weights must have equal length");
    }

    IdentificationReport report;
    report.threshold_constant = threshold_constant;
    report.t_n = t_n;
    report.n = n;
    report.per_vertex.resize(w_a.size());
    const double sqrt_log_n = std::sqrt(std::log(static_cast<double>(n)));
    for (std::size_t v = 0; v < w_a.size(); ++v) {
        auto& row = report.per_vertex[v];
        row.vertex = static_cast<VertexId>(v);
        row.weight = ws.values[v];
        row.w_a = w_a[v];
        const double threshold =
            threshold_constant * static_cast<double>(n) / (row.weight * sqrt_log_n);
        row.flagged = row.w_a > threshold;  // ties are not identified
        if (row.flagged) report.identified.push_back(row.vertex);
    }
    return report;
}

TnChoice default_t_n(std::size_t n, std::optional<std::size_t> k, double tau) {
    if (n < 3) {
        throw std::invalid_argument("default_t_n: n must be at least 3");
    }
    validate_tail_params(tau, 1.0);
    const double dn = static_cast<double>(n);
    const double n_log_n = dn * std::log(dn);
    TnChoice choice;
    if (k && *k > 0) {
        choice.k_known = true;
        choice.lower = std::pow(n_log_n / static_cast<double>(*k), 1.0 / tau);
        choice.upper = std::pow(static_cast<double>(*k), 1.0 / (tau - 1.0));
        if (!(choice.lower < choice.upper)) {
            std::ostringstream msg;
            msg << "default_t_n: empty feasible window, lower bound " << format_double(choice.lower)
                << " >= upper bound " << format_double(choice.upper);
            throw std::domain_error(msg.str());
        }
        choice.value = std::sqrt(choice.lower * choice.upper);
    } else {
        choice.k_known = false;
        choice.lower = std::pow(n_log_n, 1.0 / tau);
        choice.upper = std::numeric_limits<double>::infinity();
        choice.value = 2.0 * choice.lower;
    }
    return choice;
}

SizeEstimateReport estimate_k(std::vector<double> identified_weights, double tau, std::size_t m) {
    if (!(tau > 2.0 && tau < 3.0)) {
        throw std::invalid_argument("estimate_k: tau must lie in (2,3)");
    }
    if (m == 0) {
        throw std::invalid_argument("estimate_k: m must be at least 1");
    }
    std::sort(identified_weights.begin(), identified_weights.end(), std::greater<>());
    SizeEstimateReport report;
    report.m_requested = m;
    report.m_used = std::min(m, identified_weights.size());
    report.truncated = report.m_used < m;
    report.order_stats.assign(identified_weights.begin(),
                              identified_weights.begin() + report.m_used);
    report.estimates.resize(report.m_used);
    for (std::size_t i = 0; i < report.m_used; ++i) {
        report.estimates[i] =
            static_cast<double>(i + 1) * std::pow(report.order_stats[i], tau - 1.0);
    }
    return report;
}

std::optional<double> identification_risk(std::span<const VertexId> identified,
                                          std::span<const VertexId> ground_truth,
                                          std::span<const double> weights, double t_n) {
    std::set<VertexId> est;
    for (VertexId v : identified) {
        if (weights[v] >= t_n) est.insert(v);
    }
    std::set<VertexId> truth;
    for (VertexId v : ground_truth) {
        if (weights[v] >= t_n) truth.insert(v);
    }
    if (truth.empty()) {
        if (est.empty()) return 0.0;
        return std::nullopt;  // risk conditions on a nonempty restricted community
    }
    std::size_t sym_diff = 0;
    for (VertexId v : est) {
        if (!truth.contains(v)) ++sym_diff;
    }
    for (VertexId v : truth) {
        if (!est.contains(v)) ++sym_diff;
    }
    return static_cast<double>(sym_diff) / (2.0 * static_cast<double>(truth.size()));
}

double calibrate_threshold_constant(std::span<const double> w_a, const WeightSequence& ws,
                                    std::size_t n, std::size_t community_size, double t_n) {
    if (n < 3) {
        throw std::invalid_argument("calibrate: n must be at least 3");
    }
    const double sqrt_log_n = std::sqrt(std::log(static_cast<double>(n)));
    // A vertex is flagged at constant C iff ratio_a > C; sweeping C over the
    // observed ratios explores every distinct identified set.
    struct Entry {
        double ratio;
        bool community;
    };
    std::vector<Entry> entries;
    std::size_t truth_restricted = 0;
    for (std::size_t v = 0; v < w_a.size(); ++v) {
        if (ws.values[v] < t_n) continue;
        const bool comm = v < community_size;
        truth_restricted += comm ? 1 : 0;
        entries.push_back(Entry{w_a[v] * ws.values[v] * sqrt_log_n / static_cast<double>(n), comm});
    }
    if (truth_restricted == 0) {
        throw std::invalid_argument("calibrate: no community vertices above t_n");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.ratio > b.ratio; });

    // Walking down the sorted ratios adds one vertex at a time to the
    // identified set; track the symmetric difference incrementally.
    double best_risk = static_cast<double>(truth_restricted);  // empty estimate: all missed
    std::size_t best_prefix = 0;
    double sym_diff = static_cast<double>(truth_restricted);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        sym_diff += entries[i].community ? -1.0 : 1.0;
        if (entries[i].ratio <= 0.0) break;  // vertices with W(a)=0 can never be flagged
        const bool tie_with_next = i + 1 < entries.size() &&
                                   entries[i + 1].ratio == entries[i].ratio;
        if (tie_with_next) continue;  // cannot cut between equal ratios
        if (sym_diff < best_risk) {
            best_risk = sym_diff;
            best_prefix = i + 1;
        }
    }
    if (best_prefix == 0) {
        // Flagging nothing is optimal: any constant above the largest ratio.
        return entries.empty() || entries.front().ratio <= 0.0 ? 1.0
                                                               : 2.0 * entries.front().ratio;
    }
    const double hi = entries[best_prefix - 1].ratio;
    if (best_prefix >= entries.size()) {
        return hi > 0.0 ? hi / 2.0 : 1.0;  // flag every positive ratio
    }
    // Cut between the last included and first excluded ratio.
    const double lo = std::max(entries[best_prefix].ratio, 0.0);
    if (lo > 0.0) return std::sqrt(hi * lo);
    return hi / 2.0;
}

}  // namespace geodetect
