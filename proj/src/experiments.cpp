#include "geodetect/experiments.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "geodetect/format.hpp"
#include "geodetect/generators.hpp"
#include "geodetect/parallel.hpp"
#include "geodetect/rng.hpp"
#include "geodetect/triangles.hpp"

namespace geodetect {

namespace {

// Per-replica model seeds: seed xor replica index, matching the documented
// reproducibility contract for experiment runs.
std::uint64_t replica_seed(std::uint64_t seed, std::size_t replica) {
    return seed ^ static_cast<std::uint64_t>(replica);
}

std::ofstream open_csv(const std::filesystem::path& dir, const std::string& name,
                       const std::string& header_line, const std::string& params_string) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot open " + (dir / name).string());
    out << "# geodetect v1 params: " << params_string << '\n';
    out << header_line << '\n';
    return out;
}

}  // namespace

ModelParams fig1_params(ExperimentScale /*scale*/, std::size_t k) {
    // The detection figure runs at n = 10^4 at both scales; only the replica
    // count differs.
    ModelParams p;
    p.n = 10000;
    p.k = k;
    p.tau = 2.5;
    p.w0 = 1.0;
    p.d = 2;
    p.gamma = 5.0;
    return p;
}

ModelParams fig2_params(ExperimentScale scale) {
    ModelParams p;
    p.tau = 2.5;
    p.w0 = 1.0;
    p.d = 2;
    p.gamma = 5.0;
    if (scale == ExperimentScale::paper) {
        p.n = 1000000;
        p.k = 10000;
    } else {
        p.n = 100000;
        p.k = 5000;
    }
    return p;
}

ModelParams fig3_params(ExperimentScale scale) {
    ModelParams p = fig2_params(scale);
    if (scale == ExperimentScale::paper) p.d = 1;
    return p;
}

Fig1Result run_fig1(const ExperimentConfig& cfg) {
    const std::size_t replicas =
        cfg.replicas > 0 ? cfg.replicas : (cfg.scale == ExperimentScale::paper ? 10000 : 200);
    Fig1Result result;
    result.ks = {100, 200, 300};

    std::atomic<std::size_t> failures{0};

    result.h0_w.assign(replicas, 0.0);
    parallel_blocks(replicas, cfg.jobs, [&](std::size_t r) {
        ModelParams p = fig1_params(cfg.scale, 0);
        p.k = 0;
        p.seed = replica_seed(cfg.seed, r);
        try {
            const H0Sample sample = sample_h0_model(p);
            result.h0_w[r] = weighted_triangles(sample.graph, sample.weights);
        } catch (const std::exception&) {
            failures.fetch_add(1);
            result.h0_w[r] = -1.0;
        }
    });

    for (std::size_t k : result.ks) {
        auto& ws = result.h1_w[k];
        ws.assign(replicas, 0.0);
        parallel_blocks(replicas, cfg.jobs, [&](std::size_t r) {
            ModelParams p = fig1_params(cfg.scale, k);
            p.seed = replica_seed(derive_seed(cfg.seed, RngDomain::experiment, k), r);
            try {
                const H1Sample sample = sample_h1_model(p);
                ws[r] = weighted_triangles(sample.graph, sample.weights);
            } catch (const std::exception&) {
                failures.fetch_add(1);
                ws[r] = -1.0;
            }
        });
    }
    result.failed_replicas = failures.load();

    // Failed replicas (flagged -1) are excluded from the risk counts.
    const double f = std::log(static_cast<double>(fig1_params(cfg.scale, 0).n));
    std::size_t h0_valid = 0, h0_reject = 0;
    for (double w : result.h0_w) {
        if (w < 0.0) continue;
        ++h0_valid;
        if (w >= f) ++h0_reject;
    }
    for (std::size_t k : result.ks) {
        std::size_t h1_valid = 0, h1_keep = 0;
        for (double w : result.h1_w[k]) {
            if (w < 0.0) continue;
            ++h1_valid;
            if (w < f) ++h1_keep;
        }
        result.risk[k] = static_cast<double>(h0_reject) / static_cast<double>(h0_valid) +
                         static_cast<double>(h1_keep) / static_cast<double>(h1_valid);
    }

    if (!cfg.out_dir.empty()) {
        ModelParams p = fig1_params(cfg.scale, 0);
        p.seed = cfg.seed;
        auto csv = open_csv(cfg.out_dir, "fig1_w_values.csv", "hypothesis,k,replica,w",
                            p.canonical_string());
        for (std::size_t r = 0; r < replicas; ++r) {
            if (result.h0_w[r] >= 0.0) {
                csv << "H0,0," << r << ',' << format_double(result.h0_w[r]) << '\n';
            }
        }
        for (std::size_t k : result.ks) {
            for (std::size_t r = 0; r < replicas; ++r) {
                if (result.h1_w.at(k)[r] >= 0.0) {
                    csv << "H1," << k << ',' << r << ',' << format_double(result.h1_w.at(k)[r])
                        << '\n';
                }
            }
        }
        auto summary = open_csv(cfg.out_dir, "fig1_summary.csv", "k,f_log_n,risk",
                                p.canonical_string());
        for (std::size_t k : result.ks) {
            summary << k << ',' << format_double(f) << ',' << format_double(result.risk.at(k))
                    << '\n';
        }
    }
    return result;
}

namespace {

struct LabeledReplica {
    std::vector<double> w_a;
    WeightSequence weights;
    std::size_t community_size = 0;
};

LabeledReplica labeled_replica(const ModelParams& params, unsigned jobs) {
    LabeledReplica rep;
    H1Sample sample = sample_h1_model(params);
    rep.w_a = all_localized(sample.graph, sample.weights, jobs);
    rep.weights = std::move(sample.weights);
    rep.community_size = sample.truth.community_size;
    return rep;
}

double resolve_t_n(const ExperimentConfig& cfg, const ModelParams& params) {
    if (cfg.t_n > 0.0) return cfg.t_n;
    if (cfg.scale == ExperimentScale::desk) return 20.0;
    return default_t_n(params.n, params.k, params.tau).value;
}

}  // namespace

Fig2Result run_fig2(const ExperimentConfig& cfg) {
    Fig2Result result;
    result.params = fig2_params(cfg.scale);
    result.params.seed = cfg.seed;
    result.t_n = resolve_t_n(cfg, result.params);

    // Calibrate on a separate labeled replica unless a constant was given.
    if (cfg.threshold_constant) {
        result.threshold_constant = *cfg.threshold_constant;
    } else {
        ModelParams calib = result.params;
        calib.seed = derive_seed(cfg.seed, RngDomain::experiment, 0xCA11B);
        const LabeledReplica rep = labeled_replica(calib, cfg.jobs);
        result.threshold_constant =
            calibrate_threshold_constant(rep.w_a, rep.weights, calib.n, rep.community_size,
                                         result.t_n);
    }

    const LabeledReplica rep = labeled_replica(result.params, cfg.jobs);
    IdentificationReport id = identify(rep.w_a, rep.weights, result.params.n,
                                       result.threshold_constant, result.t_n);
    result.rows = std::move(id.per_vertex);
    result.truth.resize(result.params.n);
    for (std::size_t v = 0; v < result.params.n; ++v) {
        result.truth[v] = v < rep.community_size;
    }

    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& row : result.rows) {
        if (row.weight < result.t_n) continue;
        const bool truth = result.truth[row.vertex];
        if (row.flagged && truth) ++tp;
        if (row.flagged && !truth) ++fp;
        if (!row.flagged && truth) ++fn;
    }
    result.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    result.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;

    std::vector<VertexId> truth_ids;
    for (VertexId v = 0; v < rep.community_size; ++v) truth_ids.push_back(v);
    result.risk = identification_risk(id.identified, truth_ids, rep.weights.values, result.t_n);

    if (!cfg.out_dir.empty()) {
        auto csv = open_csv(cfg.out_dir, "fig2_vertices.csv", "vertex,weight,w_a,flag,truth",
                            result.params.canonical_string());
        for (const auto& row : result.rows) {
            csv << row.vertex << ',' << format_double(row.weight) << ','
                << format_double(row.w_a) << ',' << (row.flagged ? 1 : 0) << ','
                << (result.truth[row.vertex] ? 'B' : 'A') << '\n';
        }
        // Threshold curve y = C n / (x sqrt(log n)) on a log-spaced grid.
        auto curve = open_csv(cfg.out_dir, "fig2_curve.csv", "weight,threshold",
                              result.params.canonical_string());
        const double sqrt_log_n = std::sqrt(std::log(static_cast<double>(result.params.n)));
        const double w_max = std::pow(static_cast<double>(result.params.n),
                                      1.0 / (result.params.tau - 1.0));
        for (int i = 0; i <= 200; ++i) {
            const double x = result.params.w0 *
                             std::pow(w_max / result.params.w0, static_cast<double>(i) / 200.0);
            const double y = result.threshold_constant * static_cast<double>(result.params.n) /
                             (x * sqrt_log_n);
            curve << format_double(x) << ',' << format_double(y) << '\n';
        }
    }
    return result;
}

Fig3Result run_fig3(const ExperimentConfig& cfg) {
    const std::size_t replicas = cfg.replicas > 0 ? cfg.replicas : 15;
    Fig3Result result;
    result.params = fig3_params(cfg.scale);
    result.params.seed = cfg.seed;
    result.community_size = result.params.k;
    result.t_n = resolve_t_n(cfg, result.params);

    if (cfg.threshold_constant) {
        result.threshold_constant = *cfg.threshold_constant;
    } else {
        ModelParams calib = result.params;
        calib.seed = derive_seed(cfg.seed, RngDomain::experiment, 0xCA11B);
        const LabeledReplica rep = labeled_replica(calib, cfg.jobs);
        result.threshold_constant = calibrate_threshold_constant(
            rep.w_a, rep.weights, calib.n, rep.community_size, result.t_n);
    }

    const std::size_t m = cfg.m_estimators;
    result.estimates_per_replica.assign(replicas, {});
    std::atomic<std::size_t> failures{0};
    parallel_blocks(replicas, cfg.jobs, [&](std::size_t r) {
        ModelParams p = result.params;
        p.seed = replica_seed(cfg.seed, r);
        try {
            H1Sample sample = sample_h1_model(p);
            const std::vector<double> w_a = all_localized(sample.graph, sample.weights, 1);
            IdentificationReport id =
                identify(w_a, sample.weights, p.n, result.threshold_constant, result.t_n);
            std::vector<double> identified_weights;
            identified_weights.reserve(id.identified.size());
            for (VertexId v : id.identified) identified_weights.push_back(sample.weights.values[v]);
            const SizeEstimateReport est = estimate_k(std::move(identified_weights), p.tau, m);
            result.estimates_per_replica[r] = est.estimates;
        } catch (const std::exception&) {
            failures.fetch_add(1);
        }
    });
    result.failed_replicas = failures.load();

    result.mean_estimates.assign(m, 0.0);
    std::vector<std::size_t> counts(m, 0);
    for (const auto& reps : result.estimates_per_replica) {
        for (std::size_t i = 0; i < reps.size(); ++i) {
            result.mean_estimates[i] += reps[i];
            ++counts[i];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (counts[i] > 0) result.mean_estimates[i] /= static_cast<double>(counts[i]);
    }

    if (!cfg.out_dir.empty()) {
        auto csv = open_csv(cfg.out_dir, "fig3_estimates.csv", "replica,m,k_hat",
                            result.params.canonical_string());
        for (std::size_t r = 0; r < result.estimates_per_replica.size(); ++r) {
            const auto& reps = result.estimates_per_replica[r];
            for (std::size_t i = 0; i < reps.size(); ++i) {
                csv << r << ',' << (i + 1) << ',' << format_double(reps[i]) << '\n';
            }
        }
        auto means = open_csv(cfg.out_dir, "fig3_means.csv", "m,mean_k_hat,true_k",
                              result.params.canonical_string());
        for (std::size_t i = 0; i < m; ++i) {
            means << (i + 1) << ',' << format_double(result.mean_estimates[i]) << ','
                  << result.community_size << '\n';
        }
    }
    return result;
}

}  // namespace geodetect
