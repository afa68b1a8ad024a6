#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geodetect/inference.hpp"
#include "geodetect/params.hpp"

namespace geodetect {

enum class ExperimentScale { desk, paper };

struct ExperimentConfig {
    ExperimentScale scale = ExperimentScale::desk;
    std::size_t replicas = 0;     // 0 = preset default
    std::uint64_t seed = 1;
    unsigned jobs = 0;
    std::size_t m_estimators = 20;
    double t_n = 0.0;             // 0 = preset / default rule
    std::optional<double> threshold_constant;  // absent = calibrate
    std::filesystem::path out_dir;             // empty = no files written
};

/// W histograms under both hypotheses for k in {100,200,300}; detection risk
/// at f = log n per k.
struct Fig1Result {
    std::vector<std::size_t> ks;
    std::vector<double> h0_w;                          // one entry per replica
    std::map<std::size_t, std::vector<double>> h1_w;   // per k
    std::map<std::size_t, double> risk;                // per k, f = log n
    std::size_t failed_replicas = 0;
};

Fig1Result run_fig1(const ExperimentConfig& cfg);

/// One labeled alternative sample: (weight, W(a), truth) per vertex plus the
/// identification threshold curve.
struct Fig2Result {
    ModelParams params;
    std::vector<IdentificationRow> rows;   // flag from the final constant
    std::vector<bool> truth;               // type-B per vertex
    double threshold_constant = 1.0;
    double t_n = 0.0;
    double recall = 0.0;     // among vertices with weight >= t_n
    double precision = 0.0;  // among vertices with weight >= t_n
    std::optional<double> risk;
};

Fig2Result run_fig2(const ExperimentConfig& cfg);

/// Size estimators over replicas: k_hat_m per replica and their means.
struct Fig3Result {
    ModelParams params;
    std::size_t community_size = 0;
    double threshold_constant = 1.0;
    double t_n = 0.0;
    std::vector<std::vector<double>> estimates_per_replica;  // [replica][m-1]
    std::vector<double> mean_estimates;                      // [m-1]
    std::size_t failed_replicas = 0;
};

Fig3Result run_fig3(const ExperimentConfig& cfg);

/// Preset parameter records (seed not filled in).
ModelParams fig1_params(ExperimentScale scale, std::size_t k);
ModelParams fig2_params(ExperimentScale scale);
ModelParams fig3_params(ExperimentScale scale);

}  // namespace geodetect
