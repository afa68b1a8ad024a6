#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geodetect/generators.hpp"
#include "geodetect/graph.hpp"
#include "geodetect/params.hpp"
#include "geodetect/weights.hpp"

namespace geodetect {

/// Weights file row: `vertex_id<TAB>weight[<TAB>A|B]`. The type column is
/// present in ground-truth flavored files; position columns may follow for
/// community (type-B) rows.
struct WeightsFile {
    WeightSequence weights;
    std::optional<std::vector<char>> types;        // 'A' or 'B' per vertex
    std::optional<GroundTruth> truth;              // when positions present
    std::string header_params;
};

WeightsFile load_weights_file(const std::filesystem::path& path, double tau, double w0);

void save_weights_file(const WeightSequence& ws, const std::filesystem::path& path,
                       const std::string& params_string = {},
                       const GroundTruth* truth = nullptr, bool with_positions = false);

struct GeneratedFiles {
    std::filesystem::path edges;
    std::filesystem::path weights;
    std::filesystem::path ground_truth;  // empty under H0
};

/// Writes the generate-command bundle (edge list, weights, and under H1 the
/// ground-truth file with positions) into out_dir. Deterministic per params.
GeneratedFiles write_generated_files(const ModelParams& params,
                                     const std::filesystem::path& out_dir);

}  // namespace geodetect
