#include "geodetect/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "geodetect/format.hpp"

namespace geodetect {

namespace {

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path,
                    std::size_t line_no) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        fail_line(path, line_no, "cannot parse number '" + s + "'");
    }
    return v;
}

}  // namespace

WeightsFile load_weights_file(const std::filesystem::path& path, double tau, double w0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weights file " + path.string());

    WeightsFile out;
    out.weights.tau = tau;
    out.weights.w0 = w0;
    out.weights.c_const = std::pow(w0, tau - 1.0);

    std::vector<char> types;
    std::vector<std::vector<double>> positions;
    bool any_type = false;
    bool any_position = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("params: ");
            if (pos != std::string::npos) out.header_params = line.substr(pos + 8);
            continue;
        }
        const auto fields = split_tabs(line);
        if (fields.size() < 2) fail_line(path, line_no, "expected `id<TAB>weight`");
        std::size_t id = 0;
        {
            const auto& s = fields[0];
            const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
            if (ec != std::errc{} || p != s.data() + s.size()) {
                fail_line(path, line_no, "cannot parse vertex id '" + s + "'");
            }
        }
        if (id != out.weights.values.size()) {
            fail_line(path, line_no, "vertex ids must be dense and ascending from 0, got " +
                                         std::to_string(id));
        }
        const double w = parse_double(fields[1], path, line_no);
        if (!(w > 0.0)) fail_line(path, line_no, "weight must be positive");
        out.weights.values.push_back(w);

        char type = 0;
        if (fields.size() >= 3 && !fields[2].empty()) {
            if (fields[2] != "A" && fields[2] != "B") {
                fail_line(path, line_no, "type column must be A or B, got '" + fields[2] + "'");
            }
            type = fields[2][0];
            any_type = true;
        }
        types.push_back(type);

        std::vector<double> coords;
        for (std::size_t f = 3; f < fields.size(); ++f) {
            if (fields[f].empty()) continue;
            coords.push_back(parse_double(fields[f], path, line_no));
            any_position = true;
        }
        positions.push_back(std::move(coords));
    }
    if (out.weights.values.empty()) {
        throw std::runtime_error(path.string() + ": no weight rows found");
    }

    if (any_type) out.types = types;
    if (any_position) {
        GroundTruth truth;
        std::size_t k = 0;
        unsigned dim = 0;
        for (std::size_t v = 0; v < positions.size(); ++v) {
            if (types[v] == 'B') {
                if (v != k) fail_line(path, v + 1, "type-B rows must be the leading ids");
                if (positions[v].empty()) fail_line(path, v + 1, "type-B row lacks position");
                if (dim == 0) {
                    dim = static_cast<unsigned>(positions[v].size());
                } else if (positions[v].size() != dim) {
                    fail_line(path, v + 1, "inconsistent position dimension");
                }
                ++k;
            }
        }
        truth.community_size = k;
        truth.dim = dim;
        truth.positions.reserve(k * dim);
        for (std::size_t v = 0; v < k; ++v) {
            truth.positions.insert(truth.positions.end(), positions[v].begin(),
                                   positions[v].end());
        }
        out.truth = std::move(truth);
    }
    return out;
}

void save_weights_file(const WeightSequence& ws, const std::filesystem::path& path,
                       const std::string& params_string, const GroundTruth* truth,
                       bool with_positions) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# geodetect v1";
    if (!params_string.empty()) out << " params: " << params_string;
    out << '\n';
    for (std::size_t v = 0; v < ws.size(); ++v) {
        out << v << '\t' << format_double(ws.values[v]);
        if (truth != nullptr) {
            const bool comm = truth->is_community(static_cast<VertexId>(v));
            out << '\t' << (comm ? 'B' : 'A');
            if (with_positions && comm) {
                for (double c : truth->position(v)) out << '\t' << format_double(c);
            }
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

GeneratedFiles write_generated_files(const ModelParams& params,
                                     const std::filesystem::path& out_dir) {
    params.validate();
    std::filesystem::create_directories(out_dir);
    const std::string header = params.canonical_string();

    GeneratedFiles files;
    files.edges = out_dir / "edges.txt";
    files.weights = out_dir / "weights.tsv";

    if (params.k == 0) {
        H0Sample sample = sample_h0_model(params);
        save_edge_list(sample.graph, files.edges, header);
        save_weights_file(sample.weights, files.weights, header);
    } else {
        H1Sample sample = sample_h1_model(params);
        save_edge_list(sample.graph, files.edges, header);
        save_weights_file(sample.weights, files.weights, header, &sample.truth,
                          /*with_positions=*/false);
        files.ground_truth = out_dir / "ground_truth.tsv";
        save_weights_file(sample.weights, files.ground_truth, header, &sample.truth,
                          /*with_positions=*/true);
    }
    return files;
}

}  // namespace geodetect
