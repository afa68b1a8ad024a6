// geodetect: sample scale-free graphs with or without a planted geometric
// community, compute weighted-triangle statistics, and run the detection,
// identification and size-estimation procedures.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodetect/experiments.hpp"
#include "geodetect/format.hpp"
#include "geodetect/generators.hpp"
#include "geodetect/inference.hpp"
#include "geodetect/io.hpp"
#include "geodetect/oracle.hpp"
#include "geodetect/triangles.hpp"

namespace gd = geodetect;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitOracle = 3;

struct GlobalOpts {
    std::uint64_t seed = 1;
    unsigned jobs = 0;
    std::string out;
};

double parse_gamma(const std::string& s) {
    if (s == "inf" || s == "infinity") return gd::ModelParams::gamma_infinity();
    return std::stod(s);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        out << j.dump(2) << '\n';
    }
}

struct LoadedInstance {
    gd::Graph graph;
    gd::WeightsFile weights_file;
};

LoadedInstance load_instance(const std::string& edges_path, const std::string& weights_path,
                             double tau, double w0) {
    LoadedInstance inst;
    inst.graph = gd::load_edge_list(edges_path);
    inst.weights_file = gd::load_weights_file(weights_path, tau, w0);
    if (inst.weights_file.weights.size() != inst.graph.num_vertices()) {
        throw std::runtime_error("weights cover " +
                                 std::to_string(inst.weights_file.weights.size()) +
                                 " vertices but the graph has " +
                                 std::to_string(inst.graph.num_vertices()));
    }
    return inst;
}

std::vector<gd::VertexId> truth_ids_from_types(const std::vector<char>& types) {
    std::vector<gd::VertexId> ids;
    for (std::size_t v = 0; v < types.size(); ++v) {
        if (types[v] == 'B') ids.push_back(static_cast<gd::VertexId>(v));
    }
    return ids;
}

json detection_to_json(const gd::DetectionReport& rep) {
    return json{{"w_value", rep.w_value},
                {"f_mode", gd::to_string(rep.f_mode)},
                {"threshold", rep.threshold},
                {"decision", rep.reject_h0 ? "reject_H0" : "keep_H0"}};
}

void write_identification_csv(const gd::IdentificationReport& rep,
                              const std::vector<char>* types, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "vertex,weight,W_a,flag" << (types ? ",truth" : "") << '\n';
    for (const auto& row : rep.per_vertex) {
        out << row.vertex << ',' << gd::format_double(row.weight) << ','
            << gd::format_double(row.w_a) << ',' << (row.flagged ? 1 : 0);
        if (types) out << ',' << (*types)[row.vertex];
        out << '\n';
    }
}

json identification_to_json(const gd::IdentificationReport& rep,
                            const std::optional<double>& risk) {
    json j{{"n", rep.n},
           {"threshold_constant", rep.threshold_constant},
           {"t_n", rep.t_n},
           {"identified_count", rep.identified.size()},
           {"identified_restricted_count", rep.identified_restricted().size()}};
    if (risk) {
        j["risk"] = *risk;
    }
    return j;
}

json size_estimate_to_json(const gd::SizeEstimateReport& rep) {
    json j{{"m_requested", rep.m_requested},
           {"m_used", rep.m_used},
           {"truncated", rep.truncated},
           {"order_stats", rep.order_stats},
           {"estimates", rep.estimates}};
    return j;
}

int run_oracle_check(const gd::oracle::OracleSuiteConfig& cfg, const std::string& out_path) {
    const auto reports = gd::oracle::run_oracle_suite(cfg);
    json checks = json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        checks.push_back(json{{"name", r.name},
                              {"observed", r.observed},
                              {"expected", r.expected},
                              {"stderr", r.stderr_},
                              {"z_score", r.z_score},
                              {"z_threshold", r.z_threshold},
                              {"pass", r.pass}});
        all_pass = all_pass && r.pass;
        std::fprintf(stderr, "[%s] %s observed=%.6g expected=%.6g z=%.2f\n",
                     r.pass ? "PASS" : "FAIL", r.name.c_str(), r.observed, r.expected,
                     r.z_score);
    }
    json out{{"all_pass", all_pass}, {"checks", checks}};
    emit(out, out_path.empty() ? "oracle_report.json" : out_path);
    return all_pass ? kExitOk : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-triangle detection of planted geometric communities"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "key=value config file; command-line flags win");

    GlobalOpts global;
    app.add_option("--seed", global.seed, "master seed")->capture_default_str();
    app.add_option("--jobs", global.jobs, "worker threads (0 = hardware)")->capture_default_str();
    app.add_option("--out", global.out, "output file or directory (subcommand dependent)");

    // generate
    auto* generate = app.add_subcommand("generate", "sample a model instance and write files");
    std::string gen_model = "h0";
    gd::ModelParams gen_params;
    std::string gen_gamma = "5";
    std::string gen_weights_mode = "iid";
    generate->add_option("--model", gen_model, "h0 | h1")->check(CLI::IsMember({"h0", "h1"}));
    generate->add_option("--n", gen_params.n, "vertex count")->required();
    generate->add_option("--k", gen_params.k, "community size (h1)");
    generate->add_option("--tau", gen_params.tau, "tail exponent in (2,3)")->capture_default_str();
    generate->add_option("--w0", gen_params.w0, "minimum weight")->capture_default_str();
    generate->add_option("--d", gen_params.d, "torus dimension")->capture_default_str();
    generate->add_option("--gamma", gen_gamma, "decay exponent in (1,inf], 'inf' = threshold rule")
        ->capture_default_str();
    generate->add_option("--weights", gen_weights_mode, "det | iid")
        ->check(CLI::IsMember({"det", "iid"}));
    generate->add_flag("--sparse", gen_params.sparse_mode, "sparse-community rule variant");
    bool gen_no_correction = false;
    generate->add_flag("--no-correction", gen_no_correction,
                       "drop the 1/(1+C1) factor (debug / negative control)");

    // shared model-file options
    std::string opt_edges, opt_weights, opt_truth;
    double opt_tau = 2.5, opt_w0 = 1.0;
    auto add_instance_options = [&](CLI::App* cmd, bool with_truth) {
        cmd->add_option("--edges", opt_edges, "edge list file")->required();
        cmd->add_option("--weights", opt_weights, "weights file")->required();
        cmd->add_option("--tau", opt_tau, "tail exponent")->capture_default_str();
        cmd->add_option("--w0", opt_w0, "minimum weight")->capture_default_str();
        if (with_truth) {
            cmd->add_option("--truth", opt_truth, "ground-truth file (adds risk metrics)");
        }
    };

    // stats
    auto* stats = app.add_subcommand("stats", "triangle count, W(G) and per-vertex W(a)");
    add_instance_options(stats, false);
    std::string stats_per_vertex_csv;
    stats->add_option("--per-vertex", stats_per_vertex_csv, "write per-vertex CSV here");

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "weighted-triangle detection test");
    add_instance_options(detect_cmd, false);
    std::string f_mode = "log_n";
    double custom_f = 0.0;
    detect_cmd->add_option("--f-mode", f_mode, "log_n | sqrt_n | custom")
        ->check(CLI::IsMember({"log_n", "sqrt_n", "custom"}));
    detect_cmd->add_option("--custom-f", custom_f, "threshold for --f-mode custom");

    // identify
    auto* identify_cmd = app.add_subcommand("identify", "per-vertex community identification");
    add_instance_options(identify_cmd, true);
    double calib_c = 1.0;
    double opt_t_n = 0.0;
    std::string id_csv = "identification.csv";
    identify_cmd->add_option("--calib-C", calib_c, "threshold constant")->capture_default_str();
    identify_cmd->add_option("--t-n", opt_t_n, "weight cutoff (0 = default rule)");
    identify_cmd->add_option("--out-csv", id_csv, "per-vertex CSV path")->capture_default_str();

    // calibrate-C
    auto* calibrate_cmd =
        app.add_subcommand("calibrate-C", "fit the threshold constant on a labeled instance");
    add_instance_options(calibrate_cmd, true);
    calibrate_cmd->add_option("--t-n", opt_t_n, "weight cutoff (0 = default rule)");

    // estimate-k
    auto* estimate_cmd = app.add_subcommand("estimate-k", "community size from identified weights");
    std::string est_identified;
    std::size_t est_m = 20;
    double est_tau = 2.5;
    estimate_cmd->add_option("--identified", est_identified,
                             "identification.csv from `identify`")->required();
    estimate_cmd->add_option("--M", est_m, "number of estimators")->capture_default_str();
    estimate_cmd->add_option("--tau", est_tau, "tail exponent")->capture_default_str();

    // pipeline
    auto* pipeline_cmd =
        app.add_subcommand("pipeline", "detect, then identify, then estimate the size");
    add_instance_options(pipeline_cmd, true);
    pipeline_cmd->add_option("--f-mode", f_mode, "log_n | sqrt_n | custom");
    pipeline_cmd->add_option("--custom-f", custom_f, "threshold for --f-mode custom");
    pipeline_cmd->add_option("--calib-C", calib_c, "threshold constant")->capture_default_str();
    pipeline_cmd->add_option("--t-n", opt_t_n, "weight cutoff (0 = default rule)");
    pipeline_cmd->add_option("--M", est_m, "number of estimators")->capture_default_str();
    std::string pipeline_csv;
    pipeline_cmd->add_option("--out-csv", pipeline_csv, "also write identification CSV");

    // experiment
    auto* experiment_cmd = app.add_subcommand("experiment", "reproduce the numerical studies");
    std::string exp_name;
    std::string exp_scale = "desk";
    std::size_t exp_replicas = 0;
    double exp_calib_c = 0.0;
    experiment_cmd->add_option("--name", exp_name, "fig1 | fig2 | fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    experiment_cmd->add_option("--scale", exp_scale, "desk | paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    experiment_cmd->add_option("--replicas", exp_replicas, "replica count (0 = preset)");
    experiment_cmd->add_option("--M", est_m, "estimators for fig3")->capture_default_str();
    experiment_cmd->add_option("--t-n", opt_t_n, "weight cutoff (0 = preset)");
    experiment_cmd->add_option("--calib-C", exp_calib_c,
                               "threshold constant (0 = calibrate on a labeled replica)");

    // oracle-check
    auto* oracle_cmd = app.add_subcommand("oracle-check", "run the analytic verification suite");
    std::size_t oracle_degree_replicas = 120;
    std::size_t oracle_marginal_replicas = 20000;
    oracle_cmd->add_option("--degree-replicas", oracle_degree_replicas, "")
        ->capture_default_str();
    oracle_cmd->add_option("--marginal-replicas", oracle_marginal_replicas, "")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            gd::ModelParams p = gen_params;
            p.gamma = parse_gamma(gen_gamma);
            p.seed = global.seed;
            p.correction = !gen_no_correction;
            p.weight_mode = gen_weights_mode == "det" ? gd::WeightMode::deterministic_quantile
                                                      : gd::WeightMode::iid_pareto;
            if (gen_model == "h0") {
                p.k = 0;
            } else if (p.k == 0) {
                throw std::invalid_argument(
                    "k must be >= 1 under h1; for a community-free sample use --model h0");
            }
            const auto files =
                gd::write_generated_files(p, global.out.empty() ? "." : global.out);
            json j{{"edges", files.edges.string()}, {"weights", files.weights.string()}};
            if (!files.ground_truth.empty()) j["ground_truth"] = files.ground_truth.string();
            std::cout << j.dump(2) << '\n';
            return kExitOk;
        }

        if (stats->parsed()) {
            const auto inst = load_instance(opt_edges, opt_weights, opt_tau, opt_w0);
            const auto st =
                gd::triangle_statistics(inst.graph, inst.weights_file.weights, global.jobs);
            if (!stats_per_vertex_csv.empty()) {
                std::ofstream csv(stats_per_vertex_csv);
                if (!csv) throw std::runtime_error("cannot open " + stats_per_vertex_csv);
                csv << "vertex,weight,W_a\n";
                for (std::size_t v = 0; v < st.per_vertex.size(); ++v) {
                    csv << v << ',' << gd::format_double(inst.weights_file.weights.values[v])
                        << ',' << gd::format_double(st.per_vertex[v]) << '\n';
                }
            }
            emit(json{{"n", inst.graph.num_vertices()},
                      {"m", inst.graph.num_edges()},
                      {"triangle_count", st.triangle_count},
                      {"W", st.w_global},
                      {"runtime_ms", st.runtime_ms}},
                 global.out);
            return kExitOk;
        }

        if (detect_cmd->parsed()) {
            const auto inst = load_instance(opt_edges, opt_weights, opt_tau, opt_w0);
            const double w =
                gd::weighted_triangles(inst.graph, inst.weights_file.weights, global.jobs);
            const gd::FMode mode = f_mode == "log_n"   ? gd::FMode::log_n
                                   : f_mode == "sqrt_n" ? gd::FMode::sqrt_n
                                                        : gd::FMode::custom;
            const auto rep = gd::detect(w, inst.graph.num_vertices(), mode, custom_f);
            emit(detection_to_json(rep), global.out);
            return kExitOk;
        }

        if (identify_cmd->parsed() || calibrate_cmd->parsed() || pipeline_cmd->parsed()) {
            const auto inst = load_instance(opt_edges, opt_weights, opt_tau, opt_w0);
            const auto& ws = inst.weights_file.weights;
            const std::size_t n = inst.graph.num_vertices();

            std::optional<std::vector<char>> truth_types;
            if (!opt_truth.empty()) {
                auto truth_file = gd::load_weights_file(opt_truth, opt_tau, opt_w0);
                if (!truth_file.types) {
                    throw std::runtime_error(opt_truth + " carries no A|B type column");
                }
                truth_types = std::move(*truth_file.types);
            } else if (inst.weights_file.types) {
                truth_types = inst.weights_file.types;
            }

            const double t_n =
                opt_t_n > 0.0 ? opt_t_n : gd::default_t_n(n, std::nullopt, opt_tau).value;

            if (calibrate_cmd->parsed()) {
                if (!truth_types) {
                    throw std::runtime_error("calibrate-C needs --truth with an A|B column");
                }
                const auto w_a = gd::all_localized(inst.graph, ws, global.jobs);
                const auto truth_ids = truth_ids_from_types(*truth_types);
                // community ids must be the leading block for calibration
                const std::size_t community_size = truth_ids.size();
                const double c = gd::calibrate_threshold_constant(w_a, ws, n, community_size, t_n);
                emit(json{{"threshold_constant", c}, {"t_n", t_n}}, global.out);
                return kExitOk;
            }

            if (identify_cmd->parsed()) {
                const auto w_a = gd::all_localized(inst.graph, ws, global.jobs);
                const auto rep = gd::identify(w_a, ws, n, calib_c, t_n);
                std::optional<double> risk;
                if (truth_types) {
                    risk = gd::identification_risk(rep.identified,
                                                   truth_ids_from_types(*truth_types),
                                                   ws.values, t_n);
                }
                write_identification_csv(rep, truth_types ? &*truth_types : nullptr, id_csv);
                emit(identification_to_json(rep, risk), global.out);
                return kExitOk;
            }

            // pipeline
            const auto st = gd::triangle_statistics(inst.graph, ws, global.jobs);
            const gd::FMode mode = f_mode == "log_n"   ? gd::FMode::log_n
                                   : f_mode == "sqrt_n" ? gd::FMode::sqrt_n
                                                        : gd::FMode::custom;
            const auto det = gd::detect(st.w_global, n, mode, custom_f);
            const auto id_rep = gd::identify(st.per_vertex, ws, n, calib_c, t_n);
            std::optional<double> risk;
            if (truth_types) {
                risk = gd::identification_risk(id_rep.identified,
                                               truth_ids_from_types(*truth_types), ws.values,
                                               t_n);
            }
            if (!pipeline_csv.empty()) {
                write_identification_csv(id_rep, truth_types ? &*truth_types : nullptr,
                                         pipeline_csv);
            }
            std::vector<double> identified_weights;
            for (gd::VertexId v : id_rep.identified) identified_weights.push_back(ws.values[v]);
            const auto est = gd::estimate_k(std::move(identified_weights), opt_tau, est_m);

            json j{{"detection", detection_to_json(det)},
                   {"identification", identification_to_json(id_rep, risk)},
                   {"size_estimate", size_estimate_to_json(est)}};
            if (!det.reject_h0) {
                j["caveat"] =
                    "detection kept H0; identification and size estimates are unreliable";
            }
            emit(j, global.out);
            return kExitOk;
        }

        if (estimate_cmd->parsed()) {
            std::ifstream in(est_identified);
            if (!in) throw std::runtime_error("cannot open " + est_identified);
            std::string line;
            std::vector<double> weights;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty() || line[0] == '#' || line.rfind("vertex,", 0) == 0) continue;
                // columns: vertex,weight,W_a,flag[,truth]
                double weight = 0;
                int flag = 0;
                std::size_t c1 = line.find(','), c2 = std::string::npos,
                            c3 = std::string::npos;
                if (c1 != std::string::npos) c2 = line.find(',', c1 + 1);
                if (c2 != std::string::npos) c3 = line.find(',', c2 + 1);
                if (c3 == std::string::npos) {
                    throw std::runtime_error(est_identified + ":" + std::to_string(line_no) +
                                             ": malformed identification row");
                }
                try {
                    weight = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
                    flag = std::stoi(line.substr(c3 + 1));
                } catch (const std::exception&) {
                    throw std::runtime_error(est_identified + ":" + std::to_string(line_no) +
                                             ": malformed identification row");
                }
                if (flag != 0) weights.push_back(weight);
            }
            emit(size_estimate_to_json(gd::estimate_k(std::move(weights), est_tau, est_m)),
                 global.out);
            return kExitOk;
        }

        if (experiment_cmd->parsed()) {
            gd::ExperimentConfig cfg;
            cfg.scale = exp_scale == "paper" ? gd::ExperimentScale::paper
                                             : gd::ExperimentScale::desk;
            if (cfg.scale == gd::ExperimentScale::paper && exp_name != "fig1") {
                std::cerr << "warning: paper scale runs at n = 10^6; expect hours of runtime\n";
            }
            cfg.replicas = exp_replicas;
            cfg.seed = global.seed;
            cfg.jobs = global.jobs;
            cfg.m_estimators = est_m;
            cfg.t_n = opt_t_n;
            if (exp_calib_c > 0.0) cfg.threshold_constant = exp_calib_c;
            cfg.out_dir = global.out.empty() ? std::filesystem::path(exp_name)
                                             : std::filesystem::path(global.out);

            if (exp_name == "fig1") {
                const auto res = gd::run_fig1(cfg);
                json risks;
                for (const auto& [k, r] : res.risk) risks[std::to_string(k)] = r;
                emit(json{{"experiment", "fig1"},
                          {"replicas_per_group", res.h0_w.size()},
                          {"failed_replicas", res.failed_replicas},
                          {"risk_at_log_n", risks}},
                     "");
            } else if (exp_name == "fig2") {
                const auto res = gd::run_fig2(cfg);
                json j{{"experiment", "fig2"},
                       {"threshold_constant", res.threshold_constant},
                       {"t_n", res.t_n},
                       {"recall_restricted", res.recall},
                       {"precision_restricted", res.precision}};
                if (res.risk) j["risk"] = *res.risk;
                emit(j, "");
            } else {
                const auto res = gd::run_fig3(cfg);
                emit(json{{"experiment", "fig3"},
                          {"threshold_constant", res.threshold_constant},
                          {"t_n", res.t_n},
                          {"true_k", res.community_size},
                          {"failed_replicas", res.failed_replicas},
                          {"mean_estimates", res.mean_estimates}},
                     "");
            }
            return kExitOk;
        }

        if (oracle_cmd->parsed()) {
            gd::oracle::OracleSuiteConfig cfg;
            cfg.seed = global.seed;
            cfg.jobs = global.jobs;
            cfg.degree_replicas = oracle_degree_replicas;
            cfg.marginal_replicas = oracle_marginal_replicas;
            return run_oracle_check(cfg, global.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}
