#include "geodetect/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>

#include "geodetect/generators.hpp"
#include "geodetect/numeric.hpp"
#include "geodetect/parallel.hpp"
#include "geodetect/rng.hpp"

namespace geodetect::oracle {

namespace {

void guard_size(const Graph& g, std::size_t limit, const char* what) {
    if (g.num_vertices() > limit) {
        throw std::invalid_argument(std::string(what) + ": guard exceeded, n = " +
                                    std::to_string(g.num_vertices()) + " > " +
                                    std::to_string(limit));
    }
}

}  // namespace

std::vector<std::array<VertexId, 3>> naive_triangle_list(const Graph& g) {
    guard_size(g, 2000, "naive_triangle_list");
    const std::size_t n = g.num_vertices();
    std::vector<char> adj(n * n, 0);
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v : g.neighbors(u)) adj[static_cast<std::size_t>(u) * n + v] = 1;
    }
    std::vector<std::array<VertexId, 3>> out;
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) {
            if (!adj[static_cast<std::size_t>(a) * n + b]) continue;
            for (VertexId c = b + 1; c < n; ++c) {
                if (adj[static_cast<std::size_t>(a) * n + c] &&
                    adj[static_cast<std::size_t>(b) * n + c]) {
                    out.push_back({a, b, c});
                }
            }
        }
    }
    return out;
}

std::size_t naive_triangle_count(const Graph& g) { return naive_triangle_list(g).size(); }

double naive_weighted_triangles(const Graph& g, const WeightSequence& ws) {
    guard_size(g, 2000, "naive_weighted_triangles");
    if (ws.size() != g.num_vertices()) {
        throw std::invalid_argument("naive_weighted_triangles: weight length mismatch");
    }
    const std::size_t n = g.num_vertices();

    // Reconstruct the canonical summation order from the graph alone:
    // triangles keyed by (id of the lowest-(degree,id) corner, then rank
    // positions of the other two), terms multiplied in ascending id order.
    std::vector<VertexId> by_rank(n);
    std::iota(by_rank.begin(), by_rank.end(), VertexId{0});
    std::sort(by_rank.begin(), by_rank.end(), [&](VertexId a, VertexId b) {
        const auto da = g.degree(a), db = g.degree(b);
        return da != db ? da < db : a < b;
    });
    std::vector<std::uint32_t> rankpos(n);
    for (std::size_t r = 0; r < n; ++r) rankpos[by_rank[r]] = static_cast<std::uint32_t>(r);

    struct Keyed {
        std::uint64_t source;
        std::uint32_t rv, rw;
        double term;
    };
    std::vector<Keyed> keyed;
    for (const auto& tri : naive_triangle_list(g)) {
        std::array<VertexId, 3> byrank = tri;
        std::sort(byrank.begin(), byrank.end(),
                  [&](VertexId x, VertexId y) { return rankpos[x] < rankpos[y]; });
        // tri is already ascending by id
        const double term =
            (1.0 / ws.values[tri[0]] * (1.0 / ws.values[tri[1]])) * (1.0 / ws.values[tri[2]]);
        keyed.push_back(Keyed{byrank[0], rankpos[byrank[1]], rankpos[byrank[2]], term});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return std::tie(a.source, a.rv, a.rw) < std::tie(b.source, b.rv, b.rw);
    });
    KahanSum sum;
    for (const Keyed& kt : keyed) sum.add(kt.term);
    return sum.value();
}

double exact_expected_w_h0(const WeightSequence& ws, double mu) {
    const std::size_t n = ws.size();
    if (n > 400) {
        throw std::invalid_argument("exact_expected_w_h0: guard exceeded, n = " +
                                    std::to_string(n));
    }
    const double mu_n = mu * static_cast<double>(n);
    auto p = [&](std::size_t i, std::size_t j) {
        return std::min(ws.values[i] * ws.values[j] / mu_n, 1.0);
    };
    KahanSum sum;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double pab = p(a, b);
            for (std::size_t c = b + 1; c < n; ++c) {
                sum.add(pab * p(b, c) * p(a, c) /
                        (ws.values[a] * ws.values[b] * ws.values[c]));
            }
        }
    }
    return sum.value();
}

namespace {

// Connection rule restated from the model definition (kept local so this
// check does not depend on the generator code path).
double community_pair_prob(double w_i, double w_j, double dist, const ModelParams& params) {
    const double corr = params.correction ? 1.0 / (1.0 + params.c1()) : 1.0;
    const double budget = w_i * w_j / (params.mu() * static_cast<double>(params.k));
    if (dist <= 0.0) return corr;
    const double powd = std::pow(dist, static_cast<double>(params.d));
    if (params.threshold_rule()) return powd <= budget ? corr : 0.0;
    return corr * std::pow(std::min(budget / powd, 1.0), params.gamma);
}

double mc_marginal(double w_i, double w_j, const ModelParams& params, std::size_t replicas,
                   std::uint64_t oracle_seed, std::uint64_t stream_salt) {
    KahanSum sum;
    std::vector<double> xi(params.d), xj(params.d);
    for (std::size_t r = 0; r < replicas; ++r) {
        auto rng = substream(oracle_seed, RngDomain::oracle, stream_salt * 0x10000001ull + r);
        for (unsigned c = 0; c < params.d; ++c) xi[c] = rng.uniform01();
        for (unsigned c = 0; c < params.d; ++c) xj[c] = rng.uniform01();
        sum.add(community_pair_prob(w_i, w_j, torus_distance(xi, xj), params));
    }
    return sum.value() / static_cast<double>(replicas);
}

}  // namespace

double marginal_connection_prob_exact(double w_i, double w_j, const ModelParams& params) {
    params.validate();
    if (params.k == 0) {
        throw std::invalid_argument("marginal probability requires a community (k >= 1)");
    }
    const double corr = params.correction ? 1.0 / (1.0 + params.c1()) : 1.0;
    const double pow2d = std::ldexp(1.0, static_cast<int>(params.d));
    const double r0 = pow2d * w_i * w_j / (params.mu() * static_cast<double>(params.k));
    if (r0 >= 1.0) return corr;
    if (params.threshold_rule()) return corr * r0;
    // integral of min(r0/V, 1)^gamma dV over V in (0,1]
    const double g = params.gamma;
    return corr * (r0 * (1.0 + 1.0 / (g - 1.0)) - std::pow(r0, g) / (g - 1.0));
}

OracleReport check_marginal_prob(double w_i, double w_j, const ModelParams& params,
                                 std::size_t replicas, std::uint64_t oracle_seed) {
    if (replicas < 10000) {
        throw std::invalid_argument("check_marginal_prob: at least 10^4 replicas required");
    }
    const double corr = params.correction ? 1.0 / (1.0 + params.c1()) : 1.0;
    const double pow2d = std::ldexp(1.0, static_cast<int>(params.d));
    const double r0 = pow2d * w_i * w_j / (params.mu() * static_cast<double>(params.k));
    const bool supercritical = r0 >= 1.0;

    OracleReport report;
    report.name = "marginal_prob w=(" + std::to_string(w_i) + "," + std::to_string(w_j) +
                  ") " + (supercritical ? "supercritical" : "subcritical");
    report.observed = mc_marginal(w_i, w_j, params, replicas, oracle_seed,
                                  static_cast<std::uint64_t>(w_i * 131.0 + w_j));
    if (supercritical) {
        report.expected = corr;
    } else if (params.threshold_rule()) {
        report.expected = corr * std::min(1.0, r0);  // ball volume, exact
    } else {
        // Finite gamma subcritical: only the regime structure is asserted
        // (the printed constant is checked by the linearity fit); compare
        // against the integrated closed form as a derived reference.
        report.expected = marginal_connection_prob_exact(w_i, w_j, params);
    }
    const double phat = std::clamp(report.observed, 1e-12, 1.0 - 1e-12);
    report.stderr_ = std::sqrt(phat * (1.0 - phat) / static_cast<double>(replicas));
    report.z_score = (report.observed - report.expected) / report.stderr_;
    report.z_threshold = 3.0;
    report.pass = std::abs(report.z_score) <= report.z_threshold;
    return report;
}

OracleReport check_marginal_prob_linearity(const ModelParams& params, std::size_t replicas,
                                           std::uint64_t oracle_seed) {
    if (params.k == 0) {
        throw std::invalid_argument("linearity check requires a community");
    }
    // Subcritical grid: r0 spread over (0, 0.5]; x = w_i w_j / k.
    const double pow2d = std::ldexp(1.0, static_cast<int>(params.d));
    std::vector<double> xs, ys;
    for (int i = 1; i <= 10; ++i) {
        const double r0 = 0.05 * static_cast<double>(i);
        const double w = std::sqrt(r0 * params.mu() * static_cast<double>(params.k) / pow2d);
        if (w < params.w0) continue;
        xs.push_back(w * w / static_cast<double>(params.k));
        ys.push_back(mc_marginal(w, w, params, replicas, oracle_seed, 7777 + i));
    }
    const std::size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double dm = static_cast<double>(m);
    const double slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / dm;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / dm;
    for (std::size_t i = 0; i < m; ++i) {
        const double fit = intercept + slope * xs[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
    }
    const double r2 = 1.0 - ss_res / ss_tot;

    OracleReport report;
    report.name = "marginal_prob_linearity";
    report.observed = r2;
    report.expected = 1.0;
    report.stderr_ = 0.01;  // tolerance: R^2 >= 0.99
    report.z_score = (1.0 - r2) / 0.01;
    report.z_threshold = 1.0;
    report.pass = slope > 0.0 && report.z_score <= report.z_threshold;
    return report;
}

std::vector<OracleReport> check_expected_degrees(const DegreeCheckConfig& cfg) {
    if (cfg.replicas < 100) {
        throw std::invalid_argument("check_expected_degrees: at least 100 replicas required");
    }
    if (cfg.probe_ids.size() != cfg.probe_weights.size()) {
        throw std::invalid_argument("check_expected_degrees: probe ids and weights differ");
    }
    const ModelParams& p = cfg.params;
    p.validate();
    const bool h1 = p.k > 0;

    // Deterministic base sequences keep every replica's weight vector equal;
    // probes are written on top.
    const std::uint64_t seed_comm = derive_seed(p.seed, RngDomain::weights, 0xC0DE);
    const std::uint64_t seed_rest = derive_seed(p.seed, RngDomain::weights, 0xBEEF);
    WeightSequence comm;
    WeightSequence rest;
    if (h1) {
        comm = generate_weights(p.k, p.tau, p.w0, p.weight_mode, seed_comm);
        rest = generate_weights(p.n - p.k, p.tau, p.w0, p.weight_mode, seed_rest);
    } else {
        rest = generate_weights(p.n, p.tau, p.w0, p.weight_mode, p.seed);
    }
    for (std::size_t i = 0; i < cfg.probe_ids.size(); ++i) {
        const VertexId v = cfg.probe_ids[i];
        if (v >= p.n) throw std::invalid_argument("probe id out of range");
        if (h1 && v < p.k) {
            comm.values[v] = cfg.probe_weights[i];
        } else {
            rest.values[h1 ? v - p.k : v] = cfg.probe_weights[i];
        }
    }

    const std::size_t np = cfg.probe_ids.size();
    std::vector<double> degree_samples(cfg.replicas * np, 0.0);
    parallel_blocks(cfg.replicas, cfg.jobs, [&](std::size_t r) {
        ModelParams local = p;
        local.seed = derive_seed(cfg.oracle_seed, RngDomain::oracle, r);
        Graph g;
        if (h1) {
            g = sample_h1(comm, rest, local).first;
        } else {
            g = sample_h0(rest, local);
        }
        for (std::size_t i = 0; i < np; ++i) {
            degree_samples[r * np + i] = static_cast<double>(g.degree(cfg.probe_ids[i]));
        }
    });

    std::vector<OracleReport> reports;
    for (std::size_t i = 0; i < np; ++i) {
        std::vector<double> xs(cfg.replicas);
        for (std::size_t r = 0; r < cfg.replicas; ++r) xs[r] = degree_samples[r * np + i];
        const MeanVar mv = mean_variance(xs);
        const double target = cfg.probe_weights[i];
        const double slack = cfg.slack_fraction * target;
        const double se = std::max(mv.stderr_of_mean(), 1e-12);

        OracleReport rep;
        rep.name = std::string(h1 ? "h1" : "h0") + (p.correction ? "" : "_nocorr") +
                   "_degree id=" + std::to_string(cfg.probe_ids[i]) +
                   " w=" + std::to_string(target) +
                   (h1 ? (cfg.probe_ids[i] < p.k ? " typeB" : " typeA") : "");
        rep.observed = mv.mean;
        rep.expected = target;
        rep.stderr_ = se;
        // Distance beyond the slack band, in standard errors.
        rep.z_score = std::max(0.0, (std::abs(mv.mean - target) - slack) / se);
        rep.z_threshold = 3.0;
        const bool in_band = rep.z_score <= rep.z_threshold;
        const bool exceed_expected = i < cfg.expect_exceed.size() && cfg.expect_exceed[i];
        if (exceed_expected) {
            rep.name += " negative_control";
            rep.pass = !in_band && mv.mean > target;
        } else {
            rep.pass = in_band;
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<OracleReport> run_oracle_suite(const OracleSuiteConfig& cfg) {
    std::vector<OracleReport> all;

    // Pair-marginal regime checks at the community scale used by the
    // detection experiments.
    ModelParams mp;
    mp.n = 10000;
    mp.k = 300;
    mp.tau = 2.5;
    mp.w0 = 1.0;
    mp.d = 2;
    mp.gamma = 5.0;
    all.push_back(check_marginal_prob(30.0, 30.0, mp, cfg.marginal_replicas, cfg.seed));
    all.push_back(check_marginal_prob(2.0, 2.0, mp, cfg.marginal_replicas, cfg.seed));
    all.push_back(check_marginal_prob(2.0, 4.0, mp, cfg.marginal_replicas, cfg.seed));
    all.push_back(check_marginal_prob_linearity(mp, cfg.marginal_replicas, cfg.seed));

    ModelParams mp_inf = mp;
    mp_inf.gamma = ModelParams::gamma_infinity();
    all.push_back(check_marginal_prob(30.0, 30.0, mp_inf, cfg.marginal_replicas, cfg.seed));
    all.push_back(check_marginal_prob(2.0, 3.0, mp_inf, cfg.marginal_replicas, cfg.seed));

    // Expected degrees: deterministic weights at the identification desk
    // scale, probes planted in both vertex classes.
    ModelParams h0_params;
    h0_params.n = 100000;
    h0_params.k = 0;
    h0_params.tau = 2.5;
    h0_params.w0 = 1.0;
    h0_params.weight_mode = WeightMode::deterministic_quantile;
    h0_params.seed = derive_seed(cfg.seed, RngDomain::oracle, 101);

    DegreeCheckConfig h0_cfg;
    h0_cfg.params = h0_params;
    h0_cfg.probe_ids = {25000, 25001, 25002};
    h0_cfg.probe_weights = {10.0, 30.0, 100.0};
    h0_cfg.replicas = cfg.degree_replicas;
    h0_cfg.oracle_seed = derive_seed(cfg.seed, RngDomain::oracle, 201);
    h0_cfg.jobs = cfg.jobs;
    for (auto& r : check_expected_degrees(h0_cfg)) all.push_back(std::move(r));

    // Larger community for the H1 probes: the w=100 type-B probe needs
    // k >> 2^d w_i w_max / mu before the capped pairs and the community
    // weight-sum deficit fit inside the 10% band.
    ModelParams h1_params = h0_params;
    h1_params.n = 200000;
    h1_params.k = 20000;
    h1_params.d = 2;
    h1_params.gamma = 5.0;

    DegreeCheckConfig h1_cfg;
    h1_cfg.params = h1_params;
    // Type-B probes inside the community, type-A probes in the rest part.
    h1_cfg.probe_ids = {5000, 5001, 5002, 60000, 60001, 60002};
    h1_cfg.probe_weights = {10.0, 30.0, 100.0, 10.0, 30.0, 100.0};
    h1_cfg.replicas = cfg.degree_replicas;
    h1_cfg.oracle_seed = derive_seed(cfg.seed, RngDomain::oracle, 202);
    h1_cfg.jobs = cfg.jobs;
    for (auto& r : check_expected_degrees(h1_cfg)) all.push_back(std::move(r));

    // Negative control: without the correction factor the type-B means must
    // leave the band upward while type-A stays inside it (the asymmetry is
    // the check). The effect is a factor (1+C1), so the smaller community
    // scale is plenty.
    DegreeCheckConfig nc_cfg;
    nc_cfg.params = h1_params;
    nc_cfg.params.n = 100000;
    nc_cfg.params.k = 5000;
    nc_cfg.params.correction = false;
    nc_cfg.probe_ids = {1250, 1251, 1252, 30000, 30001, 30002};
    nc_cfg.probe_weights = {10.0, 30.0, 100.0, 10.0, 30.0, 100.0};
    nc_cfg.replicas = std::max<std::size_t>(cfg.negative_control_replicas, 100);
    nc_cfg.expect_exceed = {true, true, true, false, false, false};
    nc_cfg.oracle_seed = derive_seed(cfg.seed, RngDomain::oracle, 203);
    nc_cfg.jobs = cfg.jobs;
    for (auto& r : check_expected_degrees(nc_cfg)) all.push_back(std::move(r));

    return all;
}

}  // namespace geodetect::oracle
