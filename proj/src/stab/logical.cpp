#include "bqc/stab/logical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bqc::stab {

namespace {

struct PreparedStructure {
    DetectorErrorModel dem;
    std::vector<DetectorGraph> graphs;
    long realized_gates = 0;
};

PreparedStructure prepare(const LogicalRunConfig& config, RngStream& structure_rng) {
    PreparedStructure ps;
    BuiltCircuit built = build_logical_circuit(config, structure_rng);
    ps.dem = build_dem(built.circuit, built.layout);
    ps.graphs = build_graphs(ps.dem, built.layout);
    ps.realized_gates = built.realized_gates;
    return ps;
}

// Decode the observable-relevant graphs (Z-stabilizer detectors carry every
// logical-Z observable; X-type graphs have no flags here).
bool decode_shot(const PreparedStructure& ps, const std::vector<uint8_t>& det_flips,
                 uint32_t obs_flips, long& fallback_count) {
    uint32_t predicted = 0;
    for (const auto& g : ps.graphs) {
        if (!g.z_type) continue;
        std::vector<int32_t> events;
        for (int32_t local = 0; local < g.n_nodes(); ++local)
            if (det_flips[size_t(g.nodes[size_t(local)])]) events.push_back(local);
        if (events.empty()) continue;
        MatchResult mr = match_decode(g, events);
        predicted ^= mr.predicted_obs;
        if (mr.used_fallback) ++fallback_count;
    }
    return predicted == obs_flips;
}

}  // namespace

LogicalRunResult run_logical_circuit(const LogicalRunConfig& config, long shots, int n_structures) {
    config.validate();
    if (shots < 1) throw std::invalid_argument("need at least one shot");
    if (config.fixed_layers) n_structures = 1;
    n_structures = int(std::min<long>(n_structures, shots));

    RngStream root(config.seed, "logical_run");
    LogicalRunResult res;
    res.shots = shots;
    double gates_accum = 0.0;

    std::vector<uint8_t> det_flips;
    uint32_t obs_flips = 0;
    for (int s = 0; s < n_structures; ++s) {
        RngStream srng = root.split("structure", uint64_t(s));
        PreparedStructure ps = prepare(config, srng);
        gates_accum += double(ps.realized_gates);
        const long lo = shots * s / n_structures;
        const long hi = shots * (s + 1) / n_structures;
        for (long shot = lo; shot < hi; ++shot) {
            RngStream shot_rng = root.split("shot", uint64_t(shot));
            sample_shot(ps.dem, shot_rng, det_flips, obs_flips);
            if (!decode_shot(ps, det_flips, obs_flips, res.fallback_decodes)) ++res.failures;
        }
    }
    res.p_l = double(res.failures) / double(shots);
    res.stderr_ = std::sqrt(std::max(res.p_l * (1.0 - res.p_l), 1e-12) / double(shots));
    const double layers = config.n_layers > 0 ? double(config.n_layers) : 1.0;
    res.mean_gates_per_layer = gates_accum / double(n_structures) / layers;
    return res;
}

namespace {

CrossingEstimate find_crossing(const std::vector<double>& eps,
                               const std::vector<double>& p_lo_d,
                               const std::vector<double>& p_hi_d) {
    // crossing where the larger distance stops being better
    CrossingEstimate ce;
    for (size_t i = 0; i + 1 < eps.size(); ++i) {
        const double a = p_hi_d[i] - p_lo_d[i];
        const double b = p_hi_d[i + 1] - p_lo_d[i + 1];
        if (a <= 0.0 && b > 0.0) {
            const double t = (0.0 - a) / (b - a);
            const double lx = std::log(eps[i]), ly = std::log(eps[i + 1]);
            ce.found = true;
            ce.eps = std::exp(lx + t * (ly - lx));
            return ce;
        }
    }
    return ce;
}

}  // namespace

ThresholdSweepResult threshold_sweep(const std::vector<int>& distances,
                                     const std::vector<double>& eps_grid, SweepAxis axis,
                                     double r_h, SeMode se_mode, long shots, uint64_t seed,
                                     int n_qubits, int n_layers) {
    if (distances.size() < 2) throw std::invalid_argument("need at least two distances");
    ThresholdSweepResult out;
    out.axis = axis;
    out.r_h = r_h;
    out.se_mode = se_mode;

    std::vector<std::vector<double>> p(distances.size(), std::vector<double>(eps_grid.size(), 0.0));
    std::vector<std::vector<double>> se(distances.size(), std::vector<double>(eps_grid.size(), 0.0));
    std::vector<std::vector<long>> fails(distances.size(), std::vector<long>(eps_grid.size(), 0));

    for (size_t di = 0; di < distances.size(); ++di) {
        for (size_t ei = 0; ei < eps_grid.size(); ++ei) {
            LogicalRunConfig config;
            config.n_qubits = n_qubits;
            config.n_layers = n_layers;
            config.n_rounds = 1;
            config.distance = distances[di];
            config.r_h = r_h;
            config.se_mode = se_mode;
            config.seed = seed ^ (uint64_t(di) << 32) ^ uint64_t(ei * 7919 + 13);
            switch (axis) {
                case SweepAxis::Comm: config.model.eps_comm = eps_grid[ei]; break;
                case SweepAxis::Loc: config.model.eps_loc = eps_grid[ei]; break;
                case SweepAxis::Both:
                    config.model.eps_comm = eps_grid[ei];
                    config.model.eps_loc = eps_grid[ei];
                    break;
            }
            LogicalRunResult r = run_logical_circuit(config, shots);
            p[di][ei] = r.p_l;
            se[di][ei] = r.stderr_;
            fails[di][ei] = r.failures;
            SweepPoint pt;
            pt.distance = distances[di];
            pt.eps = eps_grid[ei];
            pt.p_l = r.p_l;
            pt.stderr_ = r.stderr_;
            out.points.push_back(pt);
        }
    }

    std::vector<double> eps(eps_grid.begin(), eps_grid.end());
    out.crossing = find_crossing(eps, p[0], p[1]);

    // bootstrap CI on the crossing
    if (out.crossing.found) {
        RngStream brng(seed, "bootstrap");
        std::vector<double> samples;
        const int reps = 200;
        for (int rep = 0; rep < reps; ++rep) {
            std::vector<double> p0(eps.size()), p1(eps.size());
            for (size_t ei = 0; ei < eps.size(); ++ei) {
                auto resample = [&](double mean, long shots_used) {
                    long k = 0;
                    for (long s = 0; s < shots_used; ++s)
                        if (brng.uniform() < mean) ++k;
                    return double(k) / double(shots_used);
                };
                // parametric bootstrap at a reduced shot count keeps this cheap
                const long boot_shots = std::min<long>(shots, 2000);
                p0[ei] = resample(p[0][ei], boot_shots);
                p1[ei] = resample(p[1][ei], boot_shots);
            }
            CrossingEstimate ce = find_crossing(eps, p0, p1);
            if (ce.found) samples.push_back(ce.eps);
        }
        if (samples.size() >= 20) {
            std::sort(samples.begin(), samples.end());
            out.crossing.ci_lo = samples[size_t(double(samples.size()) * 0.025)];
            out.crossing.ci_hi = samples[size_t(double(samples.size()) * 0.975)];
        } else {
            out.crossing.ci_lo = out.crossing.ci_hi = out.crossing.eps;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double p_l_max(int n_qubits) { return 1.0 - std::pow(2.0, -n_qubits); }

namespace {
void check_p(double p, double pmax) {
    if (p < 0.0 || p > pmax + 1e-12)
        throw std::invalid_argument("logical error probability outside [0, p_L,max]");
}
}  // namespace

double p_round_from_circuit(double p_circuit, const AlgebraConfig& cfg) {
    const double pmax = p_l_max(cfg.n_qubits);
    check_p(p_circuit, pmax);
    const double exponent = 1.0 / (double(cfg.n_layers) * double(cfg.n_rounds));
    return pmax * (1.0 - std::pow(1.0 - p_circuit / pmax, exponent));
}

double p_circuit_from_round(double p_round, const AlgebraConfig& cfg) {
    const double pmax = p_l_max(cfg.n_qubits);
    check_p(p_round, pmax);
    const double n = double(cfg.n_layers) * double(cfg.n_rounds);
    return pmax * (1.0 - std::pow(1.0 - p_round / pmax, n));
}

double p_gate_from_round(double p_round, const AlgebraConfig& cfg) {
    check_p(p_round, 1.0);
    return 1.0 - std::pow(1.0 - p_round, 1.0 / cfg.n_gpl);
}

double p_blind_gate_from_round(double p_round, const AlgebraConfig& cfg) {
    check_p(p_round, 1.0);
    if (cfg.r_h <= 0.0) throw std::invalid_argument("hiding fraction must be positive here");
    return 1.0 - std::pow(1.0 - p_round, 1.0 / (cfg.n_gpl * cfg.r_h));
}

double p_round_from_gate(double p_gate, const AlgebraConfig& cfg) {
    check_p(p_gate, 1.0);
    return 1.0 - std::pow(1.0 - p_gate, cfg.n_gpl);
}

double fidelity_from_round(double p_round, const AlgebraConfig& cfg) {
    return 1.0 - p_circuit_from_round(p_round, cfg);
}

double n_total_gates(double f_l, double p_gate) {
    if (f_l <= 0.0 || f_l > 1.0) throw std::invalid_argument("fidelity outside (0,1]");
    if (p_gate < 0.0 || p_gate >= 1.0) throw std::invalid_argument("p_gate outside [0,1)");
    if (p_gate == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(f_l) / std::log(1.0 - p_gate);
}

GateScalingReport validate_gate_scaling(const LogicalRunConfig& base,
                                        const std::vector<int>& layer_counts, long shots) {
    if (layer_counts.size() < 2) throw std::invalid_argument("need at least two layer counts");
    GateScalingReport report;
    for (int layers : layer_counts) {
        LogicalRunConfig config = base;
        config.n_layers = layers;
        LogicalRunResult r = run_logical_circuit(config, shots);
        AlgebraConfig acfg;
        acfg.n_qubits = config.n_qubits;
        acfg.n_layers = layers;
        acfg.n_rounds = config.n_rounds;
        acfg.n_gpl = 1.5 * config.n_qubits;
        acfg.r_h = config.r_h;
        GateScalingPoint pt;
        pt.n_layers = layers;
        pt.p_l = r.p_l;
        pt.p_l_stderr = r.stderr_;
        const double pmax = p_l_max(config.n_qubits);
        const double p_c = std::min(r.p_l, pmax * (1 - 1e-9));
        const double p_round = p_round_from_circuit(p_c, acfg);
        pt.p_gate = p_gate_from_round(p_round, acfg);
        // delta method through both maps
        const double h = std::max(r.stderr_, 1e-12);
        const double up = std::min(p_c + h, pmax * (1 - 1e-9));
        const double down = std::max(p_c - h, 0.0);
        const double g_up = p_gate_from_round(p_round_from_circuit(up, acfg), acfg);
        const double g_dn = p_gate_from_round(p_round_from_circuit(down, acfg), acfg);
        pt.p_gate_stderr = 0.5 * std::abs(g_up - g_dn);
        report.points.push_back(pt);
    }
    report.consistent_3sigma = true;
    for (size_t i = 0; i + 1 < report.points.size(); ++i) {
        const auto& a = report.points[i];
        const auto& b = report.points[i + 1];
        const double sigma = std::sqrt(a.p_gate_stderr * a.p_gate_stderr +
                                       b.p_gate_stderr * b.p_gate_stderr);
        if (std::abs(a.p_gate - b.p_gate) > 3.0 * std::max(sigma, 1e-12))
            report.consistent_3sigma = false;
    }
    return report;
}

GadgetResult magic_teleport_gadget(int distance, const ErrorModel& model, long shots,
                                   uint64_t seed) {
    // patch 0 = computation, patch 1 = server-prepared magic state (ideal
    // init is implicit in the deviation picture, so "noiseless resource"
    // means no extra noise sites, which is exactly what we build)
    LogicalRunConfig config;
    config.n_qubits = 2;
    config.n_layers = 2;
    config.n_rounds = 1;
    config.distance = distance;
    config.r_h = 1.0;
    config.model = model;
    config.se_mode = SeMode::Local;
    config.seed = seed;

    std::vector<LayerSpec> gadget_layers(2);
    gadget_layers[0].gates_cx.push_back({0, 1, true});
    gadget_layers[1].measure_patches.push_back(1);  // heralds the correction branch
    gadget_layers[1].gates_1q.push_back({0, true});
    config.fixed_layers = gadget_layers;
    LogicalRunResult gadget = run_logical_circuit(config, shots);

    // comparator: the same two delegated transversal gates without the
    // mid-circuit teleportation bookkeeping
    std::vector<LayerSpec> plain_layers(2);
    plain_layers[0].gates_cx.push_back({0, 1, true});
    plain_layers[1].gates_1q.push_back({0, true});
    config.fixed_layers = plain_layers;
    config.seed = seed ^ 0x9e3779b97f4a7c15ull;
    LogicalRunResult plain = run_logical_circuit(config, shots);

    GadgetResult out;
    out.p_l = gadget.p_l;
    out.stderr_ = gadget.stderr_;
    out.comparator_p_l = plain.p_l;
    out.comparator_stderr = plain.stderr_;
    return out;
}

std::string export_graph(const DetectorGraph& graph) {
    std::ostringstream os;
    os << "# detector graph block=" << graph.block << " type=" << (graph.z_type ? "Z" : "X")
       << " nodes=" << graph.n_nodes() << "\n";
    os << "# edge <u> <v|boundary> <weight> <p> <obs_mask>\n";
    for (const auto& e : graph.edges) {
        os << "edge " << e.u << " ";
        if (e.v < 0)
            os << "boundary";
        else
            os << e.v;
        os << " " << e.weight << " " << e.p << " " << e.obs_mask << "\n";
    }
    return os.str();
}

}  // namespace bqc::stab
