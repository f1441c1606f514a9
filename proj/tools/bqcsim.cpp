// bqcsim: hybrid light-matter blind-computation simulator and analysis CLI.
//
// Subcommands cover the full workflow set: trade-off sweeps, expressibility
// estimation, QEC runs and threshold sweeps, gate-ceiling algebra, timing,
// dark-count analysis, blindness verification, the wire-protocol server and
// client, and a selftest battery. Every artifact embeds the git describe,
// the seed, and a hash of the effective config.
//
// Exit codes: 0 success, 1 runtime failure, 2 config violation, 3 capacity.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "bqc/analysis.hpp"
#include "bqc/blindgate.hpp"
#include "bqc/circuitgen.hpp"
#include "bqc/netlink.hpp"
#include "bqc/report.hpp"
#include "bqc/resmodel.hpp"
#include "bqc/stab/logical.hpp"
#include "bqc/stab/steane.hpp"
#include "bqc/stab/surface.hpp"

using namespace bqc;

namespace {

struct CommonOpts {
    long shots = 1000;
    uint64_t seed = 1;
    std::string out;
    int jobs = 0;  // worker pool size for shot-parallel subcommands (0: auto)
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--shots", c.shots, "Monte Carlo shots");
    cmd->add_option("--seed", c.seed, "root RNG seed (recorded in artifacts)");
    cmd->add_option("--out", c.out, "output path (CSV or JSON)");
    cmd->add_option("--jobs", c.jobs, "worker pool size (default: logical cores)");
}

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    return nlohmann::json::parse(in);
}

ErrorModel model_from_flags(double eps_comm, double eps_loc, double eta, double p_dark,
                            double r_h, int c, const std::string& model_path) {
    ErrorModel m;
    if (!model_path.empty()) m = ErrorModel::from_json(load_config(model_path));
    if (eps_comm >= 0) m.eps_comm = eps_comm;
    if (eps_loc >= 0) m.eps_loc = eps_loc;
    if (eta >= 0) m.eta = eta;
    if (p_dark >= 0) m.p_dark = p_dark;
    if (r_h >= 0) m.r_h = r_h;
    if (c > 0) m.c = c;
    m.validate();
    return m;
}

int run_tradeoff(const CommonOpts& common, int n, int depth, std::vector<double> grid,
                 const ErrorModel& model, const std::string& mode) {
    std::optional<analysis::NoiseMode> forced;
    if (mode == "exact") forced = analysis::NoiseMode::Exact;
    if (mode == "trajectory") forced = analysis::NoiseMode::Trajectory;
    if (grid.empty()) grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    analysis::TradeoffReport rep =
        analysis::tradeoff_sweep(n, depth, grid, model, common.shots, common.seed, forced);

    nlohmann::json config{{"n", n}, {"depth", depth}, {"grid", grid}, {"model", model.to_json()},
                          {"shots", common.shots}};
    report::Stamp stamp = report::Stamp::make(common.seed, config);
    const std::string path = common.out.empty() ? "tradeoff.csv" : common.out;
    report::CsvWriter csv(path, stamp,
                          {"r_h", "fidelity", "fidelity_stderr", "efficiency", "log2_unitaries",
                           "lower_bound", "shots", "seed"});
    for (const auto& p : rep.points)
        csv.row({report::fmt(p.r_h), report::fmt(p.fidelity), report::fmt(p.fidelity_stderr),
                 report::fmt(p.efficiency), report::fmt(p.log2_unitaries),
                 report::fmt(p.lower_bound), std::to_string(p.shots), std::to_string(common.seed)});
    std::cout << "tradeoff: " << rep.points.size() << " grid points -> " << path << "\n";
    return 0;
}

int run_express(const CommonOpts& common, int n, int k, std::vector<int> depths,
                const std::string& family, int c, bool continuous) {
    analysis::EnsembleFamily fam = analysis::EnsembleFamily::Bricklayer;
    if (family == "pauli-rotation") fam = analysis::EnsembleFamily::PauliRotation;
    else if (family == "haar") fam = analysis::EnsembleFamily::Haar;
    else if (family != "bricklayer") throw std::invalid_argument("unknown family " + family);
    if (depths.empty()) depths = {1, 2, 3, 4, 5, 6};

    analysis::FramePotentialOptions opts;
    opts.c = c;
    opts.continuous_angles = continuous;

    nlohmann::json config{{"n", n}, {"k", k}, {"depths", depths}, {"family", family}, {"c", c}};
    report::Stamp stamp = report::Stamp::make(common.seed, config);
    const std::string path = common.out.empty() ? "express.csv" : common.out;
    report::CsvWriter csv(path, stamp,
                          {"family", "n", "depth", "blind_gates", "k", "samples", "frame_potential",
                           "stderr", "delta_eps", "delta_eps_err", "seed"});
    for (int depth : depths) {
        auto est = analysis::frame_potential(fam, n, depth, k, common.shots, common.seed, opts);
        csv.row({family, std::to_string(n), std::to_string(depth), std::to_string(est.blind_gates),
                 std::to_string(k), std::to_string(est.samples), report::fmt(est.mean),
                 report::fmt(est.stderr_), report::fmt(est.delta_eps), report::fmt(est.delta_eps_err),
                 std::to_string(common.seed)});
        std::cout << "express: depth " << depth << " F^(" << k << ") = " << est.mean << " +- "
                  << est.stderr_ << "\n";
    }
    std::cout << "express: wrote " << path << "\n";
    return 0;
}

int run_qec(const CommonOpts& common, int d, int n_qubits, int layers, double r_h,
            const ErrorModel& model, const std::string& se, const std::string& graph_out) {
    stab::LogicalRunConfig config;
    config.distance = d;
    config.n_qubits = n_qubits;
    config.n_layers = layers;
    config.r_h = r_h;
    config.model = model;
    config.se_mode = se == "blind" ? stab::SeMode::Blind : stab::SeMode::Local;
    config.seed = common.seed;

    if (!graph_out.empty()) {
        RngStream rng(common.seed, "export");
        stab::BuiltCircuit built = stab::build_logical_circuit(config, rng);
        stab::DetectorErrorModel dem = stab::build_dem(built.circuit, built.layout);
        auto graphs = stab::build_graphs(dem, built.layout);
        std::ofstream out(graph_out);
        for (const auto& g : graphs) out << stab::export_graph(g);
        std::cout << "qec-run: exported " << graphs.size() << " detector graphs -> " << graph_out
                  << "\n";
    }

    stab::LogicalRunResult res = stab::run_logical_circuit(config, common.shots);
    nlohmann::json config_j{{"d", d}, {"n_qubits", n_qubits}, {"layers", layers}, {"r_h", r_h},
                            {"se", se}, {"model", model.to_json()}, {"shots", common.shots}};
    report::Stamp stamp = report::Stamp::make(common.seed, config_j);
    const std::string path = common.out.empty() ? "qec_run.csv" : common.out;
    report::CsvWriter csv(path, stamp,
                          {"d", "eps_loc", "eps_comm", "r_h", "se_mode", "shots", "p_l", "stderr"});
    csv.row({std::to_string(d), report::fmt(model.eps_loc), report::fmt(model.eps_comm),
             report::fmt(r_h), se, std::to_string(common.shots), report::fmt(res.p_l),
             report::fmt(res.stderr_)});
    std::cout << "qec-run: p_L = " << res.p_l << " +- " << res.stderr_ << " -> " << path << "\n";
    return 0;
}

int run_threshold(const CommonOpts& common, const std::string& axis_name, double r_h,
                  const std::string& se, std::vector<int> dists, std::vector<double> grid,
                  int n_qubits, int layers) {
    stab::SweepAxis axis = stab::SweepAxis::Comm;
    if (axis_name == "loc") axis = stab::SweepAxis::Loc;
    else if (axis_name == "both") axis = stab::SweepAxis::Both;
    else if (axis_name != "comm") throw std::invalid_argument("axis must be comm|loc|both");
    if (dists.empty()) dists = {3, 5};
    if (grid.empty()) {
        if (axis == stab::SweepAxis::Comm)
            grid = {0.01, 0.02, 0.03, 0.04, 0.05, 0.07};
        else
            grid = {0.005, 0.01, 0.015, 0.02, 0.03};
    }
    stab::SeMode se_mode = se == "blind" ? stab::SeMode::Blind : stab::SeMode::Local;
    auto res = stab::threshold_sweep(dists, grid, axis, r_h, se_mode, common.shots, common.seed,
                                     n_qubits, layers);

    nlohmann::json config{{"axis", axis_name}, {"r_h", r_h}, {"se", se}, {"d", dists},
                          {"grid", grid}, {"shots", common.shots}};
    report::Stamp stamp = report::Stamp::make(common.seed, config);
    const std::string path = common.out.empty() ? "threshold.json" : common.out;
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : res.points)
        points.push_back({{"d", p.distance}, {"eps", p.eps}, {"p_l", p.p_l}, {"stderr", p.stderr_}});
    nlohmann::json j{{"stamp", stamp.to_json()},
                     {"axis", axis_name},
                     {"r_h", r_h},
                     {"se_mode", se},
                     {"points", points},
                     {"crossing", {{"found", res.crossing.found},
                                   {"eps", res.crossing.eps},
                                   {"ci_lo", res.crossing.ci_lo},
                                   {"ci_hi", res.crossing.ci_hi}}}};
    report::write_json(path, j);
    std::cout << "qec-threshold: crossing "
              << (res.crossing.found ? report::fmt(res.crossing.eps) : std::string("not found"))
              << " -> " << path << "\n";
    return 0;
}

int run_gate_ceiling(const CommonOpts& common, double f_l, double p_gate, int n_qubits,
                     int layers, int rounds, double r_h) {
    stab::AlgebraConfig cfg;
    cfg.n_qubits = n_qubits;
    cfg.n_layers = layers;
    cfg.n_rounds = rounds;
    cfg.n_gpl = 1.5 * n_qubits;
    cfg.r_h = r_h;
    const double n_tot = stab::n_total_gates(f_l, p_gate);
    const double p_round = stab::p_round_from_gate(p_gate, cfg);
    nlohmann::json j{{"f_l", f_l},
                     {"p_gate", p_gate},
                     {"p_round", p_round},
                     {"p_l_max", stab::p_l_max(n_qubits)},
                     {"n_total_gates", n_tot},
                     {"n_blind_gates", r_h > 0 ? n_tot * r_h : 0.0},
                     {"stamp", report::Stamp::make(common.seed, {{"f_l", f_l}}).to_json()}};
    if (!common.out.empty()) report::write_json(common.out, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_timing(const CommonOpts& common, const std::string& preset, const std::string& profile_path,
               double blind_gates, double local_layers, const ErrorModel& model) {
    resmodel::PlatformProfile profile = preset.empty() && !profile_path.empty()
                                            ? resmodel::PlatformProfile::from_json(load_config(profile_path))
                                            : resmodel::PlatformProfile::preset(preset.empty() ? "siv" : preset);
    auto breakdown = resmodel::computation_duration(blind_gates, local_layers, profile, model);
    nlohmann::json j{{"total_s", breakdown.total_s},
                     {"generation_s", breakdown.generation_s},
                     {"latency_s", breakdown.latency_s},
                     {"sync_s", breakdown.sync_s},
                     {"local_s", breakdown.local_s},
                     {"rounds", breakdown.rounds},
                     {"attempts", breakdown.attempts},
                     {"dominant", breakdown.dominant},
                     {"profile", profile.to_json()},
                     {"stamp", report::Stamp::make(common.seed, profile.to_json()).to_json()}};
    if (!common.out.empty()) report::write_json(common.out, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_darkcount(const CommonOpts& common, double p_thresh, double p_dark, double eta0,
                  double attenuation) {
    const double l_max = resmodel::max_distance(p_thresh, p_dark, eta0, attenuation);
    resmodel::DarkCountModel m{p_dark, eta0, 0.0};
    nlohmann::json j{{"p_thresh", p_thresh},
                     {"p_dark", p_dark},
                     {"eta0", eta0},
                     {"attenuation_km", attenuation},
                     {"l_max_km", l_max},
                     {"p_err_at_l0", resmodel::effective_click_error(m)},
                     {"stamp", report::Stamp::make(common.seed, {{"p_dark", p_dark}}).to_json()}};
    if (!common.out.empty()) report::write_json(common.out, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_verify_blindness(const CommonOpts& common) {
    RngStream rng(common.seed, "verify");
    int checks = 0, failures = 0;
    auto check_family = [&](const CircuitIR& circuit) {
        const size_t k = circuit.n_b_theta();
        AngleSet set(circuit.c);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> a(k), b(k);
            for (size_t i = 0; i < k; ++i) {
                a[i] = set.angle(int64_t(rng.below(set.size())));
                b[i] = set.angle(int64_t(rng.below(set.size())));
            }
            const double dist = analysis::verify_blindness(circuit, a, b);
            ++checks;
            if (dist > 1e-9) ++failures;
        }
    };
    check_family(circuitgen::build_bricklayer(2, 1, 1.0, 3, common.seed));
    check_family(circuitgen::build_brickwork_cell(circuitgen::BrickworkCellMode::TwoSingleQubit));
    check_family(circuitgen::build_pauli_rotation(PauliString::parse("XZ"), 1, 3));
    std::cout << "verify-blindness: " << checks << " checks, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

int run_serve(const CommonOpts& common, const std::string& bind, const std::string& model_path,
              const std::string& transcript, int rtt_ms) {
    ErrorModel model;
    if (!model_path.empty()) model = ErrorModel::from_json(load_config(model_path));
    netlink::ServerOptions opts;
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("--bind needs host:port");
    opts.bind_host = bind.substr(0, colon);
    opts.port = std::stoi(bind.substr(colon + 1));
    opts.seed = common.seed;
    opts.transcript_path = transcript;
    opts.rtt_ms = rtt_ms;
    netlink::Server server(model, opts);
    const int port = server.start();
    std::cout << "serve: listening on " << opts.bind_host << ":" << port << "\n";
    netlink::ServerReport rep = server.serve_one();
    if (!rep.ok) {
        std::cerr << "serve: session failed: " << rep.error << "\n";
        return 1;
    }
    std::cout << "serve: session complete, " << rep.gates_completed << " gates, "
              << rep.photons_sent << " photons\n";
    return 0;
}

int run_client_cmd(const CommonOpts& common, const std::string& connect,
                   const std::string& program_path, const std::string& model_path,
                   const std::string& transcript) {
    ErrorModel model;
    if (!model_path.empty()) model = ErrorModel::from_json(load_config(model_path));
    CircuitIR program = CircuitIR::from_json(load_config(program_path));
    netlink::ClientOptions opts;
    const auto colon = connect.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("--connect needs host:port");
    opts.host = connect.substr(0, colon);
    opts.port = std::stoi(connect.substr(colon + 1));
    opts.seed = common.seed;
    opts.transcript_path = transcript;
    netlink::ClientReport rep = netlink::run_client(program, model, opts);
    if (!rep.ok) {
        std::cerr << "client: session failed: " << rep.error << "\n";
        return 1;
    }
    std::cout << "client: " << rep.gates.size() << " delegated gates, state digest "
              << std::hex << rep.state_digest << std::dec << ", audit "
              << (rep.audit_ok ? "clean" : "LEAK") << "\n";
    return rep.audit_ok ? 0 : 1;
}

int run_selftest(const CommonOpts& common) {
    int invariants = 0;
    auto note = [&](const std::string& what) {
        ++invariants;
        std::cout << "  ok: " << what << "\n";
    };

    stab::SurfaceCodePatch(3).self_test();
    stab::SurfaceCodePatch(5).self_test();
    note("surface code layouts (d = 3, 5)");

    for (int c = 1; c <= 4; ++c) {
        AngleSet set(c);
        for (uint32_t p = 0; p < set.size(); ++p) {
            BGateSession s(set, p);
            int iters = 0;
            while (s.status() != BGateSession::Status::Done) {
                s.photon_sent();
                s.photon_measured(0);
                s.teleport_result(1);
                if (++iters > c) throw std::runtime_error("B-gate iteration bound violated");
            }
            if (s.implemented_index() != p) throw std::runtime_error("B-gate telescoping broken");
        }
    }
    note("B-gate termination and telescoping (c = 1..4, exhaustive)");

    CircuitIR cell = circuitgen::build_brickwork_cell(circuitgen::BrickworkCellMode::TwoSingleQubit);
    if (cell.n_b_theta() != 7) throw std::runtime_error("brickwork cell slot count");
    note("7-slot brickwork cell");

    RngStream rng(common.seed, "selftest");
    std::vector<double> a(7), b(7);
    AngleSet set3(3);
    for (int i = 0; i < 7; ++i) {
        a[size_t(i)] = set3.angle(int64_t(rng.below(8)));
        b[size_t(i)] = set3.angle(int64_t(rng.below(8)));
    }
    if (analysis::verify_blindness(cell, a, b) > 1e-9)
        throw std::runtime_error("brickwork cell blindness violated");
    note("brickwork cell blindness");

    auto steane = stab::steane_blind_gates(stab::SteaneGate::CX);
    if (!steane.all_ok) throw std::runtime_error("Steane CX branches failed");
    note("Steane transversal CX branches");

    CircuitIR prog = circuitgen::build_bricklayer(3, 2, 1.0, 3, common.seed);
    ErrorModel m;
    m.eta = 0.8;
    auto local1 = netlink::run_program_local(prog, m, common.seed, common.seed + 1);
    auto local2 = netlink::run_program_local(prog, m, common.seed, common.seed + 1);
    if (local1.state_digest != local2.state_digest)
        throw std::runtime_error("seeded in-process run not reproducible");
    note("seeded protocol reproducibility");

    std::cout << "selftest: " << invariants << " invariant groups passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bqcsim: blind-computation protocol simulator and analysis toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    ErrorModel default_model;

    // shared model flags (negative means "keep config/default")
    double eps_comm = -1, eps_loc = -1, eta = -1, p_dark = -1, r_h = -1;
    int c_res = 0;
    std::string model_path;
    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--eps-comm", eps_comm, "per-B_theta depolarizing probability");
        cmd->add_option("--eps-loc", eps_loc, "per-2Q-gate depolarizing probability");
        cmd->add_option("--eta", eta, "photon success probability");
        cmd->add_option("--p-dark", p_dark, "dark-count probability per window");
        cmd->add_option("--rh", r_h, "hiding fraction");
        cmd->add_option("--c", c_res, "angle resolution c");
        cmd->add_option("--model", model_path, "error-model JSON file");
    };

    // tradeoff
    auto* tradeoff = app.add_subcommand("tradeoff", "fidelity/efficiency/security sweep");
    int t_n = 8, t_depth = 12;
    std::vector<double> t_grid;
    std::string t_mode = "auto";
    tradeoff->add_option("--qubits", t_n);
    tradeoff->add_option("--depth", t_depth);
    tradeoff->add_option("--grid", t_grid, "R_h grid");
    tradeoff->add_option("--mode", t_mode, "auto|exact|trajectory");
    add_common(tradeoff, common);
    add_model_flags(tradeoff);

    // express
    auto* express = app.add_subcommand("express", "frame-potential expressibility estimation");
    int e_n = 4, e_k = 2;
    std::vector<int> e_depths;
    std::string e_family = "bricklayer";
    bool e_continuous = false;
    express->add_option("--qubits", e_n);
    express->add_option("--k", e_k);
    express->add_option("--depths", e_depths);
    express->add_option("--family", e_family, "bricklayer|pauli-rotation|haar");
    express->add_flag("--continuous", e_continuous, "continuous-uniform angles");
    add_common(express, common);
    add_model_flags(express);

    // qec-run
    auto* qec = app.add_subcommand("qec-run", "logical random-circuit Monte Carlo");
    int q_d = 3, q_n = 2, q_layers = 10;
    double q_rh = 1.0;
    std::string q_se = "local", q_graph;
    qec->add_option("--d", q_d);
    qec->add_option("--qubits", q_n);
    qec->add_option("--layers", q_layers);
    qec->add_option("--rh", q_rh);
    qec->add_option("--se", q_se, "local|blind");
    qec->add_option("--export-graph", q_graph, "write detector graphs to file");
    add_common(qec, common);
    add_model_flags(qec);

    // qec-threshold
    auto* thresh = app.add_subcommand("qec-threshold", "distance-crossing threshold sweep");
    std::string th_axis = "comm", th_se = "local";
    double th_rh = 1.0;
    std::vector<int> th_d;
    std::vector<double> th_grid;
    int th_qubits = 2, th_layers = 10;
    thresh->add_option("--axis", th_axis, "comm|loc|both");
    thresh->add_option("--rh", th_rh);
    thresh->add_option("--se", th_se, "local|blind");
    thresh->add_option("--d", th_d, "distances (default 3,5)");
    thresh->add_option("--grid", th_grid, "physical error grid");
    thresh->add_option("--qubits", th_qubits);
    thresh->add_option("--layers", th_layers);
    add_common(thresh, common);

    // gate-ceiling
    auto* ceiling = app.add_subcommand("gate-ceiling", "max logical gates at a target fidelity");
    double gc_f = 0.5, gc_pgate = 1e-4, gc_rh = 1.0;
    int gc_n = 4, gc_layers = 10, gc_rounds = 1;
    ceiling->add_option("--fidelity", gc_f);
    ceiling->add_option("--p-gate", gc_pgate);
    ceiling->add_option("--qubits", gc_n);
    ceiling->add_option("--layers", gc_layers);
    ceiling->add_option("--rounds", gc_rounds);
    ceiling->add_option("--rh", gc_rh);
    add_common(ceiling, common);

    // timing
    auto* timing = app.add_subcommand("timing", "protocol duration model");
    std::string tm_preset = "siv", tm_profile;
    double tm_gates = 1e6, tm_layers = 1e5;
    timing->add_option("--preset", tm_preset, "siv|neutral-atom");
    timing->add_option("--profile", tm_profile, "platform profile JSON");
    timing->add_option("--blind-gates", tm_gates);
    timing->add_option("--local-layers", tm_layers);
    add_common(timing, common);
    add_model_flags(timing);

    // darkcount
    auto* dark = app.add_subcommand("darkcount", "dark-count limits and max distance");
    double dc_thresh = 0.10, dc_pdark = 2e-7, dc_eta0 = 0.885, dc_att = 50.0;
    dark->add_option("--p-thresh", dc_thresh);
    dark->add_option("--p-dark", dc_pdark);
    dark->add_option("--eta0", dc_eta0);
    dark->add_option("--attenuation", dc_att);
    add_common(dark, common);

    // verify-blindness
    auto* verify = app.add_subcommand("verify-blindness", "trace-distance blindness checks");
    add_common(verify, common);

    // serve / client
    auto* serve = app.add_subcommand("serve", "run the protocol server (one session)");
    std::string sv_bind = "127.0.0.1:0", sv_transcript;
    int sv_rtt = 0;
    serve->add_option("--bind", sv_bind, "host:port (port 0 = ephemeral)");
    serve->add_option("--transcript", sv_transcript);
    serve->add_option("--rtt-ms", sv_rtt, "injected round-trip latency");
    add_common(serve, common);
    add_model_flags(serve);

    auto* client = app.add_subcommand("client", "run the protocol client");
    std::string cl_connect = "127.0.0.1:7777", cl_program, cl_transcript;
    client->add_option("--connect", cl_connect, "host:port");
    client->add_option("--program", cl_program, "circuit JSON (with secret angles)")->required();
    client->add_option("--transcript", cl_transcript);
    add_common(client, common);
    add_model_flags(client);

    auto* selftest = app.add_subcommand("selftest", "run the invariant battery");
    add_common(selftest, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (tradeoff->parsed())
            return run_tradeoff(common, t_n, t_depth, t_grid,
                                model_from_flags(eps_comm, eps_loc, eta, p_dark, r_h, c_res, model_path),
                                t_mode);
        if (express->parsed())
            return run_express(common, e_n, e_k, e_depths, e_family, c_res > 0 ? c_res : 3,
                               e_continuous);
        if (qec->parsed())
            return run_qec(common, q_d, q_n, q_layers, q_rh,
                           model_from_flags(eps_comm, eps_loc, eta, p_dark, r_h, c_res, model_path),
                           q_se, q_graph);
        if (thresh->parsed())
            return run_threshold(common, th_axis, th_rh, th_se, th_d, th_grid, th_qubits, th_layers);
        if (ceiling->parsed())
            return run_gate_ceiling(common, gc_f, gc_pgate, gc_n, gc_layers, gc_rounds, gc_rh);
        if (timing->parsed())
            return run_timing(common, tm_preset, tm_profile, tm_gates, tm_layers,
                              model_from_flags(eps_comm, eps_loc, eta, p_dark, r_h, c_res, model_path));
        if (dark->parsed()) return run_darkcount(common, dc_thresh, dc_pdark, dc_eta0, dc_att);
        if (verify->parsed()) return run_verify_blindness(common);
        if (serve->parsed())
            return run_serve(common, sv_bind, model_path, sv_transcript, sv_rtt);
        if (client->parsed())
            return run_client_cmd(common, cl_connect, cl_program, model_path, cl_transcript);
        if (selftest->parsed()) return run_selftest(common);
    } catch (const CapacityError& ex) {
        std::cerr << "capacity violation: " << ex.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config violation: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "runtime failure: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
