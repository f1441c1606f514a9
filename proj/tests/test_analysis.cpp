#include <doctest.h>

#include <cmath>

#include "bqc/analysis.hpp"
#include "bqc/circuitgen.hpp"

using namespace bqc;
using namespace bqc::analysis;

namespace {

CircuitIR blind_2q_gate() {
    // CZ H_0 B H_0 CZ, the delegated entangling block
    CircuitIR ir;
    ir.n_qubits = 2;
    ir.c = 3;
    ir.family = "uc";
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {0}));  // prepare |+>
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {1}));
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CZ, {0, 1}));
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {0}));
    ir.gates.push_back(CircuitGate::b_theta(0, 0));
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {0}));
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CZ, {0, 1}));
    return ir;
}

}  // namespace

TEST_CASE("equal angles give zero trace distance") {
    CircuitIR ir = blind_2q_gate();
    std::vector<double> a = {0.7};
    CHECK(verify_blindness(ir, a, a) < 1e-14);
}

TEST_CASE("outcome-averaged blind 2Q gate hides the angle") {
    CircuitIR ir = blind_2q_gate();
    std::vector<double> a = {0.9};
    std::vector<double> b = {0.9 + kPi / 3};
    CHECK(verify_blindness(ir, a, b) < 1e-10);
}

TEST_CASE("skipping the outcome average leaks the angle (negative control)") {
    CircuitIR ir = blind_2q_gate();
    std::vector<double> a = {0.9};
    std::vector<double> b = {0.9 + kPi};
    CHECK(verify_blindness(ir, a, b, /*average_outcomes=*/false) > 0.1);
}

TEST_CASE("every blind angle assignment of the 7-photon cell is hidden") {
    CircuitIR cell = circuitgen::build_brickwork_cell(circuitgen::BrickworkCellMode::TwoSingleQubit);
    RngStream rng(31, "cellblind");
    AngleSet set(3);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> a(7), b(7);
        for (int i = 0; i < 7; ++i) {
            a[size_t(i)] = set.angle(int64_t(rng.below(8)));
            b[size_t(i)] = set.angle(int64_t(rng.below(8)));
        }
        CHECK(verify_blindness(cell, a, b) < 1e-9);
    }
}

TEST_CASE("circuits with different revealed structure are rejected") {
    CircuitIR a = circuitgen::build_bricklayer(2, 1, 1.0, 3, 5);
    CircuitIR b = circuitgen::build_bricklayer(2, 2, 1.0, 3, 5);
    CHECK_THROWS(verify_blindness(a, b));
}

TEST_CASE("tradeoff sweep basics") {
    ErrorModel model;
    model.eps_comm = 0.05;
    model.eps_loc = 0.005;
    model.eta = 0.8;
    model.c = 3;
    std::vector<double> grid = {0.0, 0.5, 1.0};
    TradeoffReport rep = tradeoff_sweep(3, 2, grid, model, 40, 7, NoiseMode::Exact);
    REQUIRE(rep.points.size() == 3);
    SUBCASE("R_h = 0: unit efficiency, single unitary, only local errors") {
        const auto& p0 = rep.points[0];
        CHECK(p0.efficiency == doctest::Approx(1.0));
        CHECK(p0.log2_unitaries == 0.0);
        CHECK(p0.fidelity > 0.9);  // only the few 2Q channels bite
    }
    SUBCASE("fidelity decreases as hiding grows") {
        CHECK(rep.points[0].fidelity > rep.points[2].fidelity);
    }
    SUBCASE("every point respects the closed-form lower bound within 2 sigma") {
        for (const auto& p : rep.points)
            CHECK(p.fidelity >= p.lower_bound - 2.0 * p.fidelity_stderr);
    }
    SUBCASE("fidelity floor") {
        for (const auto& p : rep.points)
            CHECK(p.fidelity >= std::pow(2.0, -3) - 3.0 * p.fidelity_stderr);
    }
}

TEST_CASE("trajectory mode agrees with exact mode") {
    ErrorModel model;
    model.eps_comm = 0.05;
    model.eps_loc = 0.01;
    model.eta = 0.8;
    std::vector<double> grid = {1.0};
    TradeoffReport exact = tradeoff_sweep(3, 2, grid, model, 60, 11, NoiseMode::Exact);
    TradeoffReport traj = tradeoff_sweep(3, 2, grid, model, 4000, 11, NoiseMode::Trajectory);
    const double sigma = std::sqrt(exact.points[0].fidelity_stderr * exact.points[0].fidelity_stderr +
                                   traj.points[0].fidelity_stderr * traj.points[0].fidelity_stderr);
    CHECK(std::abs(exact.points[0].fidelity - traj.points[0].fidelity) < 3.5 * sigma + 0.01);
}

TEST_CASE("frame potential of a single-unitary ensemble is d^{2k} exactly") {
    // R_h = 0 bricklayer has zero blind gates: every sample is the same
    // unitary, so |Tr(U^dag V)|^{2k} = |Tr I|^{2k} = (2^n)^{2k} = 256
    FramePotentialOptions opts;
    opts.r_h = 0.0;
    auto est = frame_potential(EnsembleFamily::Bricklayer, 2, 1, 2, 1000, 13, opts);
    CHECK(est.blind_gates == 0);
    CHECK(est.mean == doctest::Approx(256.0).epsilon(1e-10));
    CHECK(est.stderr_ < 1e-9);
}

TEST_CASE("Haar ensemble hits the k! floor") {
    FramePotentialOptions opts;
    auto est = frame_potential(EnsembleFamily::Haar, 3, 1, 2, 3000, 17, opts);
    CHECK(std::abs(est.mean - 2.0) < 3.0 * est.stderr_ + 0.05);
    auto est1 = frame_potential(EnsembleFamily::Haar, 3, 1, 1, 3000, 19, opts);
    CHECK(std::abs(est1.mean - 1.0) < 3.0 * est1.stderr_ + 0.05);
}

TEST_CASE("deep bricklayer converges to the Haar floor") {
    FramePotentialOptions opts;
    auto est = frame_potential(EnsembleFamily::Bricklayer, 3, 20, 2, 3000, 23, opts);
    CHECK(std::abs(est.mean - 2.0) < 3.0 * est.stderr_ + 0.1);
    CHECK(est.mean >= 2.0 - 3.0 * est.stderr_);  // Haar is a floor
}

TEST_CASE("frame potential estimator ignores global phases") {
    // |Tr(U^dag V)| is phase invariant by construction; verify numerically
    RngStream rng(29, "phase");
    Mat u = Mat::Identity(4, 4) * std::exp(cx(0, rng.uniform(0, 2 * kPi)));
    Mat v = Mat::Identity(4, 4);
    CHECK(std::abs(std::abs((u.adjoint() * v).trace()) - 4.0) < 1e-12);
}

TEST_CASE("fit_decay recovers synthetic exponentials") {
    std::vector<FramePotentialEstimate> est;
    const double a = 3.0, c = 5.0;
    for (int l = 1; l <= 8; ++l) {
        FramePotentialEstimate e;
        e.depth = l;
        e.blind_gates = size_t(l * 10);
        e.delta_eps = a * std::exp(-double(l) / c);
        e.delta_eps_err = e.delta_eps * 0.002;
        e.mean = 2.0 + std::pow(e.delta_eps / 16.0, 2);  // consistent n = 2, k = 2
        e.stderr_ = 1e-6;
        est.push_back(e);
    }
    DecayFit fit = fit_decay(est);
    CHECK(fit.amplitude == doctest::Approx(a).epsilon(0.01));
    CHECK(fit.scale == doctest::Approx(c).epsilon(0.01));
    CHECK(fit.points_used == 8);
}

TEST_CASE("fit_decay needs enough live points") {
    std::vector<FramePotentialEstimate> est(3);
    for (int i = 0; i < 3; ++i) {
        est[size_t(i)].depth = i + 1;
        est[size_t(i)].delta_eps = 1.0;
        est[size_t(i)].delta_eps_err = 0.01;
    }
    CHECK_THROWS(fit_decay(est));
}

TEST_CASE("match_expressibility identity and scaled-decay pairings") {
    auto synth = [](double a, double c, int depths, int gates_per_layer) {
        std::vector<FramePotentialEstimate> est;
        for (int l = 1; l <= depths; ++l) {
            FramePotentialEstimate e;
            e.depth = l;
            e.blind_gates = size_t(l * gates_per_layer);
            e.delta_eps = a * std::exp(-double(l) / c);
            e.delta_eps_err = e.delta_eps * 0.001;
            est.push_back(e);
        }
        return est;
    };
    SUBCASE("a family matched against itself pairs one to one") {
        auto fam = synth(3.0, 5.0, 8, 10);
        auto pairs = match_expressibility(fam, fam);
        REQUIRE(pairs.size() >= 6);
        LineFit fit = fit_line(pairs);
        CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("doubled decay scale halves the required depth slope") {
        auto fast = synth(3.0, 2.5, 20, 1);   // family A: decays quickly per layer
        auto slow = synth(3.0, 5.0, 20, 1);   // family B: C_B = 2 C_A
        auto pairs = match_expressibility(slow, fast);
        REQUIRE(pairs.size() >= 4);
        LineFit fit = fit_line(pairs);
        // equal delta_eps: l_A / C_A = l_B / C_B -> slope C_A/C_B = 0.5
        CHECK(fit.slope == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("disjoint ranges are rejected") {
        auto high = synth(100.0, 5.0, 3, 1);
        auto low = synth(0.001, 5.0, 3, 1);
        CHECK_THROWS(match_expressibility(high, low));
    }
}

TEST_CASE("argument validation") {
    ErrorModel model;
    std::vector<double> grid = {0.5};
    CHECK_THROWS(tradeoff_sweep(3, 2, grid, model, 1, 1));     // too few shots
    CHECK_THROWS(tradeoff_sweep(11, 2, grid, model, 10, 1));   // capacity
    CHECK_THROWS(frame_potential(EnsembleFamily::Haar, 3, 1, 4, 2000, 1));  // k
    CHECK_THROWS(frame_potential(EnsembleFamily::Haar, 3, 1, 2, 100, 1));   // M too small
    CHECK_THROWS(frame_potential(EnsembleFamily::Haar, 9, 1, 2, 2000, 1));  // capacity
}
