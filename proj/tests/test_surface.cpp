#include <doctest.h>

#include "bqc/rng.hpp"
#include "bqc/stab/logical_circuit.hpp"
#include "bqc/stab/surface.hpp"
#include "bqc/stab/tableau.hpp"

using namespace bqc;
using namespace bqc::stab;

TEST_CASE("layout self-test passes for d = 3, 5, 7") {
    for (int d : {3, 5, 7}) {
        SurfaceCodePatch patch(d);
        CHECK_NOTHROW(patch.self_test());
        CHECK(patch.n_data() == d * d);
        CHECK(patch.n_stabilizers() == d * d - 1);
    }
}

TEST_CASE("bulk plaquettes have four data qubits, boundary two") {
    SurfaceCodePatch patch(3);
    int four = 0, two = 0;
    for (const auto& s : patch.stabilizers) {
        if (s.data.size() == 4) ++four;
        else if (s.data.size() == 2) ++two;
        else CHECK(false);
    }
    CHECK(four == 4);
    CHECK(two == 4);
}

TEST_CASE("even distance and tiny distances are rejected") {
    CHECK_THROWS(SurfaceCodePatch(2));
    CHECK_THROWS(SurfaceCodePatch(1));
    CHECK_THROWS(SurfaceCodePatch(4));
}

TEST_CASE("noiseless syndrome extraction repeats deterministically") {
    // exercises the interleaved CX schedule end to end on the exact state:
    // consecutive rounds must agree on every stabilizer outcome
    for (int d : {3, 5}) {
        LogicalRunConfig config;
        config.n_qubits = 1;
        config.n_layers = 0;
        config.n_rounds = 3;
        config.distance = d;
        config.seed = 7;
        RngStream structure_rng(7, "se");
        BuiltCircuit built = build_logical_circuit(config, structure_rng);

        Tableau tab(built.circuit.n_qubits);
        RngStream mrng(9, "meas");
        std::vector<int> outcomes(size_t(built.circuit.n_measurements), 0);
        for (const auto& op : built.circuit.ops) {
            switch (op.kind) {
                case PhysOpKind::CX: tab.apply(GateKind::CX, op.q0, op.q1); break;
                case PhysOpKind::H: tab.apply(GateKind::H, op.q0); break;
                case PhysOpKind::ResetZ: tab.reset_z(op.q0, mrng); break;
                case PhysOpKind::MeasureZ:
                    outcomes[size_t(op.meas_index)] = tab.measure_z(op.q0, mrng).outcome;
                    break;
                default: break;
            }
        }
        // every detector after round 0 compares consecutive rounds and must
        // be quiet; final reconstructed detectors must be quiet too
        for (const auto& det : built.layout.detectors) {
            if (det.round == 0) continue;
            int parity = 0;
            for (int m : det.measurements) parity ^= outcomes[size_t(m)];
            CHECK(parity == 0);
        }
    }
}
