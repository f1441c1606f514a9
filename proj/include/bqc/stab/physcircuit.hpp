#pragma once

#include <cstdint>
#include <vector>

namespace bqc::stab {

// Flat Clifford + Pauli-channel circuit over physical qubits. Only what the
// QEC Monte Carlo needs: CX, H, Z-measurement/reset, and depolarizing noise
// sites. The simulator works in the deviation (Pauli-frame) picture, so
// ideal state preparation never appears explicitly.
enum class PhysOpKind : uint8_t { CX, H, MeasureZ, ResetZ, Dep1, Dep2 };

struct PhysOp {
    PhysOpKind kind;
    int32_t q0 = -1;
    int32_t q1 = -1;       // CX target / second depolarizing operand
    double rate = 0.0;     // Dep1/Dep2
    int32_t meas_index = -1;  // MeasureZ
};

struct PhysCircuit {
    int n_qubits = 0;
    std::vector<PhysOp> ops;
    int n_measurements = 0;

    int add_measure(int q) {
        ops.push_back({PhysOpKind::MeasureZ, q, -1, 0.0, n_measurements});
        return n_measurements++;
    }
    void add_cx(int c, int t) { ops.push_back({PhysOpKind::CX, c, t, 0.0, -1}); }
    void add_h(int q) { ops.push_back({PhysOpKind::H, q, -1, 0.0, -1}); }
    void add_reset(int q) { ops.push_back({PhysOpKind::ResetZ, q, -1, 0.0, -1}); }
    void add_dep1(int q, double rate) {
        if (rate > 0) ops.push_back({PhysOpKind::Dep1, q, -1, rate, -1});
    }
    void add_dep2(int a, int b, double rate) {
        if (rate > 0) ops.push_back({PhysOpKind::Dep2, a, b, rate, -1});
    }
};

// Measurement-flip signature of a single fault: which measurements flip when
// a Pauli deviation is inserted at a given op position.
class FaultPropagator {
public:
    explicit FaultPropagator(const PhysCircuit& circuit);

    // X or Z deviation on `qubit` inserted just after ops[pos]. Returns the
    // sorted indices of flipped measurements.
    std::vector<int> propagate(size_t pos, int qubit, bool is_z) const;

private:
    const PhysCircuit& circuit_;
    std::vector<std::vector<int32_t>> ops_by_qubit_;  // op indices touching q
};

}  // namespace bqc::stab
