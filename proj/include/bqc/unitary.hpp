#pragma once

#include <span>

#include "bqc/circuit.hpp"
#include "bqc/gates.hpp"

namespace bqc {

// In-place left multiplication M <- (G on qubits) * M, column by column.
inline void apply_gate_to_matrix(Mat& m, const Mat& g, std::span<const int> qubits) {
    const Eigen::Index dim = m.rows();
    if (qubits.size() == 1) {
        const size_t mask = size_t(1) << qubits[0];
        const cx u00 = g(0, 0), u01 = g(0, 1), u10 = g(1, 0), u11 = g(1, 1);
        for (Eigen::Index col = 0; col < m.cols(); ++col) {
            cx* d = m.col(col).data();
            for (size_t i = 0; i < size_t(dim); ++i) {
                if (i & mask) continue;
                const size_t j = i | mask;
                const cx a0 = d[i], a1 = d[j];
                d[i] = u00 * a0 + u01 * a1;
                d[j] = u10 * a0 + u11 * a1;
            }
        }
    } else {
        const size_t m0 = size_t(1) << qubits[0];
        const size_t m1 = size_t(1) << qubits[1];
        for (Eigen::Index col = 0; col < m.cols(); ++col) {
            cx* d = m.col(col).data();
            for (size_t i = 0; i < size_t(dim); ++i) {
                if ((i & m0) || (i & m1)) continue;
                const size_t i0 = i, i1 = i | m0, i2 = i | m1, i3 = i | m0 | m1;
                const cx a0 = d[i0], a1 = d[i1], a2 = d[i2], a3 = d[i3];
                d[i0] = g(0, 0) * a0 + g(0, 1) * a1 + g(0, 2) * a2 + g(0, 3) * a3;
                d[i1] = g(1, 0) * a0 + g(1, 1) * a1 + g(1, 2) * a2 + g(1, 3) * a3;
                d[i2] = g(2, 0) * a0 + g(2, 1) * a1 + g(2, 2) * a2 + g(2, 3) * a3;
                d[i3] = g(3, 0) * a0 + g(3, 1) * a1 + g(3, 2) * a2 + g(3, 3) * a3;
            }
        }
    }
}

// Full unitary of the circuit's ideal (frame-corrected) action. Blind angles
// may be overridden positionally.
inline Mat circuit_unitary(const CircuitIR& ir, std::span<const double> blind_angle_override = {}) {
    const Eigen::Index dim = Eigen::Index(1) << ir.n_qubits;
    Mat u = Mat::Identity(dim, dim);
    AngleSet set(ir.c);
    size_t blind_i = 0;
    for (const auto& g : ir.gates) {
        switch (g.kind) {
            case CircuitGateKind::BTheta: {
                double theta = set.angle(g.p);
                if (!blind_angle_override.empty()) theta = blind_angle_override[blind_i++];
                apply_gate_to_matrix(u, gatemat::rz(theta), g.qubits);
                break;
            }
            case CircuitGateKind::LocalClifford:
                apply_gate_to_matrix(u, GateSpec::named(g.clifford).matrix(), g.qubits);
                break;
            case CircuitGateKind::Local1QRot:
                apply_gate_to_matrix(u, gatemat::rz(g.theta), g.qubits);
                break;
            case CircuitGateKind::Local2Q:
                apply_gate_to_matrix(u, local_2q_unitary(g.theta), g.qubits);
                break;
        }
    }
    return u;
}

}  // namespace bqc
