#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bqc/gates.hpp"
#include "bqc/statevec.hpp"

namespace bqc {

// Per-qubit Pauli byproduct record X^a Z^b, tracked projectively (the sign of
// the conjugated Pauli is discarded; it never affects measurement statistics).
class PauliFrame {
public:
    PauliFrame() = default;
    explicit PauliFrame(int n_qubits) : a_(size_t(n_qubits), 0), b_(size_t(n_qubits), 0) {}

    int n_qubits() const { return static_cast<int>(a_.size()); }
    uint8_t x_bit(int q) const { return a_[size_t(q)]; }
    uint8_t z_bit(int q) const { return b_[size_t(q)]; }
    void set(int q, uint8_t a, uint8_t b) { a_[size_t(q)] = a & 1; b_[size_t(q)] = b & 1; }
    void flip_x(int q) { a_[size_t(q)] ^= 1; }
    void flip_z(int q) { b_[size_t(q)] ^= 1; }

    bool is_identity() const {
        for (size_t i = 0; i < a_.size(); ++i)
            if (a_[i] || b_[i]) return false;
        return true;
    }

    bool operator==(const PauliFrame& o) const { return a_ == o.a_ && b_ == o.b_; }

    // Frame map under C (X^a Z^b) C^dag = +/- X^a' Z^b'. Clifford gates only.
    void conjugate(const GateSpec& gate, std::span<const int> qubits) {
        if (!gate.is_clifford()) throw std::invalid_argument("frame conjugation requires a Clifford gate");
        switch (gate.kind) {
            case GateKind::I:
            case GateKind::X:
            case GateKind::Y:
            case GateKind::Z:
                return;  // Pauli conjugation only flips signs
            case GateKind::H: {
                int q = qubits[0];
                std::swap(a_[size_t(q)], b_[size_t(q)]);
                return;
            }
            case GateKind::S:
            case GateKind::Sdg: {
                // S X S^dag = Y ~ X Z, S Z S^dag = Z
                int q = qubits[0];
                b_[size_t(q)] ^= a_[size_t(q)];
                return;
            }
            case GateKind::CX: {
                // X_c -> X_c X_t, Z_t -> Z_c Z_t
                int c = qubits[0], t = qubits[1];
                a_[size_t(t)] ^= a_[size_t(c)];
                b_[size_t(c)] ^= b_[size_t(t)];
                return;
            }
            case GateKind::CZ: {
                // X_1 -> X_1 Z_2, X_2 -> Z_1 X_2
                int q0 = qubits[0], q1 = qubits[1];
                b_[size_t(q1)] ^= a_[size_t(q0)];
                b_[size_t(q0)] ^= a_[size_t(q1)];
                return;
            }
            case GateKind::Swap: {
                int q0 = qubits[0], q1 = qubits[1];
                std::swap(a_[size_t(q0)], a_[size_t(q1)]);
                std::swap(b_[size_t(q0)], b_[size_t(q1)]);
                return;
            }
            default:
                throw std::invalid_argument("unsupported Clifford for frame conjugation");
        }
    }
    void conjugate(const GateSpec& gate, int q) { int qs[1] = {q}; conjugate(gate, qs); }
    void conjugate(const GateSpec& gate, int q0, int q1) { int qs[2] = {q0, q1}; conjugate(gate, qs); }

    enum class MeasurementKind { PhotonZ, Teleport };

    // Photon-basis measurements leave a Z^s byproduct; teleport-style
    // measurements leave an X^s byproduct on the affected qubit.
    void absorb_measurement(int qubit, int s, MeasurementKind kind) {
        if (s == 0) return;
        if (kind == MeasurementKind::PhotonZ)
            flip_z(qubit);
        else
            flip_x(qubit);
    }

    // The frame as an n-qubit unitary (test use).
    Mat as_unitary(int n) const {
        Mat u = Mat::Identity(Eigen::Index(1) << n, Eigen::Index(1) << n);
        for (int q = 0; q < n; ++q) {
            Mat p = Mat::Identity(2, 2);
            if (a_[size_t(q)]) p = gatemat::pauli_x() * p;
            if (b_[size_t(q)]) p = p * gatemat::pauli_z();
            if (a_[size_t(q)] || b_[size_t(q)]) {
                int qs[1] = {q};
                u = embed_gate(p, qs, n) * u;
            }
        }
        return u;
    }

private:
    std::vector<uint8_t> a_, b_;
};

// Staged angle chooser for the delegated Euler sequence
// Rz(t1) -> H -> Rz(t2) -> H -> Rz(t3) acting through frame X^a Z^b.
// t1 is fixed up front; t2 and t3 depend on the realized outcomes s1, s2.
// After outcomes (s1, s2, s3) the net action is P' Rz(gamma) Rx(beta) Rz(alpha)
// with P' = X^{s2+a} Z^{s3+s1+b}.
struct AdaptiveAngles {
    double theta1;
    std::function<double(int)> theta2;          // s1 -> angle
    std::function<double(int)> theta3;          // s2 -> angle
    std::function<PauliFrame(int, int, int)> final_frame;  // (s1,s2,s3) -> P'
};

inline AdaptiveAngles adaptive_angles(const PauliFrame& frame, int qubit,
                                      double alpha, double beta, double gamma) {
    const int a = frame.x_bit(qubit), b = frame.z_bit(qubit);
    AdaptiveAngles out;
    out.theta1 = (a ? -alpha : alpha);
    out.theta2 = [b, beta](int s1) { return ((s1 + b) & 1) ? -beta : beta; };
    out.theta3 = [a, gamma](int s2) { return ((s2 + a) & 1) ? -gamma : gamma; };
    out.final_frame = [frame, qubit, a, b](int s1, int s2, int s3) {
        PauliFrame f = frame;
        f.set(qubit, uint8_t((s2 + a) & 1), uint8_t((s3 + s1 + b) & 1));
        return f;
    };
    return out;
}

}  // namespace bqc
