#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace bqc {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Rotation convention used throughout: R_z(t) = exp(+i t Z / 2) = diag(e^{it/2}, e^{-it/2}),
// R_x(t) = exp(+i t X / 2). All delegated-rotation algebra (angle doubling,
// adaptive Euler angles, Trotter angles t_j = -2 h_j t / n_steps) is written
// against this sign choice.
enum class GateKind {
    I, X, Y, Z, H, S, Sdg, T, Tdg,
    Rz, Rx, Ry,
    CX, CZ, Swap,
    U1q,  // arbitrary single-qubit matrix
    U2q,  // arbitrary two-qubit matrix
};

struct GateSpec {
    GateKind kind = GateKind::I;
    double theta = 0.0;  // rotation angle, for Rz/Rx/Ry
    Mat custom;          // for U1q/U2q

    static GateSpec named(GateKind k) { return GateSpec{k, 0.0, {}}; }
    static GateSpec rz(double t) { return GateSpec{GateKind::Rz, t, {}}; }
    static GateSpec rx(double t) { return GateSpec{GateKind::Rx, t, {}}; }
    static GateSpec ry(double t) { return GateSpec{GateKind::Ry, t, {}}; }
    static GateSpec u1q(Mat m) { return GateSpec{GateKind::U1q, 0.0, std::move(m)}; }
    static GateSpec u2q(Mat m) { return GateSpec{GateKind::U2q, 0.0, std::move(m)}; }

    bool two_qubit() const {
        return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::Swap ||
               kind == GateKind::U2q;
    }

    Mat matrix() const;
    bool is_clifford() const {
        switch (kind) {
            case GateKind::I: case GateKind::X: case GateKind::Y: case GateKind::Z:
            case GateKind::H: case GateKind::S: case GateKind::Sdg:
            case GateKind::CX: case GateKind::CZ: case GateKind::Swap:
                return true;
            default:
                return false;
        }
    }
};

namespace gatemat {

inline Mat identity2() { return Mat::Identity(2, 2); }
inline Mat pauli_x() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat pauli_y() { Mat m(2, 2); m << 0, cx(0, -1), cx(0, 1), 0; return m; }
inline Mat pauli_z() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }
inline Mat hadamard() { Mat m(2, 2); double s = 1.0 / std::sqrt(2.0); m << s, s, s, -s; return m; }
inline Mat s_gate() { Mat m(2, 2); m << 1, 0, 0, cx(0, 1); return m; }
inline Mat sdg_gate() { Mat m(2, 2); m << 1, 0, 0, cx(0, -1); return m; }
inline Mat t_gate() { Mat m(2, 2); m << 1, 0, 0, std::exp(cx(0, kPi / 4)); return m; }
inline Mat tdg_gate() { Mat m(2, 2); m << 1, 0, 0, std::exp(cx(0, -kPi / 4)); return m; }
inline Mat rz(double t) {
    Mat m(2, 2);
    m << std::exp(cx(0, t / 2)), 0, 0, std::exp(cx(0, -t / 2));
    return m;
}
inline Mat rx(double t) {
    Mat m(2, 2);
    m << std::cos(t / 2), cx(0, std::sin(t / 2)), cx(0, std::sin(t / 2)), std::cos(t / 2);
    return m;
}
inline Mat ry(double t) {
    Mat m(2, 2);
    m << std::cos(t / 2), std::sin(t / 2), -std::sin(t / 2), std::cos(t / 2);
    return m;
}
inline Mat cx_gate() {
    Mat m = Mat::Zero(4, 4);
    // qubit 0 = control (least-significant bit of the index), qubit 1 = target
    m(0, 0) = 1; m(2, 2) = 1; m(3, 1) = 1; m(1, 3) = 1;
    return m;
}
inline Mat cz_gate() {
    Mat m = Mat::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}
inline Mat swap_gate() {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 1; m(1, 2) = 1; m(2, 1) = 1; m(3, 3) = 1;
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace gatemat

inline Mat GateSpec::matrix() const {
    using namespace gatemat;
    switch (kind) {
        case GateKind::I: return identity2();
        case GateKind::X: return pauli_x();
        case GateKind::Y: return pauli_y();
        case GateKind::Z: return pauli_z();
        case GateKind::H: return hadamard();
        case GateKind::S: return s_gate();
        case GateKind::Sdg: return sdg_gate();
        case GateKind::T: return t_gate();
        case GateKind::Tdg: return tdg_gate();
        case GateKind::Rz: return gatemat::rz(theta);
        case GateKind::Rx: return gatemat::rx(theta);
        case GateKind::Ry: return gatemat::ry(theta);
        case GateKind::CX: return cx_gate();
        case GateKind::CZ: return cz_gate();
        case GateKind::Swap: return swap_gate();
        case GateKind::U1q:
        case GateKind::U2q:
            if (custom.rows() == 0) throw std::invalid_argument("custom gate without matrix");
            return custom;
    }
    throw std::logic_error("unknown gate kind");
}

inline std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::I: return "I";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "Sdg";
        case GateKind::T: return "T";
        case GateKind::Tdg: return "Tdg";
        case GateKind::Rz: return "Rz";
        case GateKind::Rx: return "Rx";
        case GateKind::Ry: return "Ry";
        case GateKind::CX: return "CX";
        case GateKind::CZ: return "CZ";
        case GateKind::Swap: return "Swap";
        case GateKind::U1q: return "U1q";
        case GateKind::U2q: return "U2q";
    }
    return "?";
}

}  // namespace bqc
