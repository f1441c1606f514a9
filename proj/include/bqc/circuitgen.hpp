#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/rng.hpp"

namespace bqc {
namespace circuitgen {

namespace detail {

struct Brick {
    bool entangling = false;
    int q0 = 0, q1 = 0;
    std::vector<size_t> gate_slots;  // indices into the circuit gate list
};

// Universal single-qubit brick: B(t1) H B(t2) H B(t3) in time order.
inline void emit_1q_brick(CircuitIR& ir, int q, bool blind, const AngleSet& set, RngStream& rng) {
    for (int i = 0; i < 3; ++i) {
        if (blind) {
            ir.gates.push_back(CircuitGate::b_theta(q, uint32_t(rng.below(set.size()))));
        } else {
            ir.gates.push_back(CircuitGate::local_rot(q, rng.uniform(0.0, 2.0 * kPi)));
        }
        if (i < 2) ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q}));
    }
}

// Entangling brick. Blind: CZ H_0 B(t) H_0 CZ (two local CZ + one delegated
// rotation). Revealed: collapsed to a single local two-qubit gate.
inline void emit_2q_brick(CircuitIR& ir, int q0, int q1, bool blind, const AngleSet& set, RngStream& rng) {
    if (blind) {
        ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CZ, {q0, q1}));
        ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q0}));
        ir.gates.push_back(CircuitGate::b_theta(q0, uint32_t(rng.below(set.size()))));
        ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q0}));
        ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CZ, {q0, q1}));
    } else {
        ir.gates.push_back(CircuitGate::local_2q(q0, q1, rng.uniform(0.0, 2.0 * kPi)));
    }
}

}  // namespace detail

// Alternating bricklayer: every layer places a universal single-qubit brick
// on each qubit, then entangling bricks on neighbor pairs with the layer's
// parity offset. A fraction R_h of the delegated-rotation slots is kept
// blind. Hiding granularity is one brick (3 slots for a 1Q brick, 1 for an
// entangling brick); the brick counts are chosen so the realized blind-slot
// count lands within half a slot of R_h times the hideable total, ties
// rounded toward more hiding, and the hidden bricks themselves are sampled
// uniformly per seed.
inline CircuitIR build_bricklayer(int n, int layers, double r_h, int c, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("bricklayer needs at least 2 qubits");
    if (layers < 1) throw std::invalid_argument("bricklayer needs at least 1 layer");
    if (r_h < 0.0 || r_h > 1.0) throw std::invalid_argument("hiding fraction outside [0,1]");
    AngleSet set(c);

    struct BrickRef { bool entangling; int q0, q1; };
    std::vector<BrickRef> bricks;
    std::vector<size_t> bricks_1q, bricks_2q;
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n; ++q) {
            bricks_1q.push_back(bricks.size());
            bricks.push_back({false, q, q});
        }
        for (int q = l % 2; q + 1 < n; q += 2) {
            bricks_2q.push_back(bricks.size());
            bricks.push_back({true, q, q + 1});
        }
    }
    const double slots = 3.0 * double(bricks_1q.size()) + double(bricks_2q.size());
    size_t k1 = size_t(std::floor(r_h * double(bricks_1q.size()) + 0.5));
    k1 = std::min(k1, bricks_1q.size());
    const double remaining = r_h * slots - 3.0 * double(k1);
    const long k2s = long(std::floor(remaining + 0.5));
    const size_t k2 = size_t(std::clamp(k2s, 0l, long(bricks_2q.size())));

    RngStream rng(seed, "bricklayer");
    RngStream hide_rng = rng.split("hide");
    std::shuffle(bricks_1q.begin(), bricks_1q.end(), hide_rng.engine());
    std::shuffle(bricks_2q.begin(), bricks_2q.end(), hide_rng.engine());
    std::vector<char> hidden(bricks.size(), 0);
    for (size_t i = 0; i < k1; ++i) hidden[bricks_1q[i]] = 1;
    for (size_t i = 0; i < k2; ++i) hidden[bricks_2q[i]] = 1;

    CircuitIR ir;
    ir.n_qubits = n;
    ir.c = c;
    ir.family = "bricklayer";
    ir.depth = layers;
    ir.r_h = r_h;
    ir.seed = seed;
    RngStream angle_rng = rng.split("angles");
    for (size_t b = 0; b < bricks.size(); ++b) {
        const auto& br = bricks[b];
        if (br.entangling)
            detail::emit_2q_brick(ir, br.q0, br.q1, hidden[b], set, angle_rng);
        else
            detail::emit_1q_brick(ir, br.q0, hidden[b], set, angle_rng);
    }
    ir.validate();
    return ir;
}

// Delegated-rotation slots a fully blind bricklayer of this shape would use.
inline size_t bricklayer_hideable_slots(int n, int layers) {
    size_t s = 0;
    for (int l = 0; l < layers; ++l) s += size_t(n) * 3 + size_t((n - l % 2) / 2);
    return s;
}

inline size_t bricklayer_brick_count(int n, int layers) {
    size_t k = 0;
    for (int l = 0; l < layers; ++l) k += size_t(n) + size_t((n - l % 2) / 2);
    return k;
}

// theta-blind n-qubit Pauli rotation exp(i theta/2 P): one delegated rotation
// on a pivot qubit, surrounded by revealed basis-change Cliffords and a CX
// ladder determined by the string.
inline CircuitIR build_pauli_rotation(const PauliString& p, uint32_t theta_index, int c) {
    if (p.is_identity()) throw std::invalid_argument("identity string is not a rotation generator");
    AngleSet set(c);
    CircuitIR ir;
    ir.n_qubits = p.n_qubits();
    ir.c = c;
    ir.family = "pauli_rotation";
    ir.depth = 1;
    ir.r_h = 1.0;

    std::vector<int> support;
    for (int q = 0; q < p.n_qubits(); ++q)
        if (p.letters[size_t(q)] != PauliString::Letter::I) support.push_back(q);
    const int pivot = support.front();

    auto open_basis = [&](int q) {  // C^dag: maps P_q -> Z_q
        switch (p.letters[size_t(q)]) {
            case PauliString::Letter::X:
                ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q}));
                break;
            case PauliString::Letter::Y:
                ir.gates.push_back(CircuitGate::clifford_gate(GateKind::Sdg, {q}));
                ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q}));
                break;
            default:
                break;
        }
    };
    auto close_basis = [&](int q) {  // C
        switch (p.letters[size_t(q)]) {
            case PauliString::Letter::X:
                ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q}));
                break;
            case PauliString::Letter::Y:
                ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {q}));
                ir.gates.push_back(CircuitGate::clifford_gate(GateKind::S, {q}));
                break;
            default:
                break;
        }
    };

    for (int q : support) open_basis(q);
    for (int q : support)
        if (q != pivot) ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CX, {q, pivot}));
    ir.gates.push_back(CircuitGate::b_theta(pivot, set.wrap(theta_index)));
    for (int q : support)
        if (q != pivot) ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CX, {q, pivot}));
    for (int q : support) close_basis(q);

    ir.validate();
    return ir;
}

struct TrotterCircuit {
    CircuitIR circuit;
    double max_rounding_error = 0.0;  // angle discretization, radians
};

// First-order Trotter product for H = sum_j h_j P_j: n_trotter repetitions of
// the term sequence in list order, rotation angles theta_j = -2 h_j t / n.
inline TrotterCircuit build_trotter(const std::vector<PauliString>& hamiltonian, double t,
                                    int n_trotter, int c) {
    if (hamiltonian.empty()) throw std::invalid_argument("empty Hamiltonian");
    if (n_trotter < 1) throw std::invalid_argument("need at least one Trotter step");
    AngleSet set(c);
    TrotterCircuit out;
    out.circuit.n_qubits = hamiltonian.front().n_qubits();
    out.circuit.c = c;
    out.circuit.family = "trotter";
    out.circuit.depth = n_trotter;
    out.circuit.r_h = 1.0;
    for (const auto& term : hamiltonian)
        if (term.n_qubits() != out.circuit.n_qubits)
            throw std::invalid_argument("Hamiltonian terms act on different register sizes");

    for (int step = 0; step < n_trotter; ++step) {
        for (const auto& term : hamiltonian) {
            const double theta = -2.0 * term.coeff * t / double(n_trotter);
            double err = 0.0;
            uint32_t idx = set.round_to_index(theta, &err);
            out.max_rounding_error = std::max(out.max_rounding_error, err);
            CircuitIR rot = build_pauli_rotation(term, idx, c);
            for (auto& g : rot.gates) out.circuit.gates.push_back(std::move(g));
        }
    }
    out.circuit.validate();
    return out;
}

enum class BrickworkCellMode { TwoSingleQubit, Cnot };

// The 7-slot hybrid brickwork unit cell. Slot order (time order of the
// delegated rotations): alpha, alpha', beta, beta', gamma, gamma', delta.
// TwoSingleQubit pins delta = 0, which makes the cell a product of two
// universal single-qubit gates for arbitrary remaining angles (the two CZs
// commute through the leftover z rotations and cancel).
//
// Cnot pins beta = gamma' = pi/4, gamma = 0 and delta = -pi/2. The delta
// slot sits inside the CZ / H sandwich, i.e. it is the entangling-block
// rotation, and that construction is maximally entangling exactly at
// delta = +-pi/2 (a +-pi/4 delta only reaches the sqrt-of-CX class under
// every CZ/H ordering compatible with the delta = 0 specialization).
inline CircuitIR build_brickwork_cell(BrickworkCellMode mode, int c = 3) {
    AngleSet set(c);
    if (!set.supports_pi_over_4()) throw std::invalid_argument("brickwork cell needs c >= 3");
    const uint32_t q8 = set.size() / 8;  // index step of pi/4

    uint32_t alpha = 0, alpha_p = 0, beta = 0, beta_p = 0, gamma = 0, gamma_p = 0, delta = 0;
    if (mode == BrickworkCellMode::Cnot) {
        beta = q8;
        gamma_p = q8;
        delta = set.wrap(-2 * int64_t(q8));  // -pi/2
        gamma = 0;
    }

    CircuitIR ir;
    ir.n_qubits = 2;
    ir.c = c;
    ir.family = "brickwork_cell";
    ir.depth = 1;
    ir.r_h = 1.0;
    auto h_both = [&] {
        ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {0}));
        ir.gates.push_back(CircuitGate::clifford_gate(GateKind::H, {1}));
    };
    ir.gates.push_back(CircuitGate::b_theta(0, alpha));
    ir.gates.push_back(CircuitGate::b_theta(1, alpha_p));
    h_both();
    ir.gates.push_back(CircuitGate::b_theta(0, beta));
    ir.gates.push_back(CircuitGate::b_theta(1, beta_p));
    h_both();
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CZ, {0, 1}));
    ir.gates.push_back(CircuitGate::b_theta(0, gamma));
    ir.gates.push_back(CircuitGate::b_theta(1, gamma_p));
    h_both();
    ir.gates.push_back(CircuitGate::b_theta(0, delta));
    h_both();
    ir.gates.push_back(CircuitGate::clifford_gate(GateKind::CZ, {0, 1}));
    ir.validate();
    return ir;
}

}  // namespace circuitgen
}  // namespace bqc
