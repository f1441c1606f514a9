#include "bqc/stab/tableau.hpp"

#include <stdexcept>

#include "bqc/statevec.hpp"

namespace bqc::stab {

PauliOperator PauliOperator::from_string(const std::string& s) {
    PauliOperator p(int(s.size()));
    for (size_t q = 0; q < s.size(); ++q) {
        PauliOperator single_q = single(int(s.size()), int(q), s[q]);
        p.multiply(single_q);
    }
    return p;
}

void PauliOperator::conjugate(GateKind gate, std::span<const int> qubits) {
    switch (gate) {
        case GateKind::I:
            return;
        case GateKind::H: {
            const int q = qubits[0];
            if (x_[size_t(q)] & z_[size_t(q)]) add_phase(2);
            std::swap(x_[size_t(q)], z_[size_t(q)]);
            return;
        }
        case GateKind::S: {
            const int q = qubits[0];
            if (x_[size_t(q)]) {
                add_phase(1);
                z_[size_t(q)] ^= 1;
            }
            return;
        }
        case GateKind::Sdg: {
            const int q = qubits[0];
            if (x_[size_t(q)]) {
                add_phase(3);
                z_[size_t(q)] ^= 1;
            }
            return;
        }
        case GateKind::X: {
            const int q = qubits[0];
            if (z_[size_t(q)]) add_phase(2);
            return;
        }
        case GateKind::Z: {
            const int q = qubits[0];
            if (x_[size_t(q)]) add_phase(2);
            return;
        }
        case GateKind::Y: {
            const int q = qubits[0];
            if (x_[size_t(q)] ^ z_[size_t(q)]) add_phase(2);
            return;
        }
        case GateKind::CX: {
            // in the XZ-literal phase convention the CX map is sign free:
            // X_c -> X_c X_t, Z_t -> Z_c Z_t, and the per-qubit reassembly
            // into X^x Z^z order crosses no anticommuting pairs
            const int c = qubits[0], t = qubits[1];
            x_[size_t(t)] ^= x_[size_t(c)];
            z_[size_t(c)] ^= z_[size_t(t)];
            return;
        }
        case GateKind::CZ: {
            const int a = qubits[0], b = qubits[1];
            conjugate(GateKind::H, b);
            conjugate(GateKind::CX, a, b);
            conjugate(GateKind::H, b);
            return;
        }
        case GateKind::Swap: {
            const int a = qubits[0], b = qubits[1];
            std::swap(x_[size_t(a)], x_[size_t(b)]);
            std::swap(z_[size_t(a)], z_[size_t(b)]);
            return;
        }
        default:
            throw std::invalid_argument("not a Clifford gate: " + gate_name(gate));
    }
}

int PauliOperator::sign() const {
    // Hermitian form: i^phase (XZ)^{y_count} with (XZ) = -iY; Hermiticity
    // requires phase == y_count mod 2.
    int y_count = 0;
    for (size_t i = 0; i < x_.size(); ++i) y_count += int(x_[i] & z_[i]);
    const int k = (phase_ - y_count) & 3;
    if (k == 0) return 1;
    if (k == 2) return -1;
    throw std::logic_error("sign of a non-Hermitian Pauli requested");
}

std::string PauliOperator::str() const {
    std::string out;
    const int s = sign();
    out += (s > 0 ? "+" : "-");
    for (size_t q = 0; q < x_.size(); ++q) {
        const int xzq = x_[q] | (z_[q] << 1);
        out += "IXZY"[xzq];
    }
    return out;
}

Mat PauliOperator::matrix() const {
    Mat m = Mat::Identity(1, 1);
    for (size_t q = x_.size(); q-- > 0;) {
        Mat f = Mat::Identity(2, 2);
        if (x_[q]) f = f * gatemat::pauli_x();
        if (z_[q]) f = f * gatemat::pauli_z();
        m = gatemat::kron(m, f);
    }
    cx ph(1, 0);
    for (int i = 0; i < phase_; ++i) ph *= cx(0, 1);
    return ph * m;
}

Tableau::Tableau(int n) : n_(n) {
    destab_.reserve(size_t(n));
    stab_.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        destab_.push_back(PauliOperator::single(n, i, 'X'));
        stab_.push_back(PauliOperator::single(n, i, 'Z'));
    }
}

void Tableau::apply(GateKind gate, std::span<const int> qubits) {
    for (auto& row : destab_) row.conjugate(gate, qubits);
    for (auto& row : stab_) row.conjugate(gate, qubits);
}

Tableau::MeasureResult Tableau::measure_z(int q, RngStream& rng) {
    const PauliOperator zq = PauliOperator::single(n_, q, 'Z');
    int pivot = -1;
    for (int i = 0; i < n_; ++i) {
        if (stab_[size_t(i)].x(q)) { pivot = i; break; }
    }
    MeasureResult res;
    if (pivot >= 0) {
        // random outcome: all other anticommuting rows absorb the pivot
        for (int i = 0; i < n_; ++i) {
            if (i != pivot && stab_[size_t(i)].x(q)) stab_[size_t(i)].multiply(stab_[size_t(pivot)]);
            if (destab_[size_t(i)].x(q) && i != pivot) destab_[size_t(i)].multiply(stab_[size_t(pivot)]);
        }
        destab_[size_t(pivot)] = stab_[size_t(pivot)];
        const int outcome = rng.bit();
        PauliOperator new_stab = zq;
        if (outcome) new_stab.add_phase(2);
        stab_[size_t(pivot)] = new_stab;
        res.outcome = outcome;
        res.deterministic = false;
    } else {
        // deterministic: accumulate stabilizer rows flagged by destabilizers
        PauliOperator scratch(n_);
        for (int i = 0; i < n_; ++i)
            if (destab_[size_t(i)].x(q)) scratch.multiply(stab_[size_t(i)]);
        // scratch == +/- Z_q
        res.outcome = scratch.sign() > 0 ? 0 : 1;
        res.deterministic = true;
    }
    return res;
}

int Tableau::expectation(const PauliOperator& p) const {
    for (int i = 0; i < n_; ++i)
        if (!stab_[size_t(i)].commutes_with(p)) return 0;
    PauliOperator scratch(n_);
    for (int i = 0; i < n_; ++i)
        if (!destab_[size_t(i)].commutes_with(p)) scratch.multiply(stab_[size_t(i)]);
    if (!scratch.equals_up_to_sign(p))
        throw std::logic_error("expectation: reconstruction mismatch");
    const int k = (scratch.phase() - p.phase()) & 3;
    if (k == 0) return 1;
    if (k == 2) return -1;
    throw std::logic_error("expectation: non-real relative phase");
}

void Tableau::reset_z(int q, RngStream& rng) {
    MeasureResult r = measure_z(q, rng);
    if (r.outcome) {
        int qs[1] = {q};
        apply(GateKind::X, qs);
    }
}

void Tableau::check_valid() const {
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (!stab_[size_t(i)].commutes_with(stab_[size_t(j)]))
                throw std::logic_error("stabilizer rows do not commute");
            const bool anti = !destab_[size_t(i)].commutes_with(stab_[size_t(j)]);
            if (anti != (i == j))
                throw std::logic_error("destabilizer pairing broken");
        }
    }
}

}  // namespace bqc::stab
