#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bqc/gates.hpp"
#include "bqc/rng.hpp"

namespace bqc::stab {

// n-qubit Pauli i^phase * prod_q X^{x_q} Z^{z_q} (XZ ordering per qubit; the
// Hermitian Y is (x=1, z=1, phase=1)). Conjugation through Clifford gates and
// multiplication track the phase exactly mod 4.
class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(int n) : x_(size_t(n), 0), z_(size_t(n), 0) {}

    static PauliOperator single(int n, int q, char letter) {
        PauliOperator p(n);
        switch (letter) {
            case 'X': p.x_[size_t(q)] = 1; break;
            case 'Z': p.z_[size_t(q)] = 1; break;
            case 'Y': p.x_[size_t(q)] = 1; p.z_[size_t(q)] = 1; p.phase_ = 1; break;
            case 'I': break;
            default: throw std::invalid_argument("bad Pauli letter");
        }
        return p;
    }
    static PauliOperator from_string(const std::string& s);

    int n_qubits() const { return int(x_.size()); }
    uint8_t x(int q) const { return x_[size_t(q)]; }
    uint8_t z(int q) const { return z_[size_t(q)]; }
    void set_x(int q, uint8_t v) { x_[size_t(q)] = v & 1; }
    void set_z(int q, uint8_t v) { z_[size_t(q)] = v & 1; }
    int phase() const { return phase_; }  // exponent of i, mod 4
    void add_phase(int k) { phase_ = (phase_ + k) & 3; }

    bool is_identity() const {
        for (size_t i = 0; i < x_.size(); ++i)
            if (x_[i] || z_[i]) return false;
        return true;
    }

    bool commutes_with(const PauliOperator& o) const {
        int acc = 0;
        for (size_t i = 0; i < x_.size(); ++i) acc ^= (x_[i] & o.z_[i]) ^ (z_[i] & o.x_[i]);
        return acc == 0;
    }

    // this <- this * other (phases exact)
    void multiply(const PauliOperator& o) {
        for (size_t i = 0; i < x_.size(); ++i) {
            // (X^a Z^b)(X^c Z^d) = (-1)^{bc} X^{a+c} Z^{b+d}
            if (z_[i] & o.x_[i]) add_phase(2);
            x_[i] ^= o.x_[i];
            z_[i] ^= o.z_[i];
        }
        add_phase(o.phase_);
    }

    // this <- U this U^dag
    void conjugate(GateKind gate, std::span<const int> qubits);
    void conjugate(GateKind gate, int q) { int qs[1] = {q}; conjugate(gate, qs); }
    void conjugate(GateKind gate, int q0, int q1) { int qs[2] = {q0, q1}; conjugate(gate, qs); }

    bool equals_up_to_sign(const PauliOperator& o) const { return x_ == o.x_ && z_ == o.z_; }
    bool operator==(const PauliOperator& o) const {
        return x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
    }

    // +1 / -1 for Hermitian operators (phase 0 or 2 after normalizing the Y
    // factors); throws otherwise.
    int sign() const;

    std::string str() const;
    Mat matrix() const;  // dense form, test oracle use only

private:
    std::vector<uint8_t> x_, z_;
    int phase_ = 0;
};

// Stabilizer state in CHP form: n destabilizer rows + n stabilizer rows.
class Tableau {
public:
    explicit Tableau(int n);

    int n_qubits() const { return n_; }

    void apply(GateKind gate, std::span<const int> qubits);
    void apply(GateKind gate, int q) { int qs[1] = {q}; apply(gate, qs); }
    void apply(GateKind gate, int q0, int q1) { int qs[2] = {q0, q1}; apply(gate, qs); }

    // Z-basis measurement. Deterministic outcomes ignore the rng.
    struct MeasureResult {
        int outcome = 0;
        bool deterministic = false;
    };
    MeasureResult measure_z(int q, RngStream& rng);

    // Expectation of a Hermitian Pauli: +1/-1 if P (up to sign) lies in the
    // stabilizer group, 0 if the outcome would be random.
    int expectation(const PauliOperator& p) const;

    void reset_z(int q, RngStream& rng);  // measure, flip to |0> if needed

    const PauliOperator& stabilizer(int i) const { return stab_[size_t(i)]; }
    const PauliOperator& destabilizer(int i) const { return destab_[size_t(i)]; }

    // Symplectic sanity: stabilizers commute pairwise, destab_i anticommutes
    // with stab_i only. Throws on violation.
    void check_valid() const;

private:
    int n_;
    std::vector<PauliOperator> destab_, stab_;
};

}  // namespace bqc::stab
