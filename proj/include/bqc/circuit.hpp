#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bqc/angleset.hpp"
#include "bqc/gates.hpp"
#include "bqc/statevec.hpp"

namespace bqc {

// Gate roles inside a generated circuit.
//   BTheta        delegated blind rotation; angle index p into {2 pi p / 2^c}
//   LocalClifford server-side fixed Clifford (H, S, CZ, CX, Paulis)
//   Local1QRot    revealed single-qubit Rz with a continuous angle (perfect)
//   Local2Q       revealed entangling block CZ H_1 Rz(theta) H_1 CZ executed
//                 as one local two-qubit gate
enum class CircuitGateKind { BTheta, LocalClifford, Local1QRot, Local2Q };
enum class GateTag { Blind, Revealed };

struct CircuitGate {
    CircuitGateKind kind = CircuitGateKind::LocalClifford;
    std::vector<int> qubits;
    uint32_t p = 0;        // BTheta angle index
    double theta = 0.0;    // Local1QRot / Local2Q angle
    GateKind clifford = GateKind::I;
    GateTag tag = GateTag::Revealed;

    static CircuitGate b_theta(int q, uint32_t p) {
        CircuitGate g;
        g.kind = CircuitGateKind::BTheta;
        g.qubits = {q};
        g.p = p;
        g.tag = GateTag::Blind;
        return g;
    }
    static CircuitGate clifford_gate(GateKind k, std::vector<int> qs) {
        CircuitGate g;
        g.kind = CircuitGateKind::LocalClifford;
        g.clifford = k;
        g.qubits = std::move(qs);
        return g;
    }
    static CircuitGate local_rot(int q, double theta) {
        CircuitGate g;
        g.kind = CircuitGateKind::Local1QRot;
        g.qubits = {q};
        g.theta = theta;
        return g;
    }
    static CircuitGate local_2q(int q0, int q1, double theta) {
        CircuitGate g;
        g.kind = CircuitGateKind::Local2Q;
        g.qubits = {q0, q1};
        g.theta = theta;
        return g;
    }
};

// The revealed entangling block as a single 4x4 unitary.
inline Mat local_2q_unitary(double theta) {
    Mat cz = gatemat::cz_gate();
    Mat h1 = gatemat::kron(gatemat::identity2(), gatemat::hadamard());  // H on qubit 0
    Mat rz1 = gatemat::kron(gatemat::identity2(), gatemat::rz(theta));
    return cz * h1 * rz1 * h1 * cz;
}

struct CircuitIR {
    static constexpr int kSchemaVersion = 1;

    int n_qubits = 0;
    int c = 3;
    std::string family;
    int depth = 0;
    double r_h = 1.0;
    uint64_t seed = 0;
    std::vector<CircuitGate> gates;

    size_t n_blind() const {
        size_t k = 0;
        for (const auto& g : gates)
            if (g.tag == GateTag::Blind) ++k;
        return k;
    }
    size_t n_b_theta() const {
        size_t k = 0;
        for (const auto& g : gates)
            if (g.kind == CircuitGateKind::BTheta) ++k;
        return k;
    }

    void validate() const {
        AngleSet set(c);
        for (const auto& g : gates) {
            for (int q : g.qubits)
                if (q < 0 || q >= n_qubits) throw std::invalid_argument("circuit gate operand out of range");
            if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1])
                throw std::invalid_argument("two-qubit gate with duplicate operands");
            if (g.tag == GateTag::Blind && g.kind != CircuitGateKind::BTheta)
                throw std::invalid_argument("blind-tagged entry must be a B_theta gate");
            if (g.kind == CircuitGateKind::BTheta && g.p >= set.size())
                throw std::invalid_argument("B_theta angle index outside the angle set");
        }
    }

    // Ideal action (frame corrected, no byproducts). Blind angles may be
    // overridden positionally, which is how ensembles are sampled.
    void apply_ideal(StateVector& psi, std::span<const double> blind_angle_override = {}) const {
        AngleSet set(c);
        size_t blind_i = 0;
        for (const auto& g : gates) {
            switch (g.kind) {
                case CircuitGateKind::BTheta: {
                    double theta = set.angle(g.p);
                    if (!blind_angle_override.empty()) theta = blind_angle_override[blind_i++];
                    psi.apply(GateSpec::rz(theta), g.qubits[0]);
                    break;
                }
                case CircuitGateKind::LocalClifford:
                    if (g.qubits.size() == 2)
                        psi.apply(GateSpec::named(g.clifford), g.qubits[0], g.qubits[1]);
                    else
                        psi.apply(GateSpec::named(g.clifford), g.qubits[0]);
                    break;
                case CircuitGateKind::Local1QRot:
                    psi.apply(GateSpec::rz(g.theta), g.qubits[0]);
                    break;
                case CircuitGateKind::Local2Q:
                    psi.apply(GateSpec::u2q(local_2q_unitary(g.theta)), g.qubits[0], g.qubits[1]);
                    break;
            }
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json jg = nlohmann::json::array();
        for (const auto& g : gates) {
            nlohmann::json e;
            switch (g.kind) {
                case CircuitGateKind::BTheta: e["kind"] = "b_theta"; e["p"] = g.p; break;
                case CircuitGateKind::LocalClifford: e["kind"] = "clifford"; e["label"] = gate_name(g.clifford); break;
                case CircuitGateKind::Local1QRot: e["kind"] = "local_1q_rot"; e["theta"] = g.theta; break;
                case CircuitGateKind::Local2Q: e["kind"] = "local_2q"; e["theta"] = g.theta; break;
            }
            e["qubits"] = g.qubits;
            e["tag"] = (g.tag == GateTag::Blind) ? "blind" : "revealed";
            jg.push_back(std::move(e));
        }
        return nlohmann::json{{"version", kSchemaVersion}, {"family", family},
                              {"n_qubits", n_qubits},      {"depth", depth},
                              {"r_h", r_h},                {"c", c},
                              {"seed", seed},              {"gates", std::move(jg)}};
    }

    static CircuitIR from_json(const nlohmann::json& j) {
        CircuitIR ir;
        if (j.at("version").get<int>() != kSchemaVersion)
            throw std::invalid_argument("unsupported circuit schema version");
        ir.family = j.at("family").get<std::string>();
        ir.n_qubits = j.at("n_qubits").get<int>();
        ir.depth = j.value("depth", 0);
        ir.r_h = j.at("r_h").get<double>();
        ir.c = j.at("c").get<int>();
        ir.seed = j.at("seed").get<uint64_t>();
        for (const auto& e : j.at("gates")) {
            CircuitGate g;
            const std::string kind = e.at("kind").get<std::string>();
            g.qubits = e.at("qubits").get<std::vector<int>>();
            g.tag = e.at("tag").get<std::string>() == "blind" ? GateTag::Blind : GateTag::Revealed;
            if (kind == "b_theta") {
                g.kind = CircuitGateKind::BTheta;
                g.p = e.at("p").get<uint32_t>();
            } else if (kind == "clifford") {
                g.kind = CircuitGateKind::LocalClifford;
                const std::string label = e.at("label").get<std::string>();
                static const std::pair<const char*, GateKind> table[] = {
                    {"I", GateKind::I}, {"X", GateKind::X}, {"Y", GateKind::Y}, {"Z", GateKind::Z},
                    {"H", GateKind::H}, {"S", GateKind::S}, {"Sdg", GateKind::Sdg},
                    {"CX", GateKind::CX}, {"CZ", GateKind::CZ}, {"Swap", GateKind::Swap}};
                bool found = false;
                for (const auto& [name, k] : table)
                    if (label == name) { g.clifford = k; found = true; }
                if (!found) throw std::invalid_argument("unknown Clifford label " + label);
            } else if (kind == "local_1q_rot") {
                g.kind = CircuitGateKind::Local1QRot;
                g.theta = e.at("theta").get<double>();
            } else if (kind == "local_2q") {
                g.kind = CircuitGateKind::Local2Q;
                g.theta = e.at("theta").get<double>();
            } else {
                throw std::invalid_argument("unknown circuit gate kind " + kind);
            }
            ir.gates.push_back(std::move(g));
        }
        ir.validate();
        return ir;
    }

    std::string serialize() const { return to_json().dump(); }
};

// Pauli string with a real coefficient, used as a rotation generator or a
// Hamiltonian term.
struct PauliString {
    enum class Letter : uint8_t { I, X, Y, Z };
    std::vector<Letter> letters;
    double coeff = 1.0;

    static PauliString parse(const std::string& s, double coeff = 1.0) {
        PauliString p;
        p.coeff = coeff;
        for (char ch : s) {
            switch (ch) {
                case 'I': p.letters.push_back(Letter::I); break;
                case 'X': p.letters.push_back(Letter::X); break;
                case 'Y': p.letters.push_back(Letter::Y); break;
                case 'Z': p.letters.push_back(Letter::Z); break;
                default: throw std::invalid_argument("bad Pauli letter");
            }
        }
        return p;
    }

    int n_qubits() const { return static_cast<int>(letters.size()); }
    bool is_identity() const {
        for (auto l : letters)
            if (l != Letter::I) return false;
        return true;
    }

    Mat matrix() const {
        Mat m = Mat::Identity(1, 1);
        // qubit 0 is the least-significant factor
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
            Mat f;
            switch (*it) {
                case Letter::I: f = gatemat::identity2(); break;
                case Letter::X: f = gatemat::pauli_x(); break;
                case Letter::Y: f = gatemat::pauli_y(); break;
                case Letter::Z: f = gatemat::pauli_z(); break;
            }
            m = gatemat::kron(m, f);
        }
        return m;
    }
};

}  // namespace bqc
