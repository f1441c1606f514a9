#pragma once

#include <string>
#include <vector>

#include "bqc/stab/decoder.hpp"
#include "bqc/stab/logical_circuit.hpp"

namespace bqc::stab {

struct LogicalRunResult {
    double p_l = 0.0;
    double stderr_ = 0.0;
    long shots = 0;
    long failures = 0;
    double mean_gates_per_layer = 0.0;
    long fallback_decodes = 0;  // shots where a component exceeded the exact matcher cap
};

// Monte Carlo logical error rate: sample fault configurations from the
// detector error model, decode per block, count shots where any logical
// observable is mispredicted. The random circuit structure is resampled
// every shots/n_structures shots.
LogicalRunResult run_logical_circuit(const LogicalRunConfig& config, long shots,
                                     int n_structures = 16);

enum class SweepAxis { Comm, Loc, Both };

struct SweepPoint {
    int distance = 0;
    double eps = 0.0;
    double p_l = 0.0;
    double stderr_ = 0.0;
};

struct CrossingEstimate {
    bool found = false;
    double eps = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
};

struct ThresholdSweepResult {
    SweepAxis axis = SweepAxis::Comm;
    double r_h = 1.0;
    SeMode se_mode = SeMode::Local;
    std::vector<SweepPoint> points;
    CrossingEstimate crossing;  // between the first two distances
};

ThresholdSweepResult threshold_sweep(const std::vector<int>& distances,
                                     const std::vector<double>& eps_grid, SweepAxis axis,
                                     double r_h, SeMode se_mode, long shots, uint64_t seed,
                                     int n_qubits = 2, int n_layers = 10);

// ---------------------------------------------------------------------------
// Logical error algebra (exact forms alongside the small-p approximations)
// ---------------------------------------------------------------------------

struct AlgebraConfig {
    int n_qubits = 4;
    int n_layers = 10;
    int n_rounds = 1;
    double n_gpl = 6.0;  // expected gates per layer, 1.5 * n_qubits
    double r_h = 1.0;
};

double p_l_max(int n_qubits);
double p_round_from_circuit(double p_circuit, const AlgebraConfig& cfg);           // exact
double p_circuit_from_round(double p_round, const AlgebraConfig& cfg);             // exact inverse
double p_gate_from_round(double p_round, const AlgebraConfig& cfg);
double p_blind_gate_from_round(double p_round, const AlgebraConfig& cfg);
double p_round_from_gate(double p_gate, const AlgebraConfig& cfg);
double fidelity_from_round(double p_round, const AlgebraConfig& cfg);
// max gates at final fidelity f_l; +inf when p_gate = 0
double n_total_gates(double f_l, double p_gate);

struct GateScalingPoint {
    int n_layers = 0;
    double p_l = 0.0;
    double p_l_stderr = 0.0;
    double p_gate = 0.0;
    double p_gate_stderr = 0.0;
};

struct GateScalingReport {
    std::vector<GateScalingPoint> points;
    bool consistent_3sigma = false;
};

// Extract p_gate at several N_layers and check the values agree within 3
// sigma (the layer-count independence that justifies the algebra).
GateScalingReport validate_gate_scaling(const LogicalRunConfig& base,
                                        const std::vector<int>& layer_counts, long shots);

// ---------------------------------------------------------------------------
// Magic-state gate teleportation gadget
// ---------------------------------------------------------------------------

struct GadgetResult {
    double p_l = 0.0;
    double stderr_ = 0.0;
    double comparator_p_l = 0.0;
    double comparator_stderr = 0.0;
};

// Teleported non-Clifford gate at distance d: server-prepared magic patch
// (noiseless resource), transversal blind CX, magic-patch measurement, blind
// 1Q correction, against a plain two-blind-gate circuit as the comparator.
GadgetResult magic_teleport_gadget(int distance, const ErrorModel& model, long shots,
                                   uint64_t seed);

// Detector-graph adjacency export (one line per edge) for external decoders.
std::string export_graph(const DetectorGraph& graph);

}  // namespace bqc::stab
