#pragma once

#include <optional>
#include <vector>

#include "bqc/errormodel.hpp"
#include "bqc/rng.hpp"
#include "bqc/stab/dem.hpp"
#include "bqc/stab/surface.hpp"

namespace bqc::stab {

enum class SeMode { Local, Blind };

// Fixed layer content (used by the gadget tests and the CLI); the random
// generator fills these per layer when no fixed pattern is given.
struct LayerSpec {
    struct Gate1Q { int patch; bool blind; };
    struct GateCX { int control, target; bool blind; };
    std::vector<Gate1Q> gates_1q;
    std::vector<GateCX> gates_cx;
    std::vector<int> measure_patches;  // transversal Z measurement, retires the patch
};

struct LogicalRunConfig {
    int n_qubits = 2;
    int n_layers = 10;
    int n_rounds = 1;  // SE rounds per gate layer
    int distance = 3;
    double r_h = 1.0;
    ErrorModel model;
    SeMode se_mode = SeMode::Local;
    uint64_t seed = 0;
    std::optional<std::vector<LayerSpec>> fixed_layers;

    void validate() const;
};

struct BuiltCircuit {
    PhysCircuit circuit;
    DetectorLayout layout;
    int distance = 3;
    int n_patches = 0;
    long realized_gates = 0;  // logical gates actually placed (N_gpl bookkeeping)
};

// Assemble the physical circuit: ideal logical init (implicit), per layer the
// transversal gates with their noise sites, n_rounds of syndrome extraction
// after each layer, and a final transversal Z measurement of every surviving
// patch. Detector and observable bookkeeping included.
//
// Noise sites (per the delegated-gate constructions):
//   blind transversal 1Q gate: two 1Q depolarizing(eps_comm) per data qubit
//   blind transversal CX:      dep2(eps_loc); CX; dep1(target, eps_comm); dep2(eps_loc)
//   local transversal CX:      CX; dep2(eps_loc)
//   local SE entangling gate:  CX; dep2(eps_loc)
//   blind SE entangling gate:  dep2(eps_loc); CX; dep1(CX target, eps_comm); dep2(eps_loc)
// Local 1Q gates are noiseless.
BuiltCircuit build_logical_circuit(const LogicalRunConfig& config, RngStream& structure_rng);

// Random layer content: every patch draws a 1Q gate; patches are paired up
// for CX (half controls, half targets). Each gate is blind w.p. r_h.
std::vector<LayerSpec> random_layers(const LogicalRunConfig& config, RngStream& rng);

}  // namespace bqc::stab
