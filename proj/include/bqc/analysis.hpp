#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/density.hpp"
#include "bqc/errormodel.hpp"
#include "bqc/rng.hpp"

namespace bqc::analysis {

// ---------------------------------------------------------------------------
// Blindness
// ---------------------------------------------------------------------------

// Server-side state after running the circuit with the given blind angles,
// averaged over the client's secret outcome bits (each delegated rotation
// contributes a uniformly random Z^s byproduct). With average_outcomes =
// false the s = 0 branch is returned un-averaged (negative-control mode).
DensityMatrix server_view(const CircuitIR& circuit, std::span<const double> blind_angles,
                          bool average_outcomes = true);

// Trace distance between the outcome-averaged server states of two blind
// angle assignments for the same circuit. Blindness holds iff this is < 1e-9.
double verify_blindness(const CircuitIR& circuit, std::span<const double> angles_a,
                        std::span<const double> angles_b, bool average_outcomes = true);

// Same check for two circuits carrying their own angle indices. Throws if
// the server-visible structure differs (the states are not comparable).
double verify_blindness(const CircuitIR& a, const CircuitIR& b, bool average_outcomes = true);

// ---------------------------------------------------------------------------
// Fidelity / efficiency / security trade-off
// ---------------------------------------------------------------------------

enum class NoiseMode {
    Exact,       // density-matrix channel propagation, n <= 6
    Trajectory,  // per-shot Pauli sampling on pure states, n <= 10
};

struct TradeoffPoint {
    double r_h = 0.0;
    double fidelity = 0.0;
    double fidelity_stderr = 0.0;
    double efficiency = 0.0;
    double log2_unitaries = 0.0;
    double lower_bound = 0.0;
    long shots = 0;
};

struct TradeoffReport {
    std::vector<TradeoffPoint> points;
    int n_qubits = 0;
    int depth = 0;
    long shots = 0;
    uint64_t seed = 0;
    NoiseMode mode = NoiseMode::Trajectory;
};

TradeoffReport tradeoff_sweep(int n, int depth, std::span<const double> r_h_grid,
                              const ErrorModel& model, long shots, uint64_t seed,
                              std::optional<NoiseMode> forced_mode = std::nullopt);

// Closed-form fidelity lower bound for the partially hidden bricklayer:
// F >= (f_blind / f_local)^{N R_h} f_local^N with f_blind = f_comm^{7/3}
// f_CZ^{2/3}, f_local = f_CZ, N = brick count.
double tradeoff_lower_bound(size_t total_bricks, double r_h, double eps_comm, double eps_loc);

// ---------------------------------------------------------------------------
// Expressibility via frame potentials
// ---------------------------------------------------------------------------

enum class EnsembleFamily { Bricklayer, PauliRotation, Haar };

struct FramePotentialEstimate {
    EnsembleFamily family = EnsembleFamily::Bricklayer;
    int k = 2;
    int n_qubits = 0;
    int depth = 0;
    size_t blind_gates = 0;
    long samples = 0;     // trace samples used by the pair estimator
    double mean = 0.0;    // F-hat
    double stderr_ = 0.0; // jackknife standard error
    double delta_eps = 0.0;
    double delta_eps_err = 0.0;
};

struct FramePotentialOptions {
    int c = 3;                     // discrete angle resolution
    bool continuous_angles = false;
    int n_unitaries = 0;           // 0: derived from `samples`
    double r_h = 1.0;              // bricklayer hiding fraction
};

// Sample-mean estimate of F^{(k)} = E |Tr(U^dag V)|^{2k} for the ensemble of
// the named circuit family at the given depth (circuit structure fixed by
// `seed`, blind angles resampled per unitary). Uses all ordered pairs of a
// batch of sampled unitaries with a delete-one jackknife for the stderr.
FramePotentialEstimate frame_potential(EnsembleFamily family, int n, int depth, int k,
                                       long samples, uint64_t seed,
                                       const FramePotentialOptions& opts = {});

struct DecayFit {
    double amplitude = 0.0;  // A
    double scale = 0.0;      // C, in layers
    double amplitude_err = 0.0;
    double scale_err = 0.0;
    double residual = 0.0;   // weighted rms residual in log space
    int points_used = 0;
};

// Weighted least squares of log(delta_eps) = log A - l / C over depth.
DecayFit fit_decay(std::span<const FramePotentialEstimate> estimates);

struct MatchedPair {
    double gates_a = 0.0;
    double gates_b = 0.0;
    double gates_b_err = 0.0;
};

// For each estimate of family A, the interpolated blind-gate count of family
// B achieving the same delta_eps (log-linear interpolation on B's curve).
std::vector<MatchedPair> match_expressibility(std::span<const FramePotentialEstimate> family_a,
                                              std::span<const FramePotentialEstimate> family_b);

struct LineFit {
    double slope = 0.0, intercept = 0.0;
    double slope_err = 0.0, intercept_err = 0.0;
};

LineFit fit_line(std::span<const MatchedPair> pairs);

}  // namespace bqc::analysis
