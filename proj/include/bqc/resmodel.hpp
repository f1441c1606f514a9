#pragma once

#include <limits>
#include <string>

#include <json.hpp>

#include "bqc/density.hpp"
#include "bqc/errormodel.hpp"
#include "bqc/rng.hpp"

namespace bqc::resmodel {

// Timing and channel description of a server platform. Durations in seconds,
// distances in km.
struct PlatformProfile {
    double tau_gen = 5e-9;     // per photon attempt
    double tau_local = 20e-9;  // per local gate/SE layer
    double tau_init = 40e-9;   // communication-qubit initialization per round
    double tau_motion = 0.0;   // per-round shuttling cost (0 if none)
    long n_comm = 1;           // communication qubits usable per round
    long n_ch = 1;             // parallel photonic links
    double eta0 = 0.885;       // link efficiency prefactor
    double attenuation_km = 50.0;
    double distance_km = 0.0;
    long batch_size = 1000;    // Clifford gates per frame sync
    double c_fiber_m_per_s = 2.0e8;

    double eta() const { return eta0 * std::pow(10.0, -distance_km / attenuation_km); }
    double tau_comm() const { return 2.0 * distance_km * 1000.0 / c_fiber_m_per_s; }

    void validate() const;
    static PlatformProfile preset(const std::string& name);
    static PlatformProfile from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct DarkCountModel {
    double p_dark = 0.0;
    double eta = 1.0;
    double eps_comm = 0.0;
};

// p_err = p_dark/(p_dark + eta) + eps_comm * eta/(p_dark + eta)
double effective_click_error(const DarkCountModel& model);

// Largest L with p_dark/(p_dark + eta(L)) < p_thresh, where
// eta(L) = eta0 * 10^{-L/attenuation}. Bisection to 0.1 km. Returns +inf
// when p_dark = 0 (unbounded).
double max_distance(double p_thresh, double p_dark, double eta0, double attenuation_km);

// Detection-event channel: mixture of full Z-dephasing (dark-count branch)
// and the communication depolarizing channel (real-photon branch).
void dark_count_channel(DensityMatrix& rho, int qubit, const DarkCountModel& model);

struct DurationBreakdown {
    double total_s = 0.0;
    double generation_s = 0.0;   // photon generation incl. per-round overhead
    double latency_s = 0.0;      // communication rounds at tau_comm
    double sync_s = 0.0;         // frame-sync stalls at non-Clifford boundaries
    double local_s = 0.0;
    long rounds = 0;
    double attempts = 0.0;
    std::string dominant;
};

// Closed-form protocol duration. Blind gates need attempts photons total;
// each communication round fires at most n_comm attempts and costs
// max(generation, tau_comm); frame syncs add a round trip each.
DurationBreakdown computation_duration(double total_blind_gates, double total_local_layers,
                                       const PlatformProfile& profile, const ErrorModel& model);

// Optional sampling mode: attempts per gate drawn as a negative-binomial
// (sum over iterations of geometric photon counts) instead of the mean.
DurationBreakdown computation_duration_sampled(double total_blind_gates, double total_local_layers,
                                               const PlatformProfile& profile, const ErrorModel& model,
                                               RngStream& rng);

}  // namespace bqc::resmodel
