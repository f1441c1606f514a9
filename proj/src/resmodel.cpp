#include "bqc/resmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "bqc/blindgate.hpp"

namespace bqc::resmodel {

void PlatformProfile::validate() const {
    if (tau_gen < 0 || tau_local < 0 || tau_init < 0 || tau_motion < 0)
        throw std::invalid_argument("negative duration in platform profile");
    if (n_comm < 1 || n_ch < 1) throw std::invalid_argument("n_comm and n_ch must be >= 1");
    if (eta0 <= 0 || eta0 > 1) throw std::invalid_argument("eta0 must lie in (0,1]");
    if (attenuation_km <= 0 || distance_km < 0) throw std::invalid_argument("bad link geometry");
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
}

PlatformProfile PlatformProfile::preset(const std::string& name) {
    PlatformProfile p;
    if (name == "siv") {
        p.tau_gen = 5e-9;
        p.tau_local = 20e-9;
        p.tau_init = 40e-9;
        p.tau_motion = 0.0;
        p.n_comm = 3000;
        p.n_ch = 10;
        p.eta0 = 0.885;
        p.attenuation_km = 50.0;
        p.distance_km = 2.0;
        p.batch_size = 1000;
    } else if (name == "neutral-atom") {
        p.tau_gen = 100e-9;
        p.tau_local = 1e-3;
        p.tau_init = 0.0;  // reservoir replenishes pre-initialized atoms
        p.tau_motion = 0.5e-3;
        p.n_comm = 1000;
        p.n_ch = 1;
        p.eta0 = 0.855;  // cavity-enhanced; free-space would be 0.114
        p.attenuation_km = 50.0;
        p.distance_km = 10.0;
        p.batch_size = 1000;
    } else {
        throw std::invalid_argument("unknown platform preset: " + name);
    }
    return p;
}

PlatformProfile PlatformProfile::from_json(const nlohmann::json& j) {
    PlatformProfile p;
    if (j.contains("preset")) p = preset(j.at("preset").get<std::string>());
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "preset") continue;
        else if (k == "tau_gen") p.tau_gen = it.value().get<double>();
        else if (k == "tau_local") p.tau_local = it.value().get<double>();
        else if (k == "tau_init") p.tau_init = it.value().get<double>();
        else if (k == "tau_motion") p.tau_motion = it.value().get<double>();
        else if (k == "n_comm") p.n_comm = it.value().get<long>();
        else if (k == "n_ch") p.n_ch = it.value().get<long>();
        else if (k == "eta0") p.eta0 = it.value().get<double>();
        else if (k == "attenuation_km") p.attenuation_km = it.value().get<double>();
        else if (k == "distance_km") p.distance_km = it.value().get<double>();
        else if (k == "batch_size") p.batch_size = it.value().get<long>();
        else if (k == "c_fiber_m_per_s") p.c_fiber_m_per_s = it.value().get<double>();
        else throw std::invalid_argument("unknown platform-profile key: " + k);
    }
    p.validate();
    return p;
}

nlohmann::json PlatformProfile::to_json() const {
    return nlohmann::json{
        {"tau_gen", tau_gen},     {"tau_local", tau_local},
        {"tau_init", tau_init},   {"tau_motion", tau_motion},
        {"n_comm", n_comm},       {"n_ch", n_ch},
        {"eta0", eta0},           {"attenuation_km", attenuation_km},
        {"distance_km", distance_km}, {"batch_size", batch_size},
        {"c_fiber_m_per_s", c_fiber_m_per_s}};
}

double effective_click_error(const DarkCountModel& model) {
    if (model.p_dark + model.eta <= 0.0)
        throw std::invalid_argument("p_dark + eta must be positive");
    const double denom = model.p_dark + model.eta;
    return model.p_dark / denom + model.eps_comm * model.eta / denom;
}

double max_distance(double p_thresh, double p_dark, double eta0, double attenuation_km) {
    if (p_thresh <= 0.0 || p_thresh >= 1.0) throw std::invalid_argument("p_thresh must lie in (0,1)");
    if (p_dark == 0.0) return std::numeric_limits<double>::infinity();
    auto p_err = [&](double l_km) {
        const double eta = eta0 * std::pow(10.0, -l_km / attenuation_km);
        return p_dark / (p_dark + eta);
    };
    if (p_err(0.0) >= p_thresh)
        throw std::invalid_argument("dark-count error already exceeds the threshold at L = 0");
    double lo = 0.0, hi = attenuation_km;
    while (p_err(hi) < p_thresh) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) return std::numeric_limits<double>::infinity();
    }
    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        (p_err(mid) < p_thresh ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void dark_count_channel(DensityMatrix& rho, int qubit, const DarkCountModel& model) {
    if (model.p_dark + model.eta <= 0.0)
        throw std::invalid_argument("p_dark + eta must be positive");
    const double w_dark = model.p_dark / (model.p_dark + model.eta);

    DensityMatrix dephased = rho;
    dephased.apply_dephasing_z(qubit);

    DensityMatrix depolarized = rho;
    // (1 - eps) rho + eps * (X rho X + Y rho Y + Z rho Z)/3: the depolarizing
    // helper applies (1-e) rho + e/3 sum, which is this channel directly
    depolarized.apply_depolarizing(qubit, model.eps_comm);

    rho = DensityMatrix::from_matrix(
        rho.n_qubits(), w_dark * dephased.matrix() + (1.0 - w_dark) * depolarized.matrix());
}

namespace {

DurationBreakdown duration_from_attempts(double attempts, double total_blind_gates,
                                         double total_local_layers, const PlatformProfile& profile) {
    DurationBreakdown out;
    out.attempts = attempts;
    const double tau_comm = profile.tau_comm();
    const long rounds = attempts > 0 ? long(std::ceil(attempts / double(profile.n_comm))) : 0;
    out.rounds = rounds;
    out.generation_s = attempts * profile.tau_gen / double(profile.n_ch) +
                       double(rounds) * (profile.tau_init + profile.tau_motion);
    out.latency_s = double(rounds) * tau_comm;
    const long syncs = total_blind_gates > 0
                           ? long(std::ceil(total_blind_gates / double(profile.batch_size)))
                           : 0;
    out.sync_s = double(syncs) * tau_comm;
    out.local_s = total_local_layers * profile.tau_local;
    out.total_s = std::max(out.generation_s, out.latency_s) + out.sync_s + out.local_s;
    if (out.generation_s >= out.latency_s && out.generation_s >= out.local_s)
        out.dominant = "generation";
    else if (out.latency_s >= out.local_s)
        out.dominant = "latency";
    else
        out.dominant = "local";
    return out;
}

}  // namespace

DurationBreakdown computation_duration(double total_blind_gates, double total_local_layers,
                                       const PlatformProfile& profile, const ErrorModel& model) {
    profile.validate();
    if (total_blind_gates < 0 || total_local_layers < 0)
        throw std::invalid_argument("negative counts");
    const double eta = profile.eta();
    const double attempts =
        total_blind_gates > 0 ? expected_photons_memory(total_blind_gates, eta, model.c) : 0.0;
    return duration_from_attempts(attempts, total_blind_gates, total_local_layers, profile);
}

DurationBreakdown computation_duration_sampled(double total_blind_gates, double total_local_layers,
                                               const PlatformProfile& profile, const ErrorModel& model,
                                               RngStream& rng) {
    profile.validate();
    const double eta = profile.eta();
    if (eta <= 0) throw std::invalid_argument("zero link efficiency");
    double attempts = 0;
    const long gates = long(total_blind_gates);
    for (long g = 0; g < gates; ++g) {
        // iterations: geometric over the teleport outcome, capped at c
        int iters = 1;
        while (iters < model.c && rng.bit()) ++iters;
        for (int i = 0; i < iters; ++i) {
            // photons per heralded success: geometric(eta)
            attempts += 1.0;
            while (!rng.bernoulli(eta)) attempts += 1.0;
        }
    }
    return duration_from_attempts(attempts, total_blind_gates, total_local_layers, profile);
}

}  // namespace bqc::resmodel
