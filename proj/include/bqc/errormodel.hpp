#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bqc/errors.hpp"

namespace bqc {

// Noise and channel parameters shared by every Monte Carlo in the project.
//   eps_comm : single-qubit depolarizing probability after each delegated
//              B_theta gate (the per-gate rate; see b_theta_error_from_photon
//              for the conversion from a per-photon rate).
//   eps_loc  : two-qubit depolarizing probability after each local 2Q gate.
//   eta      : photon success probability per attempt.
//   p_dark   : dark-count probability per detection window.
//   r_h      : hiding fraction (fraction of hideable gates kept blind).
//   c        : angle resolution (angles are 2 pi p / 2^c).
struct ErrorModel {
    double eps_comm = 0.0;
    double eps_loc = 0.0;
    double eta = 1.0;
    double p_dark = 0.0;
    double r_h = 1.0;
    int c = 3;

    // Non-local fraction eps_comm / (eps_comm + eps_loc).
    double lambda() const {
        double s = eps_comm + eps_loc;
        if (s <= 0.0) return 0.0;
        return eps_comm / s;
    }

    void validate() const {
        auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!in01(eps_comm) || !in01(eps_loc) || !in01(p_dark) || !in01(r_h))
            throw std::invalid_argument("error model probabilities must lie in [0,1]");
        if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in [0,1]");
        if (c < 1 || c > 30) throw std::invalid_argument("angle resolution c out of range");
    }

    static ErrorModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Per-B_theta depolarizing rate from a per-photon rate: the loss-tolerant
// gate performs (2 - 2^{1-c}) successful photon measurements on average.
inline double b_theta_error_from_photon(double eps_photon, int c) {
    return (2.0 - std::pow(2.0, 1 - c)) * eps_photon;
}

inline ErrorModel ErrorModel::from_json(const nlohmann::json& j) {
    ErrorModel m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "eps_comm") m.eps_comm = it.value().get<double>();
        else if (k == "eps_loc") m.eps_loc = it.value().get<double>();
        else if (k == "eta") m.eta = it.value().get<double>();
        else if (k == "p_dark") m.p_dark = it.value().get<double>();
        else if (k == "r_h") m.r_h = it.value().get<double>();
        else if (k == "c") m.c = it.value().get<int>();
        else throw std::invalid_argument("unknown error-model key: " + k);
    }
    m.validate();
    return m;
}

inline nlohmann::json ErrorModel::to_json() const {
    return nlohmann::json{{"eps_comm", eps_comm}, {"eps_loc", eps_loc}, {"eta", eta},
                          {"p_dark", p_dark},     {"r_h", r_h},         {"c", c}};
}

}  // namespace bqc
