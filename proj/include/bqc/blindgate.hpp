#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bqc/angleset.hpp"
#include "bqc/errormodel.hpp"
#include "bqc/rng.hpp"

namespace bqc {

// Loss-tolerant delegated rotation gate, expressed as an explicit two-party
// state machine. The same transitions drive the in-process simulation and the
// wire protocol, so both transports stay in lockstep by construction.
//
// One iteration j: the server repeatedly sends photons entangled with a fresh
// communication qubit until the client heralds a click (outcome s_j, secret).
// The server then entangles the communication qubit with the computation
// qubit and measures it (outcome m_j, broadcast). m_j = 0 terminates; m_j = 1
// flips the sign of the applied rotation and the next iteration runs with the
// doubled angle. With angles restricted to 2 pi p / 2^c the recursion is
// guaranteed to terminate after at most c iterations, because the telescoped
// rotation (1 - 2^c) theta is congruent to theta mod 2 pi.
class BGateSession {
public:
    enum class Status { AwaitingPhoton, AwaitingTeleport, Done };

    BGateSession(AngleSet set, uint32_t target_index)
        : set_(set), target_p_(set.wrap(target_index)) {}

    Status status() const { return status_; }
    int iteration() const { return iteration_; }
    const AngleSet& angle_set() const { return set_; }
    uint32_t target_index() const { return target_p_; }

    // Angle index for the current iteration: 2^j * p (mod 2^c).
    uint32_t current_angle_index() const {
        return set_.wrap(int64_t(target_p_) << iteration_);
    }
    double current_angle() const { return set_.angle(current_angle_index()); }

    long photons_sent() const { return photons_sent_; }
    long photons_measured() const { return photons_measured_; }
    long dark_clicks() const { return dark_clicks_; }
    int frame_bit() const { return s_accum_; }

    // Implemented rotation so far, as a signed multiple of 2 pi / 2^c.
    uint32_t implemented_index() const { return set_.wrap(accumulated_p_); }

    void photon_sent() {
        require(status_ == Status::AwaitingPhoton, "photon while not awaiting one");
        ++photons_sent_;
    }
    void photon_lost() {
        require(status_ == Status::AwaitingPhoton, "loss report while not awaiting photon");
    }
    void photon_measured(int s, bool dark = false) {
        require(status_ == Status::AwaitingPhoton, "click while not awaiting photon");
        ++photons_measured_;
        if (dark) ++dark_clicks_;
        s_accum_ ^= (s & 1);
        status_ = Status::AwaitingTeleport;
    }
    void teleport_result(int m) {
        require(status_ == Status::AwaitingTeleport, "teleport result while not awaiting one");
        const int64_t step = int64_t(current_angle_index());
        if ((m & 1) == 0) {
            accumulated_p_ += step;
            status_ = Status::Done;
        } else {
            accumulated_p_ -= step;
            ++iteration_;
            if (iteration_ >= set_.c) {
                // exhausted: the telescoped rotation already equals the target
                status_ = Status::Done;
            } else {
                status_ = Status::AwaitingPhoton;
            }
        }
        if (status_ == Status::Done && implemented_index() != target_p_)
            throw std::logic_error("B-gate rotation accounting is inconsistent");
    }

private:
    static void require(bool ok, const char* what) {
        if (!ok) throw std::logic_error(std::string("B-gate protocol violation: ") + what);
    }

    AngleSet set_;
    uint32_t target_p_;
    int iteration_ = 0;
    int s_accum_ = 0;
    int64_t accumulated_p_ = 0;
    long photons_sent_ = 0;
    long photons_measured_ = 0;
    long dark_clicks_ = 0;
    Status status_ = Status::AwaitingPhoton;
};

struct BGateOutcome {
    uint32_t angle_index = 0;  // implemented rotation (== target by construction)
    int s = 0;                 // accumulated frame bit
    long photons_sent = 0;
    long photons_measured = 0;
    long dark_clicks = 0;
    int iterations = 0;
};

// Drive one session to completion. Client-side randomness (loss, dark counts,
// measurement outcomes s) comes from `client_rng`; the server's teleport
// outcomes m come from `server_rng`. Splitting the streams this way keeps the
// wire harness and the in-process run bit-identical under equal seeds.
inline BGateOutcome run_b_gate(BGateSession& session, const ErrorModel& model,
                               RngStream& client_rng, RngStream& server_rng) {
    if (model.eta <= 0.0) throw std::invalid_argument("eta = 0 never terminates");
    while (session.status() != BGateSession::Status::Done) {
        if (session.status() == BGateSession::Status::AwaitingPhoton) {
            session.photon_sent();
            const bool real_click = client_rng.bernoulli(model.eta);
            bool dark_click = false;
            if (!real_click && model.p_dark > 0.0) dark_click = client_rng.bernoulli(model.p_dark);
            if (real_click || dark_click) {
                session.photon_measured(client_rng.bit(), dark_click);
            } else {
                session.photon_lost();
            }
        } else {
            session.teleport_result(server_rng.bit());
        }
    }
    BGateOutcome out;
    out.angle_index = session.implemented_index();
    out.s = session.frame_bit();
    out.photons_sent = session.photons_sent();
    out.photons_measured = session.photons_measured();
    out.dark_clicks = session.dark_clicks();
    out.iterations = session.iteration() < session.angle_set().c ? session.iteration() + 1
                                                                 : session.angle_set().c;
    return out;
}

// Expected photons for N loss-tolerant gates with quantum memories:
// N (2 - 2^{1-c}) / eta.
inline double expected_photons_memory(double n_gates, double eta, int c) {
    if (n_gates < 0) throw std::invalid_argument("negative gate count");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    if (c > 30) c = 30;
    return n_gates * (2.0 - std::pow(2.0, 1 - c)) / eta;
}

// Mean photons consumed by one failed memoryless attempt, from the defining
// sum (1/(1-eta^N)) sum_{n=1..N} eta^{n-1} (1-eta) n. The printed closed form
// 1/(1-eta) + N eta^N/(1-eta^N) disagrees in sign with this sum (the sum
// equals 1/(1-eta) - N eta^N/(1-eta^N)); the sum is what the recurrence needs
// and what Monte Carlo reproduces.
inline double memoryless_fail_photons(int n_gates, double eta) {
    if (n_gates < 1) throw std::invalid_argument("need at least one gate");
    if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("eta must lie in (0,1)");
    const double eta_n = std::pow(eta, n_gates);
    double sum = 0.0;
    for (int n = 1; n <= n_gates; ++n) sum += std::pow(eta, n - 1) * (1.0 - eta) * double(n);
    return sum / (1.0 - eta_n);
}

// Solution of N_gamma = eta^N N + (1 - eta^N)(N_gamma + N_fail):
// N_gamma = N + (1 - eta^N)/eta^N * N_fail.
inline double expected_photons_memoryless(int n_gates, double eta) {
    const double eta_n = std::pow(eta, n_gates);
    const double n_fail = memoryless_fail_photons(n_gates, eta);
    return double(n_gates) + (1.0 - eta_n) / eta_n * n_fail;
}

inline double circuit_efficiency(double n_gamma) {
    if (n_gamma <= 0.0) throw std::invalid_argument("photon count must be positive");
    return 1.0 / n_gamma;
}

// Monte Carlo of the memoryless protocol: a run of N photons must all be
// measured; any loss restarts the attempt. Returns mean photons per circuit.
inline double simulate_memoryless_photons(int n_gates, double eta, RngStream& rng, long trials) {
    if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("eta must lie in (0,1)");
    double total = 0.0;
    for (long t = 0; t < trials; ++t) {
        long photons = 0;
        bool done = false;
        while (!done) {
            int n = 0;
            bool ok = true;
            while (n < n_gates) {
                ++n;
                if (!rng.bernoulli(eta)) { ok = false; break; }
            }
            photons += n;
            done = ok;
        }
        total += double(photons);
    }
    return total / double(trials);
}

}  // namespace bqc
