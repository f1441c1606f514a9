#include "bqc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bqc/blindgate.hpp"
#include "bqc/circuitgen.hpp"
#include "bqc/statevec.hpp"
#include "bqc/unitary.hpp"

namespace bqc::analysis {

namespace {

size_t count_blind(const CircuitIR& circuit) {
    size_t k = 0;
    for (const auto& g : circuit.gates)
        if (g.kind == CircuitGateKind::BTheta) ++k;
    return k;
}

// Structural fingerprint that ignores blind angle indices: two circuits are
// comparable for blindness iff the server-visible structure is identical.
std::string revealed_structure(const CircuitIR& circuit) {
    nlohmann::json j = circuit.to_json();
    for (auto& g : j["gates"])
        if (g["kind"] == "b_theta") g.erase("p");
    j.erase("seed");
    return j.dump();
}

}  // namespace

DensityMatrix server_view(const CircuitIR& circuit, std::span<const double> blind_angles,
                          bool average_outcomes) {
    const int n = circuit.n_qubits;
    if (n > DensityMatrix::kMaxQubits)
        throw CapacityError("blindness check needs n <= 6");
    const size_t k = count_blind(circuit);
    if (!blind_angles.empty() && blind_angles.size() != k)
        throw std::invalid_argument("blind angle assignment length mismatch");
    AngleSet set(circuit.c);

    const size_t branches = average_outcomes ? (size_t(1) << k) : 1;
    const Eigen::Index dim = Eigen::Index(1) << n;
    Mat acc = Mat::Zero(dim, dim);
    for (size_t branch = 0; branch < branches; ++branch) {
        StateVector psi(n);
        size_t blind_i = 0;
        for (const auto& g : circuit.gates) {
            switch (g.kind) {
                case CircuitGateKind::BTheta: {
                    const double theta = blind_angles.empty() ? set.angle(g.p) : blind_angles[blind_i];
                    const int s = int((branch >> blind_i) & 1);
                    ++blind_i;
                    psi.apply(GateSpec::rz(theta), g.qubits[0]);
                    if (s) psi.apply(GateSpec::named(GateKind::Z), g.qubits[0]);
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
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j)
                acc(i, j) += psi.amp(size_t(i)) * std::conj(psi.amp(size_t(j)));
    }
    acc /= double(branches);
    return DensityMatrix::from_matrix(n, acc);
}

double verify_blindness(const CircuitIR& circuit, std::span<const double> angles_a,
                        std::span<const double> angles_b, bool average_outcomes) {
    DensityMatrix rho_a = server_view(circuit, angles_a, average_outcomes);
    DensityMatrix rho_b = server_view(circuit, angles_b, average_outcomes);
    return trace_distance(rho_a, rho_b);
}

double verify_blindness(const CircuitIR& a, const CircuitIR& b, bool average_outcomes) {
    if (revealed_structure(a) != revealed_structure(b))
        throw std::invalid_argument("circuits differ in revealed structure; states not comparable");
    DensityMatrix rho_a = server_view(a, {}, average_outcomes);
    DensityMatrix rho_b = server_view(b, {}, average_outcomes);
    return trace_distance(rho_a, rho_b);
}

double tradeoff_lower_bound(size_t total_bricks, double r_h, double eps_comm, double eps_loc) {
    const double f_comm = 1.0 - eps_comm;
    const double f_cz = 1.0 - eps_loc;
    const double f_blind = std::pow(f_comm, 7.0 / 3.0) * std::pow(f_cz, 2.0 / 3.0);
    const double f_local = f_cz;
    const double n = double(total_bricks);
    return std::pow(f_blind / f_local, n * r_h) * std::pow(f_local, n);
}

namespace {

// One noisy trajectory: the circuit's ideal gates with one Pauli sampled per
// noise channel. Channels sit after each delegated rotation (1Q depolarizing,
// eps_comm) and after each local two-qubit gate (2Q depolarizing, eps_loc);
// the CZs inside a blind entangling brick are local gates and carry eps_loc.
void apply_trajectory(StateVector& psi, const CircuitIR& circuit, const ErrorModel& model,
                      RngStream& rng) {
    AngleSet set(circuit.c);
    auto pauli_1q = [&](int q) {
        if (model.eps_comm <= 0) return;
        const double u = rng.uniform();
        if (u >= model.eps_comm) return;
        const int which = int(u / (model.eps_comm / 3.0));
        const GateKind ps[3] = {GateKind::X, GateKind::Y, GateKind::Z};
        psi.apply(GateSpec::named(ps[std::min(which, 2)]), q);
    };
    auto pauli_2q = [&](int q0, int q1) {
        if (model.eps_loc <= 0) return;
        const double u = rng.uniform();
        if (u >= model.eps_loc) return;
        int which = int(u / (model.eps_loc / 15.0));
        which = std::min(which, 14) + 1;  // 1..15, skipping II
        const GateKind ps[4] = {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z};
        const int a = which & 3, b = (which >> 2) & 3;
        if (a) psi.apply(GateSpec::named(ps[a]), q0);
        if (b) psi.apply(GateSpec::named(ps[b]), q1);
    };
    for (const auto& g : circuit.gates) {
        switch (g.kind) {
            case CircuitGateKind::BTheta:
                psi.apply(GateSpec::rz(set.angle(g.p)), g.qubits[0]);
                pauli_1q(g.qubits[0]);
                break;
            case CircuitGateKind::LocalClifford:
                if (g.qubits.size() == 2) {
                    psi.apply(GateSpec::named(g.clifford), g.qubits[0], g.qubits[1]);
                    pauli_2q(g.qubits[0], g.qubits[1]);
                } else {
                    psi.apply(GateSpec::named(g.clifford), g.qubits[0]);
                }
                break;
            case CircuitGateKind::Local1QRot:
                psi.apply(GateSpec::rz(g.theta), g.qubits[0]);
                break;
            case CircuitGateKind::Local2Q:
                psi.apply(GateSpec::u2q(local_2q_unitary(g.theta)), g.qubits[0], g.qubits[1]);
                pauli_2q(g.qubits[0], g.qubits[1]);
                break;
        }
    }
}

void apply_exact_channels(DensityMatrix& rho, const CircuitIR& circuit, const ErrorModel& model) {
    AngleSet set(circuit.c);
    for (const auto& g : circuit.gates) {
        switch (g.kind) {
            case CircuitGateKind::BTheta:
                rho.apply(GateSpec::rz(set.angle(g.p)), g.qubits[0]);
                rho.apply_depolarizing(g.qubits[0], model.eps_comm);
                break;
            case CircuitGateKind::LocalClifford:
                if (g.qubits.size() == 2) {
                    rho.apply(GateSpec::named(g.clifford), g.qubits[0], g.qubits[1]);
                    rho.apply_depolarizing(g.qubits[0], g.qubits[1], model.eps_loc);
                } else {
                    rho.apply(GateSpec::named(g.clifford), g.qubits[0]);
                }
                break;
            case CircuitGateKind::Local1QRot:
                rho.apply(GateSpec::rz(g.theta), g.qubits[0]);
                break;
            case CircuitGateKind::Local2Q:
                rho.apply(GateSpec::u2q(local_2q_unitary(g.theta)), g.qubits[0], g.qubits[1]);
                rho.apply_depolarizing(g.qubits[0], g.qubits[1], model.eps_loc);
                break;
        }
    }
}

}  // namespace

TradeoffReport tradeoff_sweep(int n, int depth, std::span<const double> r_h_grid,
                              const ErrorModel& model, long shots, uint64_t seed,
                              std::optional<NoiseMode> forced_mode) {
    model.validate();
    if (shots < 2) throw std::invalid_argument("need at least 2 shots for a standard error");
    NoiseMode mode;
    if (forced_mode) {
        mode = *forced_mode;
        if (mode == NoiseMode::Exact && n > DensityMatrix::kMaxQubits)
            throw CapacityError("exact mode caps at 6 qubits");
        if (mode == NoiseMode::Trajectory && n > 10)
            throw CapacityError("trajectory mode caps at 10 qubits");
    } else {
        if (n <= DensityMatrix::kMaxQubits)
            mode = NoiseMode::Exact;
        else if (n <= 10)
            mode = NoiseMode::Trajectory;
        else
            throw CapacityError("trade-off sweep caps at 10 qubits");
    }

    // Trajectory estimate note: for a pure ideal state the per-shot overlap
    // |<ideal|noisy>|^2 is an unbiased estimator of F(rho_noise, rho_ideal);
    // its shot mean carries the usual binomial-like sampling error reported
    // as stderr, no additional bias.
    TradeoffReport report;
    report.n_qubits = n;
    report.depth = depth;
    report.shots = shots;
    report.seed = seed;
    report.mode = mode;
    RngStream root(seed, "tradeoff");

    for (double r_h : r_h_grid) {
        double sum = 0, sum_sq = 0;
        size_t n_blind = 0;
        for (long shot = 0; shot < shots; ++shot) {
            RngStream shot_rng = root.split("shot", uint64_t(shot) * 1000003 + uint64_t(r_h * 997));
            const uint64_t circuit_seed = shot_rng.u64();
            CircuitIR circuit = circuitgen::build_bricklayer(n, depth, r_h, model.c, circuit_seed);
            n_blind = circuit.n_b_theta();
            double f = 0;
            if (mode == NoiseMode::Exact) {
                StateVector ideal(n);
                circuit.apply_ideal(ideal);
                DensityMatrix rho(n);
                apply_exact_channels(rho, circuit, model);
                f = fidelity(rho, DensityMatrix::from_state(ideal));
            } else {
                StateVector ideal(n);
                circuit.apply_ideal(ideal);
                StateVector noisy(n);
                RngStream traj = shot_rng.split("traj");
                apply_trajectory(noisy, circuit, model, traj);
                f = std::norm(ideal.inner(noisy));
            }
            sum += f;
            sum_sq += f * f;
        }
        TradeoffPoint pt;
        pt.r_h = r_h;
        pt.shots = shots;
        pt.fidelity = sum / double(shots);
        const double var = std::max(0.0, sum_sq / double(shots) - pt.fidelity * pt.fidelity);
        pt.fidelity_stderr = std::sqrt(var / double(shots));
        pt.efficiency = n_blind == 0 ? 1.0
                                     : circuit_efficiency(expected_photons_memory(
                                           double(n_blind), model.eta, model.c));
        pt.log2_unitaries = double(model.c) * double(n_blind);
        pt.lower_bound =
            tradeoff_lower_bound(circuitgen::bricklayer_brick_count(n, depth), r_h, model.eps_comm, model.eps_loc);
        report.points.push_back(pt);
    }
    return report;
}

namespace {

Mat sample_unitary(EnsembleFamily family, const CircuitIR& structure, int n, int k_unused,
                   const FramePotentialOptions& opts, RngStream& rng) {
    (void)k_unused;
    if (family == EnsembleFamily::Haar) {
        // QR of a Ginibre matrix with R-phase fixing
        const Eigen::Index d = Eigen::Index(1) << n;
        Mat g(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cx(rng.normal(), rng.normal());
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ();
        Mat r = qr.matrixQR();
        for (Eigen::Index i = 0; i < d; ++i) {
            cx ph = r(i, i) / std::abs(r(i, i));
            q.col(i) *= ph;
        }
        return q;
    }
    AngleSet set(opts.c);
    std::vector<double> angles(structure.n_b_theta());
    for (auto& a : angles)
        a = opts.continuous_angles ? rng.uniform(0.0, 2.0 * kPi) : set.angle(int64_t(rng.below(set.size())));
    return circuit_unitary(structure, angles);
}

CircuitIR build_structure(EnsembleFamily family, int n, int depth, int c, uint64_t seed,
                          double r_h) {
    if (family == EnsembleFamily::Bricklayer)
        return circuitgen::build_bricklayer(n, depth, r_h, c, seed);
    if (family == EnsembleFamily::PauliRotation) {
        // depth layers, each one theta-blind rotation of a random non-identity
        // string (structure fixed by the seed; only angles stay hidden)
        RngStream rng(seed, "pr_structure");
        CircuitIR ir;
        ir.n_qubits = n;
        ir.c = c;
        ir.family = "pauli_rotation_seq";
        ir.depth = depth;
        ir.r_h = 1.0;
        ir.seed = seed;
        for (int l = 0; l < depth; ++l) {
            PauliString p;
            do {
                p.letters.clear();
                for (int q = 0; q < n; ++q)
                    p.letters.push_back(static_cast<PauliString::Letter>(rng.below(4)));
            } while (p.is_identity());
            CircuitIR rot = circuitgen::build_pauli_rotation(p, 0, c);
            for (auto& g : rot.gates) ir.gates.push_back(std::move(g));
        }
        ir.validate();
        return ir;
    }
    CircuitIR dummy;  // Haar needs no structure
    dummy.n_qubits = n;
    dummy.c = c;
    dummy.family = "haar";
    dummy.depth = depth;
    return dummy;
}

}  // namespace

FramePotentialEstimate frame_potential(EnsembleFamily family, int n, int depth, int k,
                                       long samples, uint64_t seed,
                                       const FramePotentialOptions& opts) {
    if (k < 1 || k > 3) throw std::invalid_argument("frame potential supports k in {1,2,3}");
    if (n > 8) throw CapacityError("frame potential caps at 8 qubits");
    if (samples < 1000) throw std::invalid_argument("need at least 10^3 samples");

    int m = opts.n_unitaries;
    if (m <= 0) {
        m = 2;
        while (int64_t(m) * (m - 1) < samples) ++m;
    }
    CircuitIR structure = build_structure(family, n, depth, opts.c, seed, opts.r_h);
    RngStream root(seed, "frame_potential");

    std::vector<Mat> unitaries;
    unitaries.reserve(size_t(m));
    for (int i = 0; i < m; ++i) {
        RngStream rng = root.split("unitary", uint64_t(i));
        unitaries.push_back(sample_unitary(family, structure, n, k, opts, rng));
    }

    // all ordered pairs i != j (|Tr| is symmetric, so accumulate unordered
    // pairs once); per-unitary row sums feed the delete-one jackknife
    std::vector<double> row_sum(size_t(m), 0.0);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const cx tr = (unitaries[size_t(i)].adjoint() * unitaries[size_t(j)]).trace();
            const double v = std::pow(std::norm(tr), k);
            total += 2.0 * v;
            row_sum[size_t(i)] += 2.0 * v;
            row_sum[size_t(j)] += 2.0 * v;
        }
    }
    const double pairs = double(m) * double(m - 1);
    const double mean = total / pairs;

    // delete-one jackknife over unitaries
    double jk_mean = 0.0;
    std::vector<double> jk(static_cast<size_t>(m), 0.0);
    const double pairs_m1 = double(m - 1) * double(m - 2);
    for (int i = 0; i < m; ++i) {
        jk[size_t(i)] = (total - row_sum[size_t(i)]) / pairs_m1;
        jk_mean += jk[size_t(i)];
    }
    jk_mean /= double(m);
    double jk_var = 0.0;
    for (int i = 0; i < m; ++i) jk_var += (jk[size_t(i)] - jk_mean) * (jk[size_t(i)] - jk_mean);
    jk_var *= double(m - 1) / double(m);

    FramePotentialEstimate est;
    est.family = family;
    est.k = k;
    est.n_qubits = n;
    est.depth = depth;
    est.blind_gates = structure.n_b_theta();
    est.samples = int64_t(m) * (m - 1);
    est.mean = mean;
    est.stderr_ = std::sqrt(jk_var);

    const double d_hilb = double(Eigen::Index(1) << n);
    double k_fact = 1;
    for (int i = 2; i <= k; ++i) k_fact *= i;
    const double excess = mean - k_fact;
    est.delta_eps = std::pow(d_hilb, k) * std::sqrt(std::max(0.0, excess));
    est.delta_eps_err = excess > 0 ? std::pow(d_hilb, k) * est.stderr_ / (2.0 * std::sqrt(excess))
                                   : std::pow(d_hilb, k) * std::sqrt(est.stderr_);
    return est;
}

DecayFit fit_decay(std::span<const FramePotentialEstimate> estimates) {
    // keep points whose excess over the Haar floor clears the noise
    std::vector<double> xs, ys, ws;
    for (const auto& e : estimates) {
        if (e.delta_eps <= 0) continue;
        if (e.delta_eps < 2.0 * e.delta_eps_err) continue;  // at the noise floor
        const double sigma_log = e.delta_eps_err / e.delta_eps;
        xs.push_back(double(e.depth));
        ys.push_back(std::log(e.delta_eps));
        ws.push_back(1.0 / (sigma_log * sigma_log + 1e-12));
    }
    if (xs.size() < 4) throw std::invalid_argument("fit_decay needs >= 4 depths above the noise floor");

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sw += ws[i];
        swx += ws[i] * xs[i];
        swy += ws[i] * ys[i];
        swxx += ws[i] * xs[i] * xs[i];
        swxy += ws[i] * xs[i] * ys[i];
    }
    const double det = sw * swxx - swx * swx;
    const double slope = (sw * swxy - swx * swy) / det;
    const double intercept = (swxx * swy - swx * swxy) / det;
    const double var_slope = sw / det;
    const double var_intercept = swxx / det;

    DecayFit fit;
    fit.amplitude = std::exp(intercept);
    fit.scale = -1.0 / slope;
    fit.amplitude_err = fit.amplitude * std::sqrt(var_intercept);
    fit.scale_err = std::sqrt(var_slope) / (slope * slope);
    double chi2 = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        chi2 += ws[i] * r * r;
    }
    fit.residual = std::sqrt(chi2 / double(xs.size()));
    fit.points_used = int(xs.size());
    return fit;
}

std::vector<MatchedPair> match_expressibility(std::span<const FramePotentialEstimate> family_a,
                                              std::span<const FramePotentialEstimate> family_b) {
    std::vector<const FramePotentialEstimate*> b_sorted;
    for (const auto& e : family_b)
        if (e.delta_eps > 0) b_sorted.push_back(&e);
    std::sort(b_sorted.begin(), b_sorted.end(),
              [](auto* x, auto* y) { return x->blind_gates < y->blind_gates; });
    if (b_sorted.size() < 2) throw std::invalid_argument("family B needs >= 2 usable depths");

    std::vector<MatchedPair> out;
    for (const auto& ea : family_a) {
        if (ea.delta_eps <= 0) continue;
        const double target = std::log(ea.delta_eps);
        // find bracketing pair on B's (gates, log delta_eps) curve
        for (size_t i = 0; i + 1 < b_sorted.size(); ++i) {
            const double y0 = std::log(b_sorted[i]->delta_eps);
            const double y1 = std::log(b_sorted[i + 1]->delta_eps);
            const bool inside = (target <= y0 && target >= y1) || (target >= y0 && target <= y1);
            if (!inside) continue;
            const double x0 = double(b_sorted[i]->blind_gates);
            const double x1 = double(b_sorted[i + 1]->blind_gates);
            const double t = (y1 == y0) ? 0.5 : (target - y0) / (y1 - y0);
            MatchedPair mp;
            mp.gates_a = double(ea.blind_gates);
            mp.gates_b = x0 + t * (x1 - x0);
            // propagate A's log-error through B's local slope
            const double slope = (y1 - y0) / (x1 - x0 + 1e-12);
            const double sigma_log_a = ea.delta_eps_err / ea.delta_eps;
            mp.gates_b_err = std::abs(sigma_log_a / (slope + (slope == 0 ? 1e-12 : 0)));
            out.push_back(mp);
            break;
        }
    }
    if (out.empty()) throw std::invalid_argument("no overlap between the two families' delta_eps ranges");
    return out;
}

LineFit fit_line(std::span<const MatchedPair> pairs) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (const auto& p : pairs) {
        const double w = 1.0 / (p.gates_b_err * p.gates_b_err + 1e-9);
        sw += w;
        swx += w * p.gates_a;
        swy += w * p.gates_b;
        swxx += w * p.gates_a * p.gates_a;
        swxy += w * p.gates_a * p.gates_b;
    }
    const double det = sw * swxx - swx * swx;
    LineFit fit;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    fit.slope_err = std::sqrt(sw / det);
    fit.intercept_err = std::sqrt(swxx / det);
    return fit;
}

}  // namespace bqc::analysis
