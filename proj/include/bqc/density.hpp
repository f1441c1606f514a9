#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <span>
#include <stdexcept>
#include <vector>

#include "bqc/gates.hpp"
#include "bqc/statevec.hpp"

namespace bqc {

// Dense density operator for up to 6 qubits (the square of the statevector
// cost caps this lower than StateVector's 12).
class DensityMatrix {
public:
    static constexpr int kMaxQubits = 6;

    explicit DensityMatrix(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits)
            throw CapacityError("DensityMatrix supports 1..6 qubits, got " + std::to_string(n_qubits));
        const Eigen::Index d = Eigen::Index(1) << n_;
        rho_ = Mat::Zero(d, d);
        rho_(0, 0) = 1.0;
    }

    static DensityMatrix from_state(const StateVector& psi) {
        DensityMatrix dm(psi.n_qubits());
        const Eigen::Index d = Eigen::Index(psi.dim());
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                dm.rho_(i, j) = psi.amp(size_t(i)) * std::conj(psi.amp(size_t(j)));
        return dm;
    }

    static DensityMatrix maximally_mixed(int n_qubits) {
        DensityMatrix dm(n_qubits);
        const Eigen::Index d = dm.rho_.rows();
        dm.rho_ = Mat::Identity(d, d) / double(d);
        return dm;
    }

    static DensityMatrix from_matrix(int n_qubits, Mat m) {
        DensityMatrix dm(n_qubits);
        if (m.rows() != dm.rho_.rows() || m.cols() != dm.rho_.cols())
            throw std::invalid_argument("matrix dimension != 2^n");
        dm.rho_ = std::move(m);
        dm.check_valid();
        return dm;
    }

    int n_qubits() const { return n_; }
    const Mat& matrix() const { return rho_; }
    Mat& matrix() { return rho_; }

    double trace_real() const { return rho_.trace().real(); }

    void check_valid(double tol = 1e-10, double eig_tol = 1e-9) const {
        if (std::abs(rho_.trace().real() - 1.0) > tol || std::abs(rho_.trace().imag()) > tol)
            throw std::runtime_error("density matrix trace != 1");
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw std::runtime_error("density matrix not Hermitian");
        Eigen::SelfAdjointEigenSolver<Mat> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -eig_tol)
            throw std::runtime_error("density matrix has negative eigenvalue");
    }

    void apply(const GateSpec& g, std::span<const int> qubits) {
        Mat u = embed_gate(g.matrix(), qubits, n_);
        rho_ = u * rho_ * u.adjoint();
    }
    void apply(const GateSpec& g, int q) { int qs[1] = {q}; apply(g, qs); }
    void apply(const GateSpec& g, int q0, int q1) { int qs[2] = {q0, q1}; apply(g, qs); }

    // rho -> (1-eps) rho + eps/3 sum_P P rho P over single-qubit Paulis, or
    // the 15-term two-qubit version with weight eps/15.
    void apply_depolarizing(std::span<const int> qubits, double eps) {
        if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("depolarizing rate outside [0,1]");
        if (qubits.size() == 1) {
            Mat acc = (1.0 - eps) * rho_;
            const GateKind paulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};
            for (GateKind p : paulis) {
                Mat u = embed_gate(GateSpec::named(p).matrix(), qubits, n_);
                acc += (eps / 3.0) * (u * rho_ * u.adjoint());
            }
            rho_ = std::move(acc);
        } else if (qubits.size() == 2) {
            Mat acc = (1.0 - eps) * rho_;
            const GateKind paulis[4] = {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z};
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    if (a == 0 && b == 0) continue;
                    Mat u2 = gatemat::kron(GateSpec::named(paulis[b]).matrix(),
                                           GateSpec::named(paulis[a]).matrix());
                    // kron(B, A): A acts on qubits[0] (low index bit), B on qubits[1]
                    Mat u = embed_gate(u2, qubits, n_);
                    acc += (eps / 15.0) * (u * rho_ * u.adjoint());
                }
            }
            rho_ = std::move(acc);
        } else {
            throw std::invalid_argument("depolarizing channel takes 1 or 2 qubits");
        }
    }
    void apply_depolarizing(int q, double eps) { int qs[1] = {q}; apply_depolarizing(qs, eps); }
    void apply_depolarizing(int q0, int q1, double eps) { int qs[2] = {q0, q1}; apply_depolarizing(qs, eps); }

    // Full Z-dephasing on one qubit: rho -> (rho + Z rho Z)/2.
    void apply_dephasing_z(int q) {
        int qs[1] = {q};
        Mat z = embed_gate(gatemat::pauli_z(), qs, n_);
        rho_ = 0.5 * (rho_ + z * rho_ * z.adjoint());
    }

    DensityMatrix partial_trace(std::span<const int> keep) const {
        if (keep.empty()) throw std::invalid_argument("partial_trace: keep list is empty");
        for (int q : keep)
            if (q < 0 || q >= n_) throw std::out_of_range("partial_trace: qubit out of range");
        const int k = static_cast<int>(keep.size());
        DensityMatrix out(k);
        const Eigen::Index dout = Eigen::Index(1) << k;
        out.rho_ = Mat::Zero(dout, dout);
        std::vector<int> traced;
        for (int q = 0; q < n_; ++q) {
            bool kept = false;
            for (int kq : keep)
                if (kq == q) kept = true;
            if (!kept) traced.push_back(q);
        }
        const size_t dim_tr = size_t(1) << traced.size();
        for (Eigen::Index i = 0; i < dout; ++i) {
            for (Eigen::Index j = 0; j < dout; ++j) {
                cx acc(0, 0);
                for (size_t t = 0; t < dim_tr; ++t) {
                    size_t row = 0, col = 0;
                    for (int b = 0; b < k; ++b) {
                        if (i & (Eigen::Index(1) << b)) row |= size_t(1) << keep[b];
                        if (j & (Eigen::Index(1) << b)) col |= size_t(1) << keep[b];
                    }
                    for (size_t b = 0; b < traced.size(); ++b) {
                        if (t & (size_t(1) << b)) {
                            row |= size_t(1) << traced[b];
                            col |= size_t(1) << traced[b];
                        }
                    }
                    acc += rho_(Eigen::Index(row), Eigen::Index(col));
                }
                out.rho_(i, j) = acc;
            }
        }
        return out;
    }

private:
    int n_;
    Mat rho_;
};

// Uhlmann fidelity F = (tr sqrt(sqrt(rho_n) rho_i sqrt(rho_n)))^2. A pure
// argument reduces it to an exact overlap; the general case uses the
// trace-norm form F = ||sqrt(rho_n) sqrt(rho_i)||_1^2, whose singular values
// avoid square-rooting near-zero eigenvalue noise.
inline double fidelity(const DensityMatrix& rho_noise, const DensityMatrix& rho_ideal) {
    if (rho_noise.n_qubits() != rho_ideal.n_qubits())
        throw std::invalid_argument("fidelity: dimension mismatch");
    auto purity = [](const Mat& r) { return (r * r).trace().real(); };
    auto clamp01 = [](double f) { return std::min(1.0, std::max(0.0, f)); };
    if (purity(rho_ideal.matrix()) > 1.0 - 1e-12)
        return clamp01((rho_noise.matrix() * rho_ideal.matrix()).trace().real());
    if (purity(rho_noise.matrix()) > 1.0 - 1e-12)
        return clamp01((rho_ideal.matrix() * rho_noise.matrix()).trace().real());
    auto sqrt_psd = [](const Mat& r) {
        Eigen::SelfAdjointEigenSolver<Mat> es(r);
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return Mat(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
    };
    Mat a = sqrt_psd(rho_noise.matrix()) * sqrt_psd(rho_ideal.matrix());
    Eigen::JacobiSVD<Mat> svd(a);
    const double s = svd.singularValues().sum();
    return clamp01(s * s);
}

// (1/2)||rho1 - rho2||_1
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace bqc
