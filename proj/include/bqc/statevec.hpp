#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "bqc/errors.hpp"
#include "bqc/gates.hpp"

namespace bqc {

// Dense pure-state register. Qubit 0 is the least-significant bit of the
// amplitude index. Hard cap of 12 qubits; density matrices (density.hpp)
// cap at 6.
class StateVector {
public:
    static constexpr int kMaxQubits = 12;

    explicit StateVector(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits)
            throw CapacityError("StateVector supports 1..12 qubits, got " + std::to_string(n_qubits));
        amps_.assign(size_t(1) << n_, cx(0, 0));
        amps_[0] = cx(1, 0);
    }

    StateVector(int n_qubits, std::vector<cx> amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) throw CapacityError("qubit count out of range");
        if (amps_.size() != (size_t(1) << n_)) throw std::invalid_argument("amplitude length != 2^n");
        check_norm();
    }

    int n_qubits() const { return n_; }
    size_t dim() const { return amps_.size(); }
    const std::vector<cx>& amplitudes() const { return amps_; }
    cx amp(size_t i) const { return amps_[i]; }
    cx& amp(size_t i) { return amps_[i]; }

    double norm_sq() const {
        double s = 0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void check_norm(double tol = 1e-10) const {
        if (std::abs(norm_sq() - 1.0) > tol)
            throw std::runtime_error("state norm drifted: " + std::to_string(norm_sq()));
    }

    void apply(const GateSpec& g, std::span<const int> qubits) {
        validate_operands(g, qubits);
        if (g.two_qubit()) {
            apply_2q(g.matrix(), qubits[0], qubits[1]);
        } else {
            apply_1q(g.matrix(), qubits[0]);
        }
    }
    void apply(const GateSpec& g, int q) { int qs[1] = {q}; apply(g, qs); }
    void apply(const GateSpec& g, int q0, int q1) { int qs[2] = {q0, q1}; apply(g, qs); }

    // U acting on the subspace of `qubits` (qubits[0] = least-significant
    // index bit of U). Dimension of U must be 2^k.
    void apply_kq(const Mat& u, std::span<const int> qubits) {
        const int k = static_cast<int>(qubits.size());
        const size_t du = size_t(1) << k;
        if (u.rows() != Eigen::Index(du) || u.cols() != Eigen::Index(du))
            throw std::invalid_argument("gate matrix dimension mismatch");
        check_unitary(u);
        std::vector<size_t> masks(k);
        for (int i = 0; i < k; ++i) masks[i] = size_t(1) << qubits[i];
        const size_t dim = amps_.size();
        std::vector<cx> scratch(du);
        // Iterate over base indices with all target bits clear.
        for (size_t base = 0; base < dim; ++base) {
            bool skip = false;
            for (int i = 0; i < k; ++i)
                if (base & masks[i]) { skip = true; break; }
            if (skip) continue;
            for (size_t r = 0; r < du; ++r) {
                size_t idx = base;
                for (int i = 0; i < k; ++i)
                    if (r & (size_t(1) << i)) idx |= masks[i];
                scratch[r] = amps_[idx];
            }
            for (size_t r = 0; r < du; ++r) {
                cx acc(0, 0);
                for (size_t c = 0; c < du; ++c) acc += u(Eigen::Index(r), Eigen::Index(c)) * scratch[c];
                size_t idx = base;
                for (int i = 0; i < k; ++i)
                    if (r & (size_t(1) << i)) idx |= masks[i];
                amps_[idx] = acc;
            }
        }
    }

    // Probability that qubit q reads 1 in the computational basis.
    double prob_one(int q) const {
        const size_t mask = size_t(1) << q;
        double p = 0;
        for (size_t i = 0; i < amps_.size(); ++i)
            if (i & mask) p += std::norm(amps_[i]);
        return p;
    }

    // Project qubit q onto `outcome` and renormalize. Returns the outcome
    // probability before projection.
    double project(int q, int outcome) {
        const size_t mask = size_t(1) << q;
        double p = outcome ? prob_one(q) : 1.0 - prob_one(q);
        if (p < 1e-300) throw std::runtime_error("projection onto zero-probability branch");
        const double scale = 1.0 / std::sqrt(p);
        for (size_t i = 0; i < amps_.size(); ++i) {
            bool bit = (i & mask) != 0;
            if (bit != static_cast<bool>(outcome))
                amps_[i] = cx(0, 0);
            else
                amps_[i] *= scale;
        }
        return p;
    }

    cx inner(const StateVector& other) const {
        if (other.n_ != n_) throw std::invalid_argument("dimension mismatch");
        cx s(0, 0);
        for (size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
        return s;
    }

    double fidelity_with(const StateVector& other) const { return std::norm(inner(other)); }

private:
    void validate_operands(const GateSpec& g, std::span<const int> qubits) const {
        const size_t want = g.two_qubit() ? 2 : 1;
        if (qubits.size() != want) throw std::invalid_argument("wrong operand count for gate");
        for (int q : qubits)
            if (q < 0 || q >= n_) throw std::out_of_range("qubit index out of range");
        if (want == 2 && qubits[0] == qubits[1]) throw std::invalid_argument("duplicate qubit operands");
    }

    static void check_unitary(const Mat& u, double tol = 1e-8) {
        Mat p = u.adjoint() * u;
        double err = (p - Mat::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff();
        if (err > tol) throw std::invalid_argument("gate matrix is not unitary");
    }

    void apply_1q(const Mat& u, int q) {
        check_unitary(u);
        const size_t mask = size_t(1) << q;
        const cx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        const size_t dim = amps_.size();
        for (size_t i = 0; i < dim; ++i) {
            if (i & mask) continue;
            const size_t j = i | mask;
            const cx a0 = amps_[i], a1 = amps_[j];
            amps_[i] = u00 * a0 + u01 * a1;
            amps_[j] = u10 * a0 + u11 * a1;
        }
    }

    void apply_2q(const Mat& u, int q0, int q1) {
        int qs[2] = {q0, q1};
        apply_kq(u, qs);
    }

    int n_;
    std::vector<cx> amps_;
};

// Full unitary of a gate acting on an n-qubit register, via tensor products.
// Test oracle: deliberately independent of StateVector's bit-twiddling path.
inline Mat embed_gate(const Mat& u, std::span<const int> qubits, int n) {
    const size_t dim = size_t(1) << n;
    const int k = static_cast<int>(qubits.size());
    Mat full = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (size_t col = 0; col < dim; ++col) {
        size_t sub_col = 0;
        for (int i = 0; i < k; ++i)
            if (col & (size_t(1) << qubits[i])) sub_col |= size_t(1) << i;
        for (size_t sub_row = 0; sub_row < (size_t(1) << k); ++sub_row) {
            size_t row = col;
            for (int i = 0; i < k; ++i) {
                row &= ~(size_t(1) << qubits[i]);
                if (sub_row & (size_t(1) << i)) row |= size_t(1) << qubits[i];
            }
            cx v = u(Eigen::Index(sub_row), Eigen::Index(sub_col));
            if (v != cx(0, 0)) full(Eigen::Index(row), Eigen::Index(col)) = v;
        }
    }
    return full;
}

}  // namespace bqc
