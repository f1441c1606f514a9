#include <doctest.h>

#include "bqc/rng.hpp"
#include "bqc/statevec.hpp"

using namespace bqc;

namespace {

StateVector random_state(int n, RngStream& rng) {
    std::vector<cx> amps(size_t(1) << n);
    double norm = 0;
    for (auto& a : amps) {
        a = cx(rng.normal(), rng.normal());
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return StateVector(n, std::move(amps));
}

}  // namespace

TEST_CASE("H on |0> gives the uniform superposition") {
    StateVector psi(1);
    psi.apply(GateSpec::named(GateKind::H), 0);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi.amp(0) - cx(s, 0)) < 1e-12);
    CHECK(std::abs(psi.amp(1) - cx(s, 0)) < 1e-12);
}

TEST_CASE("Rz(0) acts as the identity") {
    RngStream rng(7, "rz0");
    StateVector psi = random_state(3, rng);
    StateVector before = psi;
    psi.apply(GateSpec::rz(0.0), 1);
    for (size_t i = 0; i < psi.dim(); ++i) CHECK(std::abs(psi.amp(i) - before.amp(i)) < 1e-14);
}

TEST_CASE("2-qubit blind-gate skeleton matches the brute-force 4x4 product") {
    // CZ H1 Rz(pi/2)_1 H1 CZ on |++>, against explicit matrix multiplication
    StateVector psi(2);
    psi.apply(GateSpec::named(GateKind::H), 0);
    psi.apply(GateSpec::named(GateKind::H), 1);
    StateVector ref = psi;

    psi.apply(GateSpec::named(GateKind::CZ), 0, 1);
    psi.apply(GateSpec::named(GateKind::H), 0);
    psi.apply(GateSpec::rz(kPi / 2), 0);
    psi.apply(GateSpec::named(GateKind::H), 0);
    psi.apply(GateSpec::named(GateKind::CZ), 0, 1);

    int q0[1] = {0};
    int q01[2] = {0, 1};
    Mat u = embed_gate(gatemat::cz_gate(), q01, 2);
    u = embed_gate(gatemat::hadamard(), q0, 2) * u;
    u = embed_gate(gatemat::rz(kPi / 2), q0, 2) * u;
    u = embed_gate(gatemat::hadamard(), q0, 2) * u;
    u = embed_gate(gatemat::cz_gate(), q01, 2) * u;

    Vec v(4);
    for (int i = 0; i < 4; ++i) v(i) = ref.amp(size_t(i));
    Vec expect = u * v;
    for (int i = 0; i < 4; ++i) CHECK(std::abs(psi.amp(size_t(i)) - expect(i)) < 1e-12);
}

TEST_CASE("gate application agrees with tensor-product embedding on 1-3 qubits") {
    RngStream rng(11, "embed");
    std::vector<GateSpec> one_q = {
        GateSpec::named(GateKind::H),  GateSpec::named(GateKind::X),  GateSpec::named(GateKind::Y),
        GateSpec::named(GateKind::Z),  GateSpec::named(GateKind::S),  GateSpec::named(GateKind::Sdg),
        GateSpec::named(GateKind::T),  GateSpec::rz(0.7),             GateSpec::rx(1.3),
        GateSpec::ry(-0.4)};
    std::vector<GateSpec> two_q = {GateSpec::named(GateKind::CX), GateSpec::named(GateKind::CZ),
                                   GateSpec::named(GateKind::Swap)};
    for (int n = 1; n <= 3; ++n) {
        for (const auto& g : one_q) {
            for (int q = 0; q < n; ++q) {
                StateVector psi = random_state(n, rng);
                Vec v(Eigen::Index(psi.dim()));
                for (size_t i = 0; i < psi.dim(); ++i) v(Eigen::Index(i)) = psi.amp(i);
                int qs[1] = {q};
                Vec expect = embed_gate(g.matrix(), qs, n) * v;
                psi.apply(g, q);
                psi.check_norm();
                for (size_t i = 0; i < psi.dim(); ++i)
                    CHECK(std::abs(psi.amp(i) - expect(Eigen::Index(i))) < 1e-12);
            }
        }
        if (n < 2) continue;
        for (const auto& g : two_q) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a == b) continue;
                    StateVector psi = random_state(n, rng);
                    Vec v(Eigen::Index(psi.dim()));
                    for (size_t i = 0; i < psi.dim(); ++i) v(Eigen::Index(i)) = psi.amp(i);
                    int qs[2] = {a, b};
                    Vec expect = embed_gate(g.matrix(), qs, n) * v;
                    psi.apply(g, a, b);
                    psi.check_norm();
                    for (size_t i = 0; i < psi.dim(); ++i)
                        CHECK(std::abs(psi.amp(i) - expect(Eigen::Index(i))) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("operand validation") {
    StateVector psi(2);
    CHECK_THROWS(psi.apply(GateSpec::named(GateKind::H), 2));
    CHECK_THROWS(psi.apply(GateSpec::named(GateKind::CX), 0, 0));
    Mat bad(2, 2);
    bad << 1, 0, 0, 2;  // not unitary
    CHECK_THROWS(psi.apply(GateSpec::u1q(bad), 0));
    CHECK_THROWS(StateVector(13));
}

TEST_CASE("projection and outcome probabilities") {
    StateVector psi(2);
    psi.apply(GateSpec::named(GateKind::H), 0);
    psi.apply(GateSpec::named(GateKind::CX), 0, 1);  // Bell pair
    CHECK(psi.prob_one(1) == doctest::Approx(0.5));
    double p = psi.project(0, 1);
    CHECK(p == doctest::Approx(0.5));
    CHECK(std::abs(psi.amp(3) - cx(1, 0)) < 1e-12);
    psi.check_norm();
}
