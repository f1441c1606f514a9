#include <doctest.h>

#include "bqc/pauliframe.hpp"
#include "bqc/rng.hpp"
#include "bqc/statevec.hpp"

using namespace bqc;

namespace {

// max |A - e^{i phi} B| minimized over the global phase
double dist_up_to_phase(const Mat& a, const Mat& b) {
    cx tr = (b.adjoint() * a).trace();
    cx phase = std::abs(tr) > 1e-12 ? tr / std::abs(tr) : cx(1, 0);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

Mat frame_matrix(int a, int b) {
    Mat m = Mat::Identity(2, 2);
    if (a) m = gatemat::pauli_x() * m;
    if (b) m = m * gatemat::pauli_z();
    return m;
}

}  // namespace

TEST_CASE("H swaps the X and Z frame bits") {
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            PauliFrame f(1);
            f.set(0, uint8_t(a), uint8_t(b));
            f.conjugate(GateSpec::named(GateKind::H), 0);
            CHECK(f.x_bit(0) == b);
            CHECK(f.z_bit(0) == a);
        }
    }
}

TEST_CASE("identity gate leaves the frame unchanged") {
    PauliFrame f(2);
    f.set(0, 1, 1);
    PauliFrame before = f;
    f.conjugate(GateSpec::named(GateKind::I), 0);
    CHECK(f == before);
}

TEST_CASE("CX propagates X from control to target") {
    PauliFrame f(2);
    f.set(0, 1, 0);  // control carries X
    f.conjugate(GateSpec::named(GateKind::CX), 0, 1);
    CHECK(f.x_bit(0) == 1);
    CHECK(f.z_bit(0) == 0);
    CHECK(f.x_bit(1) == 1);
    CHECK(f.z_bit(1) == 0);
}

TEST_CASE("conjugation matches statevec up to a discarded sign") {
    std::vector<GateSpec> cliffords = {
        GateSpec::named(GateKind::H), GateSpec::named(GateKind::S), GateSpec::named(GateKind::Sdg),
        GateSpec::named(GateKind::X), GateSpec::named(GateKind::Z)};
    for (const auto& g : cliffords) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                PauliFrame f(1);
                f.set(0, uint8_t(a), uint8_t(b));
                PauliFrame f2 = f;
                f2.conjugate(g, 0);
                // C P = +/- P' C as 2x2 matrices
                Mat lhs = g.matrix() * frame_matrix(a, b);
                Mat rhs = frame_matrix(f2.x_bit(0), f2.z_bit(0)) * g.matrix();
                CHECK(dist_up_to_phase(lhs, rhs) < 1e-12);
            }
        }
    }
    // two-qubit cases
    RngStream rng(5, "cx");
    std::vector<GateSpec> two_q = {GateSpec::named(GateKind::CX), GateSpec::named(GateKind::CZ)};
    for (const auto& g : two_q) {
        for (int mask = 0; mask < 16; ++mask) {
            PauliFrame f(2);
            f.set(0, uint8_t(mask & 1), uint8_t((mask >> 1) & 1));
            f.set(1, uint8_t((mask >> 2) & 1), uint8_t((mask >> 3) & 1));
            Mat p = f.as_unitary(2);
            PauliFrame f2 = f;
            f2.conjugate(g, 0, 1);
            int qs[2] = {0, 1};
            Mat u = embed_gate(g.matrix(), qs, 2);
            CHECK(dist_up_to_phase(u * p, f2.as_unitary(2) * u) < 1e-12);
        }
    }
}

TEST_CASE("conjugating twice by a self-inverse Clifford restores the frame") {
    RngStream rng(7, "selfinv");
    std::vector<GateSpec> self_inv = {GateSpec::named(GateKind::H), GateSpec::named(GateKind::CX),
                                      GateSpec::named(GateKind::CZ)};
    for (const auto& g : self_inv) {
        PauliFrame f(2);
        f.set(0, uint8_t(rng.bit()), uint8_t(rng.bit()));
        f.set(1, uint8_t(rng.bit()), uint8_t(rng.bit()));
        PauliFrame before = f;
        if (g.two_qubit()) {
            f.conjugate(g, 0, 1);
            f.conjugate(g, 0, 1);
        } else {
            f.conjugate(g, 0);
            f.conjugate(g, 0);
        }
        CHECK(f == before);
    }
}

TEST_CASE("frame conjugation is a group action under Clifford words") {
    RngStream rng(11, "words");
    const int n = 3;
    for (int rep = 0; rep < 20; ++rep) {
        PauliFrame f(n);
        for (int q = 0; q < n; ++q) f.set(q, uint8_t(rng.bit()), uint8_t(rng.bit()));
        Mat word = Mat::Identity(8, 8);
        PauliFrame g = f;
        int len = 1 + int(rng.below(6));
        for (int i = 0; i < len; ++i) {
            int pick = int(rng.below(5));
            if (pick < 3) {
                GateKind kinds[3] = {GateKind::H, GateKind::S, GateKind::Sdg};
                int q = int(rng.below(n));
                GateSpec gs = GateSpec::named(kinds[pick]);
                g.conjugate(gs, q);
                int qs[1] = {q};
                word = embed_gate(gs.matrix(), qs, n) * word;
            } else {
                GateKind kinds[2] = {GateKind::CX, GateKind::CZ};
                int a = int(rng.below(n)), b = int(rng.below(n));
                if (a == b) b = (b + 1) % n;
                GateSpec gs = GateSpec::named(kinds[pick - 3]);
                g.conjugate(gs, a, b);
                int qs[2] = {a, b};
                word = embed_gate(gs.matrix(), qs, n) * word;
            }
        }
        CHECK(dist_up_to_phase(word * f.as_unitary(n), g.as_unitary(n) * word) < 1e-11);
    }
}

TEST_CASE("measurement absorption") {
    PauliFrame f(1);
    SUBCASE("s = 0 leaves the frame alone") {
        f.absorb_measurement(0, 0, PauliFrame::MeasurementKind::PhotonZ);
        CHECK(f.is_identity());
    }
    SUBCASE("photon-Z with s = 1 flips the Z bit") {
        f.absorb_measurement(0, 1, PauliFrame::MeasurementKind::PhotonZ);
        CHECK(f.z_bit(0) == 1);
        CHECK(f.x_bit(0) == 0);
    }
    SUBCASE("two successive s = 1 absorptions cancel") {
        f.absorb_measurement(0, 1, PauliFrame::MeasurementKind::PhotonZ);
        f.absorb_measurement(0, 1, PauliFrame::MeasurementKind::PhotonZ);
        CHECK(f.is_identity());
    }
    SUBCASE("teleport byproduct is X-type") {
        f.absorb_measurement(0, 1, PauliFrame::MeasurementKind::Teleport);
        CHECK(f.x_bit(0) == 1);
    }
}

TEST_CASE("adaptive angles reduce to the Euler angles on a fresh frame") {
    PauliFrame f(1);
    auto plan = adaptive_angles(f, 0, 0.3, 0.5, 0.7);
    CHECK(plan.theta1 == doctest::Approx(0.3));
    CHECK(plan.theta2(0) == doctest::Approx(0.5));
    CHECK(plan.theta3(0) == doctest::Approx(0.7));
}

TEST_CASE("frame X bit negates the first angle") {
    PauliFrame f(1);
    f.set(0, 1, 0);
    auto plan = adaptive_angles(f, 0, 0.3, 0.5, 0.7);
    CHECK(plan.theta1 == doctest::Approx(-0.3));
}

TEST_CASE("adaptive sequence implements Rz Rx Rz up to the predicted frame, all branches") {
    // Composite of Z^{s1}Rz(t1), H, Z^{s2}Rz(t2), H, Z^{s3}Rz(t3) acting after
    // the initial frame X^a Z^b must equal P' Rz(gamma) Rx(beta) Rz(alpha),
    // P' = X^{s2+a} Z^{s3+s1+b}.
    RngStream rng(13, "euler");
    for (int rep = 0; rep < 4; ++rep) {
        const double alpha = rng.uniform(0, 2 * kPi), beta = rng.uniform(0, 2 * kPi),
                     gamma = rng.uniform(0, 2 * kPi);
        for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
        for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
        for (int s3 = 0; s3 < 2; ++s3) {
            PauliFrame f(1);
            f.set(0, uint8_t(a), uint8_t(b));
            auto plan = adaptive_angles(f, 0, alpha, beta, gamma);

            Mat h = gatemat::hadamard(), z = gatemat::pauli_z();
            auto blind = [&](double t, int s) {
                Mat m = gatemat::rz(t);
                if (s) m = z * m;
                return m;
            };
            Mat seq = blind(plan.theta3(s2), s3) * h * blind(plan.theta2(s1), s2) * h *
                      blind(plan.theta1, s1) * frame_matrix(a, b);

            PauliFrame fin = plan.final_frame(s1, s2, s3);
            Mat expect = frame_matrix(fin.x_bit(0), fin.z_bit(0)) * gatemat::rz(gamma) *
                         gatemat::rx(beta) * gatemat::rz(alpha);
            CHECK(dist_up_to_phase(seq, expect) < 1e-10);
        }
    }
}

TEST_CASE("non-Clifford conjugation is rejected") {
    PauliFrame f(1);
    CHECK_THROWS(f.conjugate(GateSpec::named(GateKind::T), 0));
    CHECK_THROWS(f.conjugate(GateSpec::rz(0.3), 0));
}
