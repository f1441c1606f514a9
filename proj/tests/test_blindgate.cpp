#include <doctest.h>

#include <cmath>

#include "bqc/blindgate.hpp"
#include "bqc/density.hpp"

using namespace bqc;

TEST_CASE("perfect channel, immediate teleport success: one photon, one iteration") {
    BGateSession s(AngleSet(3), 5);
    s.photon_sent();
    s.photon_measured(1);
    s.teleport_result(0);
    CHECK(s.status() == BGateSession::Status::Done);
    CHECK(s.photons_sent() == 1);
    CHECK(s.photons_measured() == 1);
    CHECK(s.implemented_index() == 5);
    CHECK(s.frame_bit() == 1);
}

TEST_CASE("worst case: every teleport fails, telescoping still lands on target") {
    for (int c = 1; c <= 6; ++c) {
        AngleSet set(c);
        for (uint32_t p = 0; p < set.size(); ++p) {
            BGateSession s(set, p);
            int iters = 0;
            while (s.status() != BGateSession::Status::Done) {
                s.photon_sent();
                s.photon_measured(0);
                s.teleport_result(1);
                ++iters;
                REQUIRE(iters <= c);
            }
            CHECK(iters == c);
            CHECK(s.implemented_index() == p);
        }
    }
}

TEST_CASE("Monte Carlo iteration count matches 2 - 2^{1-c}") {
    RngStream root(42, "bgate_iters");
    const long trials = 20000;
    for (int c = 1; c <= 4; ++c) {
        AngleSet set(c);
        ErrorModel model;
        model.eta = 1.0;
        model.c = c;
        double sum = 0, sum_sq = 0;
        for (long t = 0; t < trials; ++t) {
            RngStream client = root.split("client", uint64_t(c) * 1000000 + uint64_t(t));
            RngStream server = root.split("server", uint64_t(c) * 1000000 + uint64_t(t));
            BGateSession s(set, uint32_t(t % set.size()));
            auto out = run_b_gate(s, model, client, server);
            REQUIRE(out.iterations <= c);
            sum += out.iterations;
            sum_sq += double(out.iterations) * out.iterations;
        }
        const double mean = sum / trials;
        const double expect = 2.0 - std::pow(2.0, 1 - c);
        const double var = sum_sq / trials - mean * mean;
        const double sigma = std::sqrt(std::max(var, 1e-12) / trials);
        CHECK(std::abs(mean - expect) < std::max(3 * sigma, 1e-9));
    }
}

TEST_CASE("mean photons sent matches (2 - 2^{1-c})/eta") {
    RngStream root(43, "bgate_photons");
    const long trials = 20000;
    const double eta = 0.8;
    AngleSet set(3);
    ErrorModel model;
    model.eta = eta;
    double sum = 0;
    for (long t = 0; t < trials; ++t) {
        RngStream client = root.split("client", uint64_t(t));
        RngStream server = root.split("server", uint64_t(t));
        BGateSession s(set, uint32_t(t % 8));
        auto out = run_b_gate(s, model, client, server);
        sum += double(out.photons_sent);
    }
    const double mean = sum / trials;
    const double expect = 1.75 / eta;  // 2.1875
    CHECK(std::abs(mean - expect) / expect < 0.02);
}

TEST_CASE("frame bit is the parity of the client's s outcomes") {
    AngleSet set(3);
    BGateSession s(set, 3);
    s.photon_sent();
    s.photon_measured(1);
    s.teleport_result(1);
    s.photon_sent();
    s.photon_lost();
    s.photon_sent();
    s.photon_measured(1);
    s.teleport_result(0);
    CHECK(s.status() == BGateSession::Status::Done);
    CHECK(s.frame_bit() == 0);  // 1 xor 1
    CHECK(s.photons_sent() == 3);
    CHECK(s.photons_measured() == 2);
}

TEST_CASE("eta = 0 is rejected") {
    AngleSet set(2);
    BGateSession s(set, 1);
    ErrorModel model;
    model.eta = 0.0;
    RngStream a(1, "a"), b(1, "b");
    CHECK_THROWS(run_b_gate(s, model, a, b));
}

TEST_CASE("expected photon formulas") {
    CHECK(expected_photons_memory(0, 0.5, 3) == doctest::Approx(0.0));
    CHECK(expected_photons_memory(1, 1.0, 30) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(expected_photons_memory(4, 0.9, 3) == doctest::Approx(4.0 * 1.75 / 0.9).epsilon(1e-12));

    // memoryless: recurrence with the defining-sum N_fail
    CHECK(memoryless_fail_photons(1, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expected_photons_memoryless(1, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(memoryless_fail_photons(4, 0.9) == doctest::Approx(2.36871).epsilon(1e-4));
    CHECK(expected_photons_memoryless(4, 0.9) == doctest::Approx(5.2417).epsilon(1e-4));

    // small-eta asymptotic 1/(eta^N (1-eta))
    const double exact = expected_photons_memoryless(4, 0.1);
    const double asym = 1.0 / (std::pow(0.1, 4) * 0.9);
    CHECK(std::abs(exact - asym) / asym < 0.15);

    CHECK(circuit_efficiency(1.0) == doctest::Approx(1.0));
    CHECK(circuit_efficiency(2.0) == doctest::Approx(0.5));
    CHECK(circuit_efficiency(expected_photons_memoryless(4, 0.9)) == doctest::Approx(0.1908).epsilon(1e-3));
    CHECK_THROWS(circuit_efficiency(0.0));
    CHECK_THROWS(memoryless_fail_photons(4, 1.0));
}

TEST_CASE("memoryless Monte Carlo agrees with the recurrence") {
    RngStream rng(44, "memoryless");
    const long trials = 20000;
    struct Case { int n; double eta; };
    for (Case cse : {Case{2, 0.9}, Case{4, 0.9}, Case{4, 0.5}}) {
        double mc = simulate_memoryless_photons(cse.n, cse.eta, rng, trials);
        double expect = expected_photons_memoryless(cse.n, cse.eta);
        CHECK(std::abs(mc - expect) / expect < 0.03);
    }
}

TEST_CASE("gate-level blindness: s-averaged state is angle independent") {
    // average over s of Z^s Rz(theta) rho Rz(theta)^dag Z^s has no theta
    // dependence; check over every member of the c = 3 angle set
    AngleSet set(3);
    StateVector psi(1);
    psi.apply(GateSpec::ry(0.83), 0);  // arbitrary input with coherences
    DensityMatrix rho_in = DensityMatrix::from_state(psi);

    auto averaged = [&](uint32_t p) {
        DensityMatrix r0 = rho_in;
        r0.apply(GateSpec::rz(set.angle(p)), 0);
        DensityMatrix r1 = r0;
        r1.apply(GateSpec::named(GateKind::Z), 0);
        return DensityMatrix::from_matrix(1, 0.5 * (r0.matrix() + r1.matrix()));
    };
    DensityMatrix ref = averaged(0);
    for (uint32_t p = 1; p < set.size(); ++p)
        CHECK(trace_distance(ref, averaged(p)) < 1e-10);
}
