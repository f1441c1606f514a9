#include <doctest.h>

#include "bqc/rng.hpp"
#include "bqc/stab/tableau.hpp"
#include "bqc/statevec.hpp"
#include "test_util.hpp"

using namespace bqc;
using namespace bqc::stab;

TEST_CASE("Pauli conjugation matches dense matrices") {
    // single-qubit gates over all 4 Paulis with phases
    const GateKind gates[] = {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X,
                              GateKind::Y, GateKind::Z};
    for (GateKind gk : gates) {
        for (char letter : {'X', 'Y', 'Z'}) {
            PauliOperator p = PauliOperator::single(1, 0, letter);
            Mat before = p.matrix();
            Mat u = GateSpec::named(gk).matrix();
            p.conjugate(gk, 0);
            Mat expect = u * before * u.adjoint();
            CHECK((p.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    // two-qubit gates over all 16 two-qubit Paulis
    for (GateKind gk : {GateKind::CX, GateKind::CZ}) {
        int qs[2] = {0, 1};
        Mat u = embed_gate(GateSpec::named(gk).matrix(), qs, 2);
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                PauliOperator p(2);
                const char letters[] = {'I', 'X', 'Y', 'Z'};
                p.multiply(PauliOperator::single(2, 0, letters[a]));
                p.multiply(PauliOperator::single(2, 1, letters[b]));
                Mat before = p.matrix();
                p.conjugate(gk, 0, 1);
                Mat expect = u * before * u.adjoint();
                CHECK((p.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("Pauli multiplication tracks phases exactly") {
    RngStream rng(3, "mult");
    for (int rep = 0; rep < 30; ++rep) {
        PauliOperator a(2), b(2);
        const char letters[] = {'I', 'X', 'Y', 'Z'};
        for (int q = 0; q < 2; ++q) {
            a.multiply(PauliOperator::single(2, q, letters[rng.below(4)]));
            b.multiply(PauliOperator::single(2, q, letters[rng.below(4)]));
        }
        Mat expect = a.matrix() * b.matrix();
        PauliOperator c = a;
        c.multiply(b);
        CHECK((c.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("tableau measurement statistics on a Bell pair") {
    RngStream rng(7, "bell");
    int ones = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        Tableau tab(2);
        tab.apply(GateKind::H, 0);
        tab.apply(GateKind::CX, 0, 1);
        auto r0 = tab.measure_z(0, rng);
        CHECK_FALSE(r0.deterministic);
        auto r1 = tab.measure_z(1, rng);
        CHECK(r1.deterministic);
        CHECK(r1.outcome == r0.outcome);  // correlated
        ones += r0.outcome;
        tab.check_valid();
    }
    CHECK(ones > trials / 2 - 60);
    CHECK(ones < trials / 2 + 60);
}

TEST_CASE("deterministic measurements and expectation values") {
    RngStream rng(9, "det");
    Tableau tab(3);
    // |0> measurements are deterministic zeros
    for (int q = 0; q < 3; ++q) {
        auto r = tab.measure_z(q, rng);
        CHECK(r.deterministic);
        CHECK(r.outcome == 0);
    }
    tab.apply(GateKind::X, 1);
    auto r = tab.measure_z(1, rng);
    CHECK(r.deterministic);
    CHECK(r.outcome == 1);

    CHECK(tab.expectation(PauliOperator::single(3, 1, 'Z')) == -1);
    CHECK(tab.expectation(PauliOperator::single(3, 0, 'Z')) == 1);
    CHECK(tab.expectation(PauliOperator::single(3, 0, 'X')) == 0);
    tab.apply(GateKind::H, 0);
    CHECK(tab.expectation(PauliOperator::single(3, 0, 'X')) == 1);
}

TEST_CASE("tableau agrees with statevec on random Clifford words") {
    RngStream rng(11, "words");
    const int n = 3;
    for (int rep = 0; rep < 10; ++rep) {
        Tableau tab(n);
        StateVector psi(n);
        const int len = 12;
        for (int i = 0; i < len; ++i) {
            const int pick = int(rng.below(5));
            if (pick < 3) {
                const GateKind ks[] = {GateKind::H, GateKind::S, GateKind::Sdg};
                const int q = int(rng.below(n));
                tab.apply(ks[pick], q);
                psi.apply(GateSpec::named(ks[pick]), q);
            } else {
                const GateKind ks[] = {GateKind::CX, GateKind::CZ};
                int a = int(rng.below(n)), b = int(rng.below(n));
                if (a == b) b = (b + 1) % n;
                tab.apply(ks[pick - 3], a, b);
                psi.apply(GateSpec::named(ks[pick - 3]), a, b);
            }
        }
        tab.check_valid();
        // every stabilizer row must fix the dense state
        for (int i = 0; i < n; ++i) {
            Mat s = tab.stabilizer(i).matrix();
            Vec v(Eigen::Index(psi.dim()));
            for (size_t j = 0; j < psi.dim(); ++j) v(Eigen::Index(j)) = psi.amp(j);
            CHECK((s * v - v).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}
