#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exrec/statevec.hpp"

using namespace exrec;

namespace {

StateVector basis(size_t n, size_t idx) {
    StateVector sv(n);
    for (size_t q = 0; q < n; q++)
        if ((idx >> q) & 1)
            sv.x(q);
    return sv;
}

} // namespace

TEST_CASE("CCZ fixes the computational basis except |111>") {
    for (size_t idx = 0; idx < 8; idx++) {
        StateVector sv = basis(3, idx);
        StateVector ref = basis(3, idx);
        sv.ccz(0, 1, 2);
        Cyclo want = Cyclo(idx == 7 ? -1 : 1);
        for (size_t i = 0; i < 8; i++) {
            Cyclo expect = (i == idx) ? want : Cyclo();
            CHECK(sv.amp(i) == expect);
        }
        CHECK(sv.fidelity(ref) == 1); // global phase invisible
    }
}

TEST_CASE("conjugation oracle: CCZ X1 CCZ = X1 CZ(2,3)") {
    // apply both operator orders to every basis state and compare amplitudes
    for (size_t idx = 0; idx < 8; idx++) {
        StateVector a = basis(3, idx);
        a.ccz(0, 1, 2);
        a.x(0);
        a.ccz(0, 1, 2);
        StateVector b = basis(3, idx);
        b.x(0);
        b.cz(1, 2);
        for (size_t i = 0; i < 8; i++)
            CHECK(a.amp(i) == b.amp(i));
    }
}

TEST_CASE("H twice is identity and keeps exact amplitudes") {
    StateVector sv(2);
    sv.h(0);
    sv.h(1);
    sv.cz(0, 1);
    sv.h(0);
    sv.h(0);
    StateVector ref(2);
    ref.h(0);
    ref.h(1);
    ref.cz(0, 1);
    CHECK(sv.fidelity(ref) == 1);
    CHECK(sv.total_mass() == 1);
}

TEST_CASE("pauli application matches gate sequence") {
    StateVector a(2);
    a.h(0);
    a.cnot(0, 1);
    StateVector b(2);
    b.h(0);
    b.cnot(0, 1);
    auto y0z1 = PauliOperator::from_string("YZ");
    a.apply_pauli(y0z1);
    b.y(0);
    b.z(1);
    CHECK(a.fidelity(b) == 1);
    // exact equality of amplitudes too (same phase convention)
    for (size_t i = 0; i < 4; i++)
        CHECK(a.amp(i) == b.amp(i));
}

TEST_CASE("measurement masses are exact rationals") {
    StateVector sv(3);
    sv.h(0);
    sv.cnot(0, 1);
    // GHZ-ish: prob of qubit0 = 1 is 1/2
    CHECK(sv.prob1(0) == Rational(1, 2));
    sv.project(0, true);
    CHECK(sv.mass(0, true) == Rational(1, 2));
    CHECK(sv.mass(0, false) == 0);
    // post-projection, qubit1 is deterministically 1
    CHECK(sv.mass(1, true) == Rational(1, 2));
}

TEST_CASE("S gate phase is exact") {
    StateVector sv(1);
    sv.h(0);
    sv.s(0);
    sv.s(0); // S^2 = Z
    StateVector ref(1);
    ref.h(0);
    ref.z(0);
    for (size_t i = 0; i < 2; i++)
        CHECK(sv.amp(i) == ref.amp(i));
}

TEST_CASE("prep resets a measured qubit") {
    StateVector sv(2);
    sv.h(0);
    sv.cnot(0, 1);
    sv.project(1, true); // collapse
    sv.prep0(1);
    CHECK(sv.mass(1, false) == Rational(1, 2)); // branch mass kept
    CHECK(sv.mass(1, true) == 0);
}
