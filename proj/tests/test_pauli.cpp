#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exrec/pauli.hpp"

#include <array>
#include <complex>
#include <vector>

using namespace exrec;

namespace {

// Independent oracle: dense Pauli matrices over Z[i].
using GInt = std::complex<long>;
using Mat = std::vector<std::vector<GInt>>;

Mat kron(const Mat &a, const Mat &b) {
    size_t n = a.size(), m = b.size();
    Mat r(n * m, std::vector<GInt>(n * m, GInt(0, 0)));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++)
            for (size_t k = 0; k < m; k++)
                for (size_t l = 0; l < m; l++)
                    r[i * m + k][j * m + l] = a[i][j] * b[k][l];
    return r;
}

Mat matmul(const Mat &a, const Mat &b) {
    size_t n = a.size();
    Mat r(n, std::vector<GInt>(n, GInt(0, 0)));
    for (size_t i = 0; i < n; i++)
        for (size_t k = 0; k < n; k++)
            for (size_t j = 0; j < n; j++)
                r[i][j] += a[i][k] * b[k][j];
    return r;
}

Mat pauli_matrix(const PauliOperator &p) {
    const Mat I{{GInt(1, 0), GInt(0, 0)}, {GInt(0, 0), GInt(1, 0)}};
    const Mat X{{GInt(0, 0), GInt(1, 0)}, {GInt(1, 0), GInt(0, 0)}};
    const Mat Z{{GInt(1, 0), GInt(0, 0)}, {GInt(0, 0), GInt(-1, 0)}};
    Mat r{{GInt(1, 0)}};
    for (size_t q = 0; q < p.n(); q++) {
        Mat f = I;
        if (p.x(q) && p.z(q))
            f = matmul(X, Z);
        else if (p.x(q))
            f = X;
        else if (p.z(q))
            f = Z;
        r = kron(r, f);
    }
    GInt ph(1, 0);
    for (int t = 0; t < p.phase(); t++)
        ph *= GInt(0, 1);
    for (auto &row : r)
        for (auto &v : row)
            v *= ph;
    return r;
}

PauliOperator nth_pauli(size_t n, int idx) {
    PauliOperator p(n);
    for (size_t q = 0; q < n; q++) {
        int t = (idx >> (2 * q)) & 3;
        if (t & 1)
            p.set_x(q, true);
        if (t & 2)
            p.set_z(q, true);
        if (t == 3)
            p.mul_phase(1);
    }
    return p;
}

} // namespace

TEST_CASE("single qubit identities") {
    auto X = PauliOperator::from_string("X");
    auto Z = PauliOperator::from_string("Z");
    auto Y = PauliOperator::from_string("Y");

    CHECK((X * X).is_identity());
    CHECK((Y * Y).is_identity());
    CHECK((Z * Z).is_identity());

    // X * Z = -i Y under Y = iXZ
    auto XZ = X * Z;
    PauliOperator minus_iY = Y;
    minus_iY.mul_phase(3);
    CHECK(XZ == minus_iY);
    CHECK(XZ.str() == "-i*Y");
}

TEST_CASE("Z-type products compose by support") {
    auto a = PauliOperator::from_string("ZZI");
    auto b = PauliOperator::from_string("IZZ");
    CHECK((a * b) == PauliOperator::from_string("ZIZ"));
}

TEST_CASE("commutation basics") {
    CHECK(!commutes(PauliOperator::from_string("X"), PauliOperator::from_string("Z")));
    CHECK(commutes(PauliOperator::from_string("XI"), PauliOperator::from_string("IX")));
    CHECK(commutes(PauliOperator::from_string("XX"), PauliOperator::from_string("ZZ")));
}

TEST_CASE("multiply agrees with the matrix oracle, exhaustive n=1 and n=2") {
    for (size_t n = 1; n <= 2; n++) {
        int lim = 1 << (2 * n);
        for (int i = 0; i < lim; i++)
            for (int j = 0; j < lim; j++) {
                auto p = nth_pauli(n, i), q = nth_pauli(n, j);
                auto prod = p * q;
                CHECK(pauli_matrix(prod) == matmul(pauli_matrix(p), pauli_matrix(q)));
                // commutation against the oracle too
                auto pq = matmul(pauli_matrix(p), pauli_matrix(q));
                auto qp = matmul(pauli_matrix(q), pauli_matrix(p));
                CHECK(commutes(p, q) == (pq == qp));
            }
    }
}

TEST_CASE("multiply is associative on random triples") {
    for (int seed = 0; seed < 200; seed++) {
        size_t n = 3;
        auto a = nth_pauli(n, (seed * 7 + 1) % 64);
        auto b = nth_pauli(n, (seed * 13 + 5) % 64);
        auto c = nth_pauli(n, (seed * 29 + 11) % 64);
        CHECK(((a * b) * c) == (a * (b * c)));
    }
}

TEST_CASE("adjoint squares to identity action") {
    for (int i = 0; i < 16; i++) {
        auto p = nth_pauli(2, i);
        auto pd = p.adjoint();
        CHECK((pd * p).is_identity());
    }
}
