#pragma once

#include "dyadic.hpp"
#include "pauli.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace exrec {

// Element of Z[w], w = exp(i pi/4), w^4 = -1. Amplitudes of Clifford+CCZ
// circuits on basis states live in Z[w] / sqrt(2)^s, which keeps the dense
// oracle exact (no floating point anywhere).
struct Cyclo {
    BigInt a, b, c, d; // a + b w + c w^2 + d w^3

    Cyclo() : a(0), b(0), c(0), d(0) {}
    explicit Cyclo(long v) : a(v), b(0), c(0), d(0) {}

    bool zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

    Cyclo operator+(const Cyclo &o) const {
        Cyclo r;
        r.a = a + o.a;
        r.b = b + o.b;
        r.c = c + o.c;
        r.d = d + o.d;
        return r;
    }
    Cyclo operator-(const Cyclo &o) const {
        Cyclo r;
        r.a = a - o.a;
        r.b = b - o.b;
        r.c = c - o.c;
        r.d = d - o.d;
        return r;
    }
    Cyclo operator-() const { return Cyclo() - *this; }

    Cyclo operator*(const Cyclo &o) const {
        // (a,b,c,d) * (a',b',c',d') with w^4 = -1
        Cyclo r;
        r.a = a * o.a - b * o.d - c * o.c - d * o.b;
        r.b = a * o.b + b * o.a - c * o.d - d * o.c;
        r.c = a * o.c + b * o.b + c * o.a - d * o.d;
        r.d = a * o.d + b * o.c + c * o.b + d * o.a;
        return r;
    }

    // multiply by w^t
    Cyclo mul_w(int t) const {
        Cyclo r = *this;
        t = ((t % 8) + 8) % 8;
        for (int i = 0; i < t; i++) {
            Cyclo s;
            s.a = -r.d;
            s.b = r.a;
            s.c = r.b;
            s.d = r.c;
            r = s;
        }
        return r;
    }
    Cyclo mul_i(int t) const { return mul_w(2 * t); } // i = w^2

    // multiply by sqrt(2) = w - w^3
    Cyclo mul_sqrt2() const {
        Cyclo s;
        s.a = b - d;
        s.b = a + c;
        s.c = b + d;
        s.d = c - a;
        return s;
    }

    // complex conjugate: w -> w^-1 = -w^3
    Cyclo conj() const {
        Cyclo r;
        r.a = a;
        r.b = -d;
        r.c = -c;
        r.d = -b;
        return r;
    }

    // |z|^2 as (p, q) meaning p + q*sqrt(2); returns pair
    std::pair<BigInt, BigInt> norm2() const {
        Cyclo m = *this * conj();
        // m = p + q w + r w^2 + s w^3 must be real: w-part and w^3-part combine
        // into sqrt(2) = w - w^3, so need q == -s and r == 0.
        if (m.c != 0 || m.b != -m.d)
            throw std::logic_error("norm2: non-real");
        return {m.a, m.b};
    }

    bool operator==(const Cyclo &o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

// Exact dense simulator. Global scale: amplitudes are Cyclo / sqrt(2)^scale.
class StateVector {
  public:
    explicit StateVector(size_t n) : n_(n) {
        if (n > 12)
            throw std::invalid_argument("state vector oracle capped at 12 qubits");
        amps_.assign(size_t(1) << n, Cyclo());
        amps_[0] = Cyclo(1);
    }

    size_t n() const { return n_; }
    int scale() const { return scale_; }
    const Cyclo &amp(size_t i) const { return amps_[i]; }

    // --- preparations (reset semantics: project qubit out, then set) ------
    void prep0(size_t q) { prep(q, false); }
    void prep_plus(size_t q) {
        prep(q, false);
        h(q);
    }

    // --- gates -------------------------------------------------------------
    void x(size_t q) {
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (!(i & m))
                std::swap(amps_[i], amps_[i | m]);
    }
    void z(size_t q) {
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (i & m)
                amps_[i] = -amps_[i];
    }
    void y(size_t q) {
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (!(i & m)) {
                Cyclo a0 = amps_[i], a1 = amps_[i | m];
                amps_[i] = a1.mul_i(3);     // -i * a1
                amps_[i | m] = a0.mul_i(1); // +i * a0
            }
    }
    void s(size_t q) {
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (i & m)
                amps_[i] = amps_[i].mul_i(1);
    }
    void h(size_t q) {
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (!(i & m)) {
                Cyclo a0 = amps_[i], a1 = amps_[i | m];
                amps_[i] = a0 + a1;
                amps_[i | m] = a0 - a1;
            }
        scale_++;
    }
    void cnot(size_t c, size_t t) {
        size_t mc = bit(c), mt = bit(t);
        for (size_t i = 0; i < amps_.size(); i++)
            if ((i & mc) && !(i & mt))
                std::swap(amps_[i], amps_[i | mt]);
    }
    void cz(size_t a, size_t b) {
        size_t ma = bit(a), mb = bit(b);
        for (size_t i = 0; i < amps_.size(); i++)
            if ((i & ma) && (i & mb))
                amps_[i] = -amps_[i];
    }
    void ccz(size_t a, size_t b, size_t c) {
        size_t m = bit(a) | bit(b) | bit(c);
        for (size_t i = 0; i < amps_.size(); i++)
            if ((i & m) == m)
                amps_[i] = -amps_[i];
    }

    void apply_pauli(const PauliOperator &p) {
        if (p.n() != n_)
            throw std::invalid_argument("apply_pauli: dimension");
        for (size_t q = 0; q < n_; q++) {
            bool px = p.x(q), pz = p.z(q);
            if (px && pz) {
                // X then Z on q times the stored i^phase handled below; apply
                // as Z*X = -iY ... use explicit: apply X then Z
                x(q);
                z(q);
            } else if (px)
                x(q);
            else if (pz)
                z(q);
        }
        global_i(p.phase());
        // stored convention: i^t X^x Z^z means X applied after Z; adjust:
        // we applied per-qubit X then Z which equals Z^z X^x up to
        // (-1)^{x.z}; X^x Z^z = (-1)^{x.z} Z^z X^x, so flip sign parity.
        if (p.x_bits().dot(p.z_bits()))
            global_i(2);
    }

    void global_i(int t) {
        t = ((t % 4) + 4) % 4;
        if (!t)
            return;
        for (auto &a : amps_)
            a = a.mul_i(t);
    }

    // --- measurement --------------------------------------------------------
    // Probability that qubit q reads 1 in the Z basis, as an exact rational
    // relative to the current (possibly sub-normalized) state.
    Rational prob1(size_t q) const {
        auto p1 = mass(q, true);
        auto tot = total_mass();
        if (tot == 0)
            throw std::logic_error("prob1 on zero state");
        return p1 / tot;
    }

    // Project qubit q to outcome v without renormalizing amplitudes
    // (probability bookkeeping is the caller's job via mass()).
    void project(size_t q, bool v) {
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (bool(i & m) != v)
                amps_[i] = Cyclo();
    }

    // Sum of |amp|^2 over states with qubit q equal to v, as exact rational
    // including the sqrt(2)^scale normalization.
    Rational mass(size_t q, bool v) const {
        BigInt p(0), r(0);
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++)
            if (bool(i & m) == v && !amps_[i].zero()) {
                auto [pp, rr] = amps_[i].norm2();
                p += pp;
                r += rr;
            }
        return finish_mass(p, r);
    }
    Rational total_mass() const {
        BigInt p(0), r(0);
        for (size_t i = 0; i < amps_.size(); i++)
            if (!amps_[i].zero()) {
                auto [pp, rr] = amps_[i].norm2();
                p += pp;
                r += rr;
            }
        return finish_mass(p, r);
    }

    // exact inner product <other|this> assuming equal scale handled by caller;
    // returns (value, common scale difference must be zero)
    Cyclo inner(const StateVector &o) const {
        if (o.n_ != n_)
            throw std::invalid_argument("inner: dimension");
        Cyclo acc;
        for (size_t i = 0; i < amps_.size(); i++)
            acc = acc + (o.amps_[i].conj() * amps_[i]);
        return acc;
    }

    // |<other|this>|^2 / (|other|^2 |this|^2) as exact rational
    Rational fidelity(const StateVector &o) const {
        Cyclo ip = inner(o);
        auto [p, r] = ip.norm2();
        if (r != 0)
            throw std::logic_error("fidelity: irrational overlap magnitude");
        int sc = scale_ + o.scale_;
        Rational scaled = Rational(p) / Rational(BigInt(1) << sc);
        Rational denom = total_mass() * o.total_mass();
        if (denom == 0)
            throw std::logic_error("fidelity of zero state");
        return scaled / denom;
    }

    bool is_zero() const {
        for (auto &a : amps_)
            if (!a.zero())
                return false;
        return true;
    }

    // true if this == c * other for some unit complex c (exact, phase-free)
    bool proportional(const StateVector &o) const {
        Rational f = fidelity(o);
        return f == 1;
    }

  private:
    size_t bit(size_t q) const {
        assert(q < n_);
        return size_t(1) << q;
    }
    void prep(size_t q, bool v) {
        // reset semantics: callers measure before re-preparing, so per branch
        // the qubit already holds a definite value and this is a relabeling
        size_t m = bit(q);
        for (size_t i = 0; i < amps_.size(); i++) {
            if (bool(i & m) != v && !amps_[i].zero()) {
                size_t j = i ^ m;
                amps_[j] = amps_[j] + amps_[i];
                amps_[i] = Cyclo();
            }
        }
    }

    Rational finish_mass(const BigInt &p, const BigInt &r) const {
        // mass = (p + r sqrt(2)) / 2^scale ; must be rational -> r == 0
        if (r != 0)
            throw std::logic_error("mass: irrational probability");
        return Rational(p) / Rational(BigInt(1) << scale_);
    }

    size_t n_;
    int scale_ = 0;
    std::vector<Cyclo> amps_;
};

} // namespace exrec
