#pragma once

#include "bitvec.hpp"

#include <stdexcept>
#include <string>

namespace exrec {

// n-qubit Pauli operator i^phase * X^x * Z^z with phase tracked mod 4.
// Convention: Y = i X Z, so the string "Y" maps to (x=1, z=1, phase=1).
class PauliOperator {
  public:
    PauliOperator() = default;
    explicit PauliOperator(size_t n) : n_(n), x_(n), z_(n), phase_(0) {}

    static PauliOperator from_string(const std::string &s) {
        PauliOperator p(s.size());
        for (size_t i = 0; i < s.size(); i++) {
            switch (s[i]) {
            case 'I':
            case 'i':
                break;
            case 'X':
            case 'x':
                p.x_.set(i, true);
                break;
            case 'Z':
            case 'z':
                p.z_.set(i, true);
                break;
            case 'Y':
            case 'y':
                p.x_.set(i, true);
                p.z_.set(i, true);
                p.phase_ = (p.phase_ + 1) & 3;
                break;
            default:
                throw std::invalid_argument("bad Pauli character");
            }
        }
        return p;
    }

    size_t n() const { return n_; }
    const BitVec &x_bits() const { return x_; }
    const BitVec &z_bits() const { return z_; }
    int phase() const { return phase_; } // exponent of i

    bool x(size_t q) const { return x_.get(q); }
    bool z(size_t q) const { return z_.get(q); }
    void set_x(size_t q, bool v) { x_.set(q, v); }
    void set_z(size_t q, bool v) { z_.set(q, v); }
    void set_phase(int t) { phase_ = ((t % 4) + 4) & 3; }
    void mul_phase(int t) { phase_ = (phase_ + t) & 3; }

    bool identity_bits() const { return x_.zero() && z_.zero(); }
    bool is_identity() const { return identity_bits() && phase_ == 0; }
    size_t weight() const { return (x_ ^ z_ ^ (x_ & z_)).weight(); } // support size

    // Group product: this * other, with phase from Z-past-X reordering.
    PauliOperator operator*(const PauliOperator &o) const {
        if (n_ != o.n_)
            throw std::invalid_argument("Pauli dimension mismatch");
        PauliOperator r(n_);
        r.x_ = x_ ^ o.x_;
        r.z_ = z_ ^ o.z_;
        int t = phase_ + o.phase_;
        if (z_.dot(o.x_))
            t += 2;
        r.phase_ = t & 3;
        return r;
    }

    PauliOperator adjoint() const {
        PauliOperator r = *this;
        // (i^t X Z)^dag = i^{-t} Z X = i^{-t} (-1)^{x.z} X Z
        int t = (4 - phase_) & 3;
        if (x_.dot(z_))
            t += 2;
        r.phase_ = t & 3;
        return r;
    }

    bool commutes_with(const PauliOperator &o) const {
        if (n_ != o.n_)
            throw std::invalid_argument("Pauli dimension mismatch");
        return !(x_.dot(o.z_) ^ z_.dot(o.x_));
    }

    // symplectic vector (x | z), length 2n
    BitVec symplectic() const {
        BitVec v(2 * n_);
        for (size_t i = 0; i < n_; i++) {
            if (x_.get(i))
                v.set(i, true);
            if (z_.get(i))
                v.set(n_ + i, true);
        }
        return v;
    }

    static PauliOperator from_symplectic(const BitVec &v, int phase = 0) {
        assert(v.size() % 2 == 0);
        size_t n = v.size() / 2;
        PauliOperator p(n);
        for (size_t i = 0; i < n; i++) {
            p.x_.set(i, v.get(i));
            p.z_.set(i, v.get(n + i));
        }
        p.phase_ = phase & 3;
        return p;
    }

    bool operator==(const PauliOperator &o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
    }
    bool equal_up_to_phase(const PauliOperator &o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
    }

    std::string str() const {
        static const char tab[4] = {'I', 'X', 'Z', 'Y'};
        std::string s;
        int ny = int((x_ & z_).weight());
        int disp = ((phase_ - ny) % 4 + 4) & 3;
        switch (disp) {
        case 1:
            s += "+i*";
            break;
        case 2:
            s += "-";
            break;
        case 3:
            s += "-i*";
            break;
        default:
            break;
        }
        for (size_t i = 0; i < n_; i++)
            s += tab[(x_.get(i) ? 1 : 0) | (z_.get(i) ? 2 : 0)];
        return s;
    }

  private:
    size_t n_ = 0;
    BitVec x_, z_;
    int phase_ = 0;
};

inline PauliOperator multiply(const PauliOperator &p, const PauliOperator &q) { return p * q; }
inline bool commutes(const PauliOperator &p, const PauliOperator &q) {
    return p.commutes_with(q);
}

} // namespace exrec
