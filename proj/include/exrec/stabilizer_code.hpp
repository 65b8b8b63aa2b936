#pragma once

#include "pauli.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace exrec {

// Stabilizer (or subsystem) code over n qubits with k logical qubits.
// N holds logical operators ordered X1..Xk, Zk..Z1 so that N L N^T is
// antidiagonal. For subsystem codes, gauge holds gauge generators; the subset
// fixed_gauge (indices into gauge) is treated as part of the instantaneous
// stabilizer of encoded states (e.g. the Z-gauge of Bacon-Shor).
class StabilizerCode {
  public:
    std::string name;
    size_t n = 0, k = 0;
    std::vector<PauliOperator> S;     // n-k stabilizer generators (for subsystem: rank n-k-g)
    std::vector<PauliOperator> N;     // 2k logical operators
    std::vector<PauliOperator> gauge; // gauge generators (may be empty)
    std::vector<size_t> fixed_gauge;  // gauge indices whose +1 eigenstate is the code state

    size_t num_syndrome_bits() const { return S.size(); }

    void validate() const {
        for (auto &p : S)
            if (p.n() != n)
                throw std::invalid_argument(name + ": stabilizer row dimension");
        for (auto &p : N)
            if (p.n() != n)
                throw std::invalid_argument(name + ": logical row dimension");
        if (N.size() != 2 * k)
            throw std::invalid_argument(name + ": logical operator count");
        // S commutes with itself and with N
        for (size_t i = 0; i < S.size(); i++) {
            for (size_t j = 0; j < S.size(); j++)
                if (!S[i].commutes_with(S[j]))
                    throw std::invalid_argument(name + ": stabilizers do not commute");
            for (auto &l : N)
                if (!S[i].commutes_with(l))
                    throw std::invalid_argument(name + ": stabilizer/logical commutation");
        }
        // N Lambda N^T antidiagonal
        for (size_t i = 0; i < N.size(); i++)
            for (size_t j = 0; j < N.size(); j++) {
                bool anti = (i + j + 1 == N.size());
                if (N[i].commutes_with(N[j]) == anti)
                    throw std::invalid_argument(name + ": logical commutation matrix");
            }
        // stabilizer rows independent
        BitMatrix m(0, 2 * n);
        for (auto &p : S)
            m.push_row(p.symplectic());
        if (m.rank() != S.size())
            throw std::invalid_argument(name + ": dependent stabilizer rows");
        for (auto &g : gauge) {
            if (g.n() != n)
                throw std::invalid_argument(name + ": gauge row dimension");
            for (auto &s : S)
                if (!g.commutes_with(s))
                    throw std::invalid_argument(name + ": gauge/stabilizer commutation");
            for (auto &l : N)
                if (!g.commutes_with(l))
                    throw std::invalid_argument(name + ": gauge/logical commutation");
        }
    }

    BitVec syndrome(const PauliOperator &e) const {
        if (e.n() != n)
            throw std::invalid_argument("syndrome: dimension mismatch");
        BitVec s(S.size());
        for (size_t i = 0; i < S.size(); i++)
            s.set(i, !S[i].commutes_with(e));
        return s;
    }

    // Span of stabilizers plus all gauge generators (symplectic, phase-free).
    const RowSpace &group_span() const {
        if (!span_) {
            span_ = std::make_unique<RowSpace>(2 * n);
            for (auto &p : S)
                span_->insert(p.symplectic());
            for (auto &p : gauge)
                span_->insert(p.symplectic());
        }
        return *span_;
    }

    // Span of stabilizers plus fixed gauge only: the stabilizer group of the
    // actual encoded states, used for coherent interference.
    const RowSpace &state_span() const {
        if (!state_span_) {
            state_span_ = std::make_unique<RowSpace>(2 * n);
            for (auto &p : S)
                state_span_->insert(p.symplectic());
            for (auto i : fixed_gauge)
                state_span_->insert(gauge[i].symplectic());
        }
        return *state_span_;
    }

    enum class Residual { trivial, logical };

    // Precondition: syndrome(e) == 0. Trivial iff e is in the group generated
    // by stabilizers and gauge operators (global phase ignored).
    Residual residual_class(const PauliOperator &e) const {
        if (!syndrome(e).zero())
            throw std::logic_error("residual_class: nonzero syndrome");
        return group_span().contains(e.symplectic()) ? Residual::trivial : Residual::logical;
    }

  private:
    mutable std::unique_ptr<RowSpace> span_;
    mutable std::unique_ptr<RowSpace> state_span_;
};

// Lookup decoder: syndrome bitstring -> minimum-weight recovery, ties broken
// by lexicographic order on (x_bits, z_bits). Built by BFS over errors in
// (weight, lex) order until every reachable syndrome has an entry.
class SyndromeTable {
  public:
    explicit SyndromeTable(const StabilizerCode &code) : code_(&code) {
        build();
    }

    const PauliOperator &recover(const BitVec &syn) const {
        auto it = table_.find(key(syn));
        if (it == table_.end())
            throw std::logic_error(code_->name + ": unreachable syndrome");
        return it->second;
    }

    const StabilizerCode &code() const { return *code_; }

    size_t size() const { return table_.size(); }

  private:
    static uint64_t key(const BitVec &v) { return v.low64(); }

    void build() {
        size_t n = code_->n;
        size_t total = size_t(1) << code_->S.size();
        // enumerate single-qubit Paulis in lex order of (x,z): X before Z before Y
        // on a given qubit; earlier qubits first.
        PauliOperator id(n);
        table_.emplace(key(code_->syndrome(id)), id);
        std::vector<PauliOperator> ops1;
        for (size_t q = 0; q < n; q++)
            for (int t = 1; t <= 3; t++) {
                PauliOperator p(n);
                p.set_x(q, t & 1);
                p.set_z(q, t & 2);
                if (t == 3)
                    p.mul_phase(1);
                ops1.push_back(p);
            }
        auto lex_less = [](const PauliOperator &a, const PauliOperator &b) {
            if (a.x_bits() != b.x_bits())
                return a.x_bits() < b.x_bits();
            return a.z_bits() < b.z_bits();
        };
        std::sort(ops1.begin(), ops1.end(), lex_less);
        // BFS by weight: compose previous layer with single-qubit ops on later qubits
        std::vector<PauliOperator> layer{PauliOperator(n)};
        size_t w = 0;
        while (table_.size() < total && w < n) {
            std::vector<PauliOperator> next;
            for (auto &base : layer) {
                size_t hi = 0; // first qubit strictly after base's support
                for (size_t q = 0; q < n; q++)
                    if (base.x(q) || base.z(q))
                        hi = q + 1;
                for (auto &s : ops1) {
                    size_t q = 0;
                    for (size_t i = 0; i < n; i++)
                        if (s.x(i) || s.z(i))
                            q = i;
                    if (q < hi)
                        continue;
                    next.push_back(base * s);
                }
            }
            std::sort(next.begin(), next.end(), lex_less);
            for (auto &e : next) {
                auto kk = key(code_->syndrome(e));
                if (!table_.count(kk))
                    table_.emplace(kk, e);
            }
            layer = std::move(next);
            w++;
        }
    }

    const StabilizerCode *code_;
    std::map<uint64_t, PauliOperator> table_;
};

// --- shipped code constructions -------------------------------------------

namespace codes {

inline StabilizerCode make(const std::string &name, size_t n, size_t k,
                           std::vector<std::string> stab, std::vector<std::string> logi,
                           std::vector<std::string> gaug = {},
                           std::vector<size_t> fixed = {}) {
    StabilizerCode c;
    c.name = name;
    c.n = n;
    c.k = k;
    for (auto &s : stab)
        c.S.push_back(PauliOperator::from_string(s));
    for (auto &s : logi)
        c.N.push_back(PauliOperator::from_string(s));
    for (auto &s : gaug)
        c.gauge.push_back(PauliOperator::from_string(s));
    c.fixed_gauge = fixed;
    c.validate();
    return c;
}

// Five-qubit code, stabilizer matrix exactly as printed (rows X|Z):
//   10100|00011, 01001|00110, 10010|01100, 00101|11000
inline StabilizerCode five_qubit() {
    return make("five_qubit", 5, 1, {"XIXZZ", "IXZZX", "XZZXI", "ZZXIX"},
                {"XXXXX", "ZZZZZ"});
}

// Steane 7-qubit code (Hamming [7,4,3] CSS).
inline StabilizerCode steane() {
    return make("steane", 7, 1,
                {"XIXIXIX", "IXXIIXX", "IIIXXXX", "ZIZIZIZ", "IZZIIZZ", "IIIZZZZ"},
                {"XXXXXXX", "ZZZZZZZ"});
}

// rows x cols Bacon-Shor grid, qubit (r,c) at index r*cols+c.
// X gauge: vertical XX pairs. Z gauge: horizontal ZZ pairs (the fixed gauge).
// Stabilizers: X on adjacent row pairs, Z on adjacent column pairs.
// Logical: X on the first row, Z on the first column.
inline StabilizerCode bacon_shor(size_t rows, size_t cols, const std::string &name) {
    size_t n = rows * cols;
    auto idx = [cols](size_t r, size_t c) { return r * cols + c; };
    std::vector<std::string> stab, logi, gaug;
    auto blank = [n]() { return std::string(n, 'I'); };
    for (size_t r = 0; r + 1 < rows; r++) {
        auto s = blank();
        for (size_t c = 0; c < cols; c++)
            s[idx(r, c)] = s[idx(r + 1, c)] = 'X';
        stab.push_back(s);
    }
    for (size_t c = 0; c + 1 < cols; c++) {
        auto s = blank();
        for (size_t r = 0; r < rows; r++)
            s[idx(r, c)] = s[idx(r, c + 1)] = 'Z';
        stab.push_back(s);
    }
    {
        auto x = blank();
        for (size_t c = 0; c < cols; c++)
            x[idx(0, c)] = 'X';
        auto z = blank();
        for (size_t r = 0; r < rows; r++)
            z[idx(r, 0)] = 'Z';
        logi = {x, z};
    }
    std::vector<size_t> fixed;
    // Z gauge first (fixed), then X gauge.
    for (size_t r = 0; r < rows; r++)
        for (size_t c = 0; c + 1 < cols; c++) {
            auto g = blank();
            g[idx(r, c)] = g[idx(r, c + 1)] = 'Z';
            fixed.push_back(gaug.size());
            gaug.push_back(g);
        }
    for (size_t c = 0; c < cols; c++)
        for (size_t r = 0; r + 1 < rows; r++) {
            auto g = blank();
            g[idx(r, c)] = g[idx(r + 1, c)] = 'X';
            gaug.push_back(g);
        }
    return make(name, n, 1, stab, logi, gaug, fixed);
}

inline StabilizerCode bs33() { return bacon_shor(3, 3, "bs33"); }
inline StabilizerCode bs39() { return bacon_shor(3, 9, "bs39"); }

// 3-qubit bit-flip repetition code (test scaffold).
inline StabilizerCode repetition3() {
    return make("repetition3", 3, 1, {"ZZI", "IZZ"}, {"XXX", "ZII"});
}

inline StabilizerCode by_name(const std::string &name) {
    if (name == "five_qubit")
        return five_qubit();
    if (name == "steane")
        return steane();
    if (name == "bs33")
        return bs33();
    if (name == "bs39")
        return bs39();
    if (name == "repetition3")
        return repetition3();
    throw std::invalid_argument("unknown code: " + name);
}

} // namespace codes

} // namespace exrec
