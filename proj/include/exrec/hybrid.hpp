#pragma once

#include "dyadic.hpp"
#include "pauli.hpp"
#include "stabilizer_code.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace exrec {

using QubitPair = std::pair<uint32_t, uint32_t>;

inline QubitPair make_pair_canonical(uint32_t a, uint32_t b) {
    return a < b ? QubitPair{a, b} : QubitPair{b, a};
}

// Error operator P * prod_{(i,j) in factors} CZ(i,j), with the CZ product kept
// to the right of the Pauli part. CZ^2 = I, so factors toggle on insertion.
struct HybridError {
    PauliOperator pauli;
    std::set<QubitPair> cz_factors;

    HybridError() = default;
    explicit HybridError(size_t n) : pauli(n) {}
    explicit HybridError(PauliOperator p) : pauli(std::move(p)) {}

    bool is_identity() const { return pauli.is_identity() && cz_factors.empty(); }

    void toggle_cz(uint32_t a, uint32_t b) {
        assert(a != b);
        auto pr = make_pair_canonical(a, b);
        auto it = cz_factors.find(pr);
        if (it != cz_factors.end())
            cz_factors.erase(it);
        else
            cz_factors.insert(pr);
    }

    bool touches_factor(uint32_t q) const {
        for (auto &f : cz_factors)
            if (f.first == q || f.second == q)
                return true;
        return false;
    }

    // Left-multiply by a fresh Pauli fault: E -> f * E.
    void apply_fault(const PauliOperator &f) { pauli = f * pauli; }

    bool operator==(const HybridError &o) const {
        return pauli == o.pauli && cz_factors == o.cz_factors;
    }
    bool operator<(const HybridError &o) const {
        if (!(pauli.x_bits() == o.pauli.x_bits()))
            return pauli.x_bits() < o.pauli.x_bits();
        if (!(pauli.z_bits() == o.pauli.z_bits()))
            return pauli.z_bits() < o.pauli.z_bits();
        if (pauli.phase() != o.pauli.phase())
            return pauli.phase() < o.pauli.phase();
        return cz_factors < o.cz_factors;
    }
};

// --- Clifford conjugation of the frame --------------------------------------
// The frame is E = P * L where L is the CZ-factor product. Diagonal gates
// commute with L; CNOT acts on L by variable substitution; H/S on a qubit
// carrying a factor is not representable and asserts.

inline void conj_h(HybridError &e, size_t q) {
    if (e.touches_factor(uint32_t(q)))
        throw std::logic_error("H on a qubit carrying a CZ factor");
    bool x = e.pauli.x(q), z = e.pauli.z(q);
    // H X H = Z, H Z H = X, H Y H = -Y
    e.pauli.set_x(q, z);
    e.pauli.set_z(q, x);
    if (x && z)
        e.pauli.mul_phase(2);
}

inline void conj_s(HybridError &e, size_t q) {
    if (e.touches_factor(uint32_t(q)))
        throw std::logic_error("S on a qubit carrying a CZ factor");
    bool x = e.pauli.x(q), z = e.pauli.z(q);
    // S X S^dg = Y = i X Z ; S Y S^dg = -X ; S Z S^dg = Z
    if (x && !z) {
        e.pauli.set_z(q, true);
        e.pauli.mul_phase(1);
    } else if (x && z) {
        e.pauli.set_z(q, false);
        e.pauli.mul_phase(1); // iXZ -> i(iX) ... Y -> -X: phase of stored rep
    }
}

inline void conj_cnot(HybridError &e, size_t c, size_t t) {
    // Pauli part: Xc -> Xc Xt, Zt -> Zc Zt.
    bool xc = e.pauli.x(c), zt = e.pauli.z(t);
    if (xc)
        e.pauli.set_x(t, !e.pauli.x(t));
    if (zt)
        e.pauli.set_z(c, !e.pauli.z(c));
    // factor substitution: CZ(t, y) -> CZ(t, y) CZ(c, y); CZ(c, t) -> CZ(c,t) Zc
    std::vector<QubitPair> touched;
    for (auto &f : e.cz_factors)
        if (f.first == t || f.second == t)
            touched.push_back(f);
    for (auto &f : touched) {
        uint32_t other = (f.first == t) ? f.second : f.first;
        if (other == c) {
            // CNOT CZ(c,t) CNOT = CZ(c,t) Zc
            e.pauli = e.pauli * [&] {
                PauliOperator z(e.pauli.n());
                z.set_z(c, true);
                return z;
            }();
        } else {
            e.toggle_cz(uint32_t(c), other);
        }
    }
}

// Spec rule for a Pauli crossing CCZ(a,b,c): every X component on one of the
// three qubits toggles the CZ factor on the other two. Z components and
// disjoint factors pass through (all diagonal parts commute).
inline void propagate_through_ccz(HybridError &e, size_t a, size_t b, size_t c) {
    const size_t q[3] = {a, b, c};
    for (int i = 0; i < 3; i++)
        if (e.pauli.x(q[i]))
            e.toggle_cz(uint32_t(q[(i + 1) % 3]), uint32_t(q[(i + 2) % 3]));
}

inline HybridError propagate_through_ccz(const HybridError &e, size_t a, size_t b, size_t c) {
    HybridError r = e;
    propagate_through_ccz(r, a, b, c);
    return r;
}

inline void conj_cz_gate(HybridError &e, size_t a, size_t b) {
    // CZ X_a CZ = X_a Z_b and symmetrically.
    if (e.pauli.x(a))
        e.pauli.set_z(b, !e.pauli.z(b));
    if (e.pauli.x(b))
        e.pauli.set_z(a, !e.pauli.z(a));
}

// --- Pauli sums ---------------------------------------------------------------

struct PauliSumError {
    struct Term {
        Dyadic amp;
        PauliOperator op;
    };
    std::vector<Term> terms;

    Rational total_weight() const {
        Rational w = 0;
        for (auto &t : terms)
            w += t.amp.square();
        return w;
    }
};

// Expand each CZ factor as (II + ZI + IZ - ZZ)/2 and multiply out.
// m factors -> up to 4^m signed terms with amplitudes +-2^-m.
inline PauliSumError breakdown(const HybridError &e, int cap = 12) {
    int m = int(e.cz_factors.size());
    if (m > cap)
        throw std::runtime_error("CZ breakdown exceeds term cap");
    size_t n = e.pauli.n();
    PauliSumError out;
    // the Pauli part's own phase is a global phase of the whole sum; strip it
    PauliOperator base = e.pauli;
    base.set_phase(0);
    std::vector<QubitPair> fs(e.cz_factors.begin(), e.cz_factors.end());
    size_t combos = size_t(1) << (2 * m);
    out.terms.reserve(combos);
    for (size_t leg = 0; leg < combos; leg++) {
        PauliOperator zpart(n);
        int sign = 0;
        for (int f = 0; f < m; f++) {
            int choice = int((leg >> (2 * f)) & 3); // 0:II 1:ZI 2:IZ 3:-ZZ
            if (choice & 1)
                zpart.set_z(fs[f].first, !zpart.z(fs[f].first));
            if (choice & 2)
                zpart.set_z(fs[f].second, !zpart.z(fs[f].second));
            if (choice == 3)
                sign ^= 1;
        }
        PauliSumError::Term t;
        t.op = base * zpart;
        t.amp = Dyadic(sign ? -1 : 1, m);
        out.terms.push_back(std::move(t));
    }
    return out;
}

// Phase-aware span of Pauli operators in reduced echelon form over the
// symplectic representation. Reduction of a term multiplies in basis elements
// (with their phases), giving a canonical coset representative.
class PauliSpace {
  public:
    explicit PauliSpace(size_t n) : n_(n) {}

    void insert(const PauliOperator &g) {
        PauliOperator r = reduce(g);
        if (r.identity_bits())
            return;
        BitVec v = r.symplectic();
        size_t p = 0;
        while (!v.get(p))
            p++;
        size_t pos = 0;
        while (pos < basis_.size() && pivot_[pos] < p)
            pos++;
        basis_.insert(basis_.begin() + pos, r);
        pivot_.insert(pivot_.begin() + pos, p);
        for (size_t i = 0; i < basis_.size(); i++)
            if (i != pos && basis_[i].symplectic().get(p))
                basis_[i] = basis_[i] * r;
    }

    // canonical representative of the coset g * <basis>
    PauliOperator reduce(const PauliOperator &g) const {
        PauliOperator r = g;
        for (size_t i = 0; i < basis_.size(); i++)
            if (r.symplectic().get(pivot_[i]))
                r = r * basis_[i];
        return r;
    }

    // membership as a group element including phase
    bool contains(const PauliOperator &g) const {
        PauliOperator r = reduce(g);
        return r.is_identity();
    }
    bool contains_up_to_phase(const PauliOperator &g) const {
        return reduce(g).identity_bits();
    }

    size_t dim() const { return basis_.size(); }

  private:
    size_t n_;
    std::vector<PauliOperator> basis_;
    std::vector<size_t> pivot_;
};

// Rewrite every term to the canonical representative of its coset modulo the
// given group, sum amplitudes of equal canonical forms, drop zeros. Total
// squared amplitude is conserved (terms in distinct cosets stay distinct).
inline PauliSumError interfere(const PauliSumError &s, const PauliSpace &group) {
    // canonical rep of each coset = first-seen reduced operator; later terms of
    // the same coset fold their phase difference (+-1) into the amplitude
    std::map<std::pair<std::string, std::string>, std::pair<PauliOperator, Dyadic>> merged;
    std::vector<std::pair<std::string, std::string>> order;
    for (auto &t : s.terms) {
        PauliOperator c = group.reduce(t.op);
        auto key = std::make_pair(c.x_bits().str(), c.z_bits().str());
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, std::make_pair(c, t.amp));
            order.push_back(key);
        } else {
            int diff = (c.phase() - it->second.first.phase()) & 3;
            if (diff == 0)
                it->second.second = it->second.second + t.amp;
            else if (diff == 2)
                it->second.second = it->second.second + (-t.amp);
            else
                throw std::logic_error("interfere: imaginary relative phase");
        }
    }
    PauliSumError out;
    for (auto &k : order) {
        auto &v = merged.at(k);
        if (!v.second.zero())
            out.terms.push_back({v.second, v.first});
    }
    return out;
}

// Convenience: interference group of a set of code blocks embedded in a wider
// qubit register. block_offsets[i] gives the first global qubit of block i.
inline PauliSpace interference_group(size_t total_qubits,
                                     const std::vector<const StabilizerCode *> &blocks,
                                     const std::vector<size_t> &block_offsets) {
    PauliSpace g(total_qubits);
    for (size_t b = 0; b < blocks.size(); b++) {
        auto embed = [&](const PauliOperator &p) {
            PauliOperator q(total_qubits);
            for (size_t i = 0; i < p.n(); i++) {
                q.set_x(block_offsets[b] + i, p.x(i));
                q.set_z(block_offsets[b] + i, p.z(i));
            }
            q.set_phase(p.phase());
            return q;
        };
        for (auto &s : blocks[b]->S)
            g.insert(embed(s));
        for (auto idx : blocks[b]->fixed_gauge)
            g.insert(embed(blocks[b]->gauge[idx]));
    }
    return g;
}

// Theorem-1 harmless test: true iff g^dg E^dg g E lies in the stabilizer group
// (with fixed gauge) for every stabilizer, fixed-gauge and logical generator.
// E acts within one code block here; factors must be internal to the block.
inline bool is_harmless(const HybridError &e, const StabilizerCode &code) {
    if (e.pauli.n() != code.n)
        throw std::invalid_argument("is_harmless: dimension");
    PauliSpace stab(code.n);
    std::vector<PauliOperator> gens;
    for (auto &s : code.S) {
        stab.insert(s);
        gens.push_back(s);
    }
    for (auto i : code.fixed_gauge) {
        stab.insert(code.gauge[i]);
        gens.push_back(code.gauge[i]);
    }
    for (auto &l : code.N)
        gens.push_back(l);

    for (auto &g : gens) {
        // K = g^dg E^dg g E. With E = P L: g^dg L P^dg g P L
        //   = (+-1 from P/g commutation) * g^dg L g L
        // and L X_S L = X_S Z[C 1_S] * sign, so g^dg L g L = Z[C x_g] * sign.
        int sign = g.commutes_with(e.pauli) ? 0 : 2;
        PauliOperator K(code.n);
        K.mul_phase(sign);
        // conjugate L by g: for each factor (i,j), X_i in g contributes Z_j etc.
        // K *= prod over factors of Z-contributions; signs: CZ X_i CZ = X_i Z_j
        // (phase +1), so商 g^dg (L g L^dg)?? Work operator-level instead:
        // L g L = g * prod_{(i,j)} (Z_j^{x_i(g)} Z_i^{x_j(g)}) * (-1)^{x_i x_j}
        for (auto &f : e.cz_factors) {
            bool xi = g.x(f.first), xj = g.x(f.second);
            if (xi)
                K.set_z(f.second, !K.z(f.second));
            if (xj)
                K.set_z(f.first, !K.z(f.first));
            if (xi && xj)
                K.mul_phase(2);
        }
        if (!stab.contains(K))
            return false;
    }
    return true;
}

} // namespace exrec
