#pragma once

#include "stabilizer_code.hpp"

#include <optional>

namespace exrec {

// Generalized Steane error correction for arbitrary stabilizer codes.
// The 2n-qubit ancilla state has stabilizer block rows
//   ( S_z  S_x | 0    S_z )
//   ( 0    0   | S_x  S_z )
//   ( 0    0   | N_x  N_z )
// with columns ordered (X top | X bottom | Z top | Z bottom).

namespace detail {

inline void put_block(PauliOperator &p, const PauliOperator &src, size_t n, bool from_x,
                      size_t dest_offset, bool to_x) {
    for (size_t i = 0; i < n; i++) {
        bool v = from_x ? src.x(i) : src.z(i);
        if (!v)
            continue;
        if (to_x)
            p.set_x(dest_offset + i, !p.x(dest_offset + i));
        else
            p.set_z(dest_offset + i, !p.z(dest_offset + i));
    }
}

} // namespace detail

// Returns the ancilla as a rank-2n stabilizer "code" with k = 0.
inline StabilizerCode build_steane_ancilla(const StabilizerCode &code) {
    code.validate();
    size_t n = code.n;
    StabilizerCode anc;
    anc.name = code.name + "_steane_ancilla";
    anc.n = 2 * n;
    anc.k = 0;

    for (auto &s : code.S) {
        PauliOperator p(2 * n);
        detail::put_block(p, s, n, /*from_x=*/false, 0, /*to_x=*/true);  // S_z -> X top
        detail::put_block(p, s, n, /*from_x=*/true, n, /*to_x=*/true);   // S_x -> X bottom
        detail::put_block(p, s, n, /*from_x=*/false, n, /*to_x=*/false); // S_z -> Z bottom
        anc.S.push_back(p);
    }
    for (auto &s : code.S) {
        PauliOperator p(2 * n);
        detail::put_block(p, s, n, /*from_x=*/true, 0, /*to_x=*/false);  // S_x -> Z top
        detail::put_block(p, s, n, /*from_x=*/false, n, /*to_x=*/false); // S_z -> Z bottom
        anc.S.push_back(p);
    }
    for (auto &l : code.N) {
        PauliOperator p(2 * n);
        detail::put_block(p, l, n, /*from_x=*/true, 0, /*to_x=*/false);
        detail::put_block(p, l, n, /*from_x=*/false, n, /*to_x=*/false);
        anc.S.push_back(p);
    }
    return anc;
}

// 2n independent commuting generators?
inline bool ancilla_well_formed(const StabilizerCode &anc) {
    if (anc.S.size() != anc.n)
        return false;
    for (size_t i = 0; i < anc.S.size(); i++)
        for (size_t j = 0; j < anc.S.size(); j++)
            if (!anc.S[i].commutes_with(anc.S[j]))
                return false;
    BitMatrix m(0, 2 * anc.n);
    for (auto &p : anc.S)
        m.push_row(p.symplectic());
    return m.rank() == anc.n;
}

// Symbolic propagation of the joint (data + ancilla) stabilizer through the
// transversal CZ layer then the transversal CX layer, checking that the final
// form lets the syndrome a be read from X-basis ancilla measurements.
//
// Each tracked row carries a label over (a_1..a_{n-k} | b_1..b_{2k}) marking
// syndrome and logical content. The extraction works iff, modulo rows that
// are X-only on the ancilla and identity on data, each pure a_i label is
// reachable without b contamination.
inline bool verify_steane_extraction_of(const StabilizerCode &code,
                                        const StabilizerCode &anc) {
    size_t n = code.n, k = code.k;
    size_t total = 3 * n; // data | top | bottom
    size_t nlab = (n - k) + 2 * k;

    struct Row {
        PauliOperator op;
        BitVec label;
    };
    std::vector<Row> rows;

    auto embed = [&](const PauliOperator &src, size_t off) {
        PauliOperator p(total);
        for (size_t i = 0; i < src.n(); i++) {
            if (src.x(i))
                p.set_x(off + i, true);
            if (src.z(i))
                p.set_z(off + i, true);
        }
        return p;
    };

    // data block: stabilizers labelled a_i, logicals labelled b_j
    for (size_t i = 0; i < code.S.size(); i++) {
        Row r{embed(code.S[i], 0), BitVec(nlab)};
        r.label.set(i, true);
        rows.push_back(r);
    }
    for (size_t j = 0; j < code.N.size(); j++) {
        Row r{embed(code.N[j], 0), BitVec(nlab)};
        r.label.set((n - k) + j, true);
        rows.push_back(r);
    }
    // ancilla rows (already on qubits n..3n-1)
    for (auto &s : anc.S)
        rows.push_back({embed(s, n), BitVec(nlab)});

    // transversal CZ: data_i -- top_i
    for (auto &r : rows) {
        HybridError h(r.op);
        for (size_t i = 0; i < n; i++)
            conj_cz_gate(h, i, n + i);
        r.op = h.pauli;
    }
    // transversal CX: data_i (control) -> bottom_i (target)
    for (auto &r : rows) {
        HybridError h(r.op);
        for (size_t i = 0; i < n; i++)
            conj_cnot(h, i, 2 * n + i);
        r.op = h.pauli;
    }

    // Gaussian elimination over (symplectic bits | labels): find, for each
    // syndrome index i, a combination that is X-only on ancilla, identity on
    // data, and has label exactly a_i.
    size_t width = 2 * total + nlab;
    std::vector<BitVec> vecs;
    for (auto &r : rows) {
        BitVec v(width);
        BitVec s = r.op.symplectic();
        for (size_t i = 0; i < 2 * total; i++)
            if (s.get(i))
                v.set(i, true);
        for (size_t i = 0; i < nlab; i++)
            if (r.label.get(i))
                v.set(2 * total + i, true);
        vecs.push_back(v);
    }
    // columns that must vanish for a row to be "measurable": data X, data Z,
    // ancilla Z. Ancilla X columns are free; labels are read out.
    auto measurable = [&](const BitVec &v) {
        for (size_t i = 0; i < n; i++)
            if (v.get(i))
                return false; // data X
        for (size_t i = 0; i < total; i++)
            if (v.get(total + i))
                return false; // any Z component (data or ancilla)
        return true;
    };
    // eliminate on the non-free columns: order them first
    std::vector<size_t> elim_cols;
    for (size_t i = 0; i < n; i++)
        elim_cols.push_back(i); // data X
    for (size_t i = 0; i < total; i++)
        elim_cols.push_back(total + i); // all Z
    size_t r0 = 0;
    for (size_t c : elim_cols) {
        size_t sel = SIZE_MAX;
        for (size_t i = r0; i < vecs.size(); i++)
            if (vecs[i].get(c)) {
                sel = i;
                break;
            }
        if (sel == SIZE_MAX)
            continue;
        std::swap(vecs[r0], vecs[sel]);
        for (size_t i = 0; i < vecs.size(); i++)
            if (i != r0 && vecs[i].get(c))
                vecs[i] ^= vecs[r0];
        r0++;
    }
    // rows r0.. are zero on all eliminated columns -> measurable combinations
    RowSpace labels((n - k) + 2 * k);
    for (size_t i = r0; i < vecs.size(); i++) {
        if (!measurable(vecs[i]))
            continue;
        BitVec lab(nlab);
        for (size_t j = 0; j < nlab; j++)
            if (vecs[i].get(2 * total + j))
                lab.set(j, true);
        labels.insert(lab);
    }
    // need every pure a_i label, and no b contamination forced:
    for (size_t i = 0; i < n - k; i++) {
        BitVec want(nlab);
        want.set(i, true);
        if (!labels.contains(want))
            return false;
    }
    // sanity: logical values must NOT be measurable (no information gain)
    for (size_t j = 0; j < 2 * k; j++) {
        BitVec bad(nlab);
        bad.set((n - k) + j, true);
        if (labels.contains(bad))
            return false;
    }
    return true;
}

inline bool verify_steane_extraction(const StabilizerCode &code) {
    return verify_steane_extraction_of(code, build_steane_ancilla(code));
}

// The flawed ancilla from Steane's original proposal: S_z omitted on the right
// side of the first block row.
inline StabilizerCode build_broken_steane_ancilla(const StabilizerCode &code) {
    StabilizerCode anc = build_steane_ancilla(code);
    size_t n = code.n;
    for (size_t i = 0; i < code.S.size(); i++) {
        // remove the Z-bottom block of the first (n-k) rows
        for (size_t q = 0; q < n; q++)
            anc.S[i].set_z(n + q, false);
    }
    anc.name = code.name + "_broken_ancilla";
    return anc;
}

// Can the ancilla stabilizer group be generated using only Y-type rows
// (every qubit I or Y) and Z-type rows (every qubit I or Z)?
inline bool ancilla_has_yz_generators(const StabilizerCode &anc) {
    size_t n = anc.n;
    RowSpace full(2 * n), yz(2 * n);
    for (auto &s : anc.S)
        full.insert(s.symplectic());
    // enumerate the group if small, else use structured search
    if (anc.S.size() <= 20) {
        size_t m = anc.S.size();
        for (size_t mask = 1; mask < (size_t(1) << m); mask++) {
            BitVec v(2 * n);
            for (size_t i = 0; i < m; i++)
                if ((mask >> i) & 1)
                    v ^= anc.S[i].symplectic();
            bool is_z = true, is_y = true;
            for (size_t q = 0; q < n; q++) {
                bool x = v.get(q), z = v.get(n + q);
                if (x)
                    is_z = false;
                if (x != z)
                    is_y = false;
            }
            if (is_z || is_y)
                yz.insert(v);
        }
    }
    return yz.dim() == full.dim();
}

} // namespace exrec
