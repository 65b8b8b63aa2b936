#pragma once

#include "circuit.hpp"
#include "hybrid.hpp"

#include <functional>
#include <memory>
#include <unordered_map>

namespace exrec {

// One or two faults: (location index, Pauli on that location's support).
struct Fault {
    size_t loc;
    PauliOperator op; // over location arity qubits, in location order
};
struct FaultPattern {
    std::vector<Fault> faults; // zero, one or two entries, loc strictly increasing
};

enum class OutcomeClass { succ_acc, fail_acc, reject };

struct ClassifiedOutcome {
    OutcomeClass cls;
    Rational weight;
};

struct SimResult {
    std::vector<ClassifiedOutcome> outcomes;
    Rational weight(OutcomeClass c) const {
        Rational w = 0;
        for (auto &o : outcomes)
            if (o.cls == c)
                w += o.weight;
        return w;
    }
    Rational total() const {
        Rational w = 0;
        for (auto &o : outcomes)
            w += o.weight;
        return w;
    }
};

// Execution context prepared once per circuit and shared by all patterns.
class Simulator {
  public:
    Simulator(const CircuitIR &c, const std::map<std::string, StabilizerCode> &code_lib)
        : c_(&c) {
        c.validate();
        for (auto &b : c.blocks) {
            auto it = code_lib.find(b.code_name);
            if (it == code_lib.end())
                throw std::invalid_argument("missing code: " + b.code_name);
            if (it->second.n != b.qubits.size())
                throw std::invalid_argument("block/code size mismatch: " + b.id);
            block_codes_.push_back(&it->second);
        }
        for (auto &b : c.blocks)
            tables_.emplace_back(std::make_unique<SyndromeTable>(*block_code(b.id)));
        index_parities();
        build_final_group();
        build_ec_tables();
    }

    const CircuitIR &circuit() const { return *c_; }

    const StabilizerCode *block_code(const std::string &id) const {
        for (size_t i = 0; i < c_->blocks.size(); i++)
            if (c_->blocks[i].id == id)
                return block_codes_[i];
        throw std::invalid_argument("unknown block " + id);
    }
    const SyndromeTable &block_table(const std::string &id) const {
        for (size_t i = 0; i < c_->blocks.size(); i++)
            if (c_->blocks[i].id == id)
                return *tables_[i];
        throw std::invalid_argument("unknown block " + id);
    }

    SimResult simulate_pattern(const FaultPattern &f) const;

    // All fault locations with their Pauli spaces: loc index -> 4^r - 1 ops.
    std::vector<PauliOperator> location_paulis(size_t loc) const {
        int ar = op_arity(c_->locations[loc].kind);
        std::vector<PauliOperator> out;
        for (int m = 1; m < (1 << (2 * ar)); m++) {
            PauliOperator p(size_t(ar));
            for (int q = 0; q < ar; q++) {
                int t = (m >> (2 * q)) & 3; // 1:X 2:Z 3:Y
                if (t & 1)
                    p.set_x(size_t(q), true);
                if (t & 2)
                    p.set_z(size_t(q), true);
                if (t == 3)
                    p.mul_phase(1);
            }
            out.push_back(p);
        }
        return out;
    }

  private:
    struct Element {
        HybridError frame;
        Dyadic amp{1, 0};
        std::vector<bool> flips;          // raw measurement flips
        std::vector<char> adaptive_fired; // 2 undecided / 0 no / 1 yes
        std::vector<std::pair<uint32_t, char>> flags; // located-error hints
        int rejected_at = -1;
        int forced_fail = 0;
    };

    void index_parities() {
        for (size_t i = 0; i < c_->parities.size(); i++)
            parity_index_[c_->parities[i].name] = i;
        // map: measurement index -> parities completed by it
        size_t nm = size_t(c_->num_meas);
        complete_at_.assign(nm, {});
        for (size_t i = 0; i < c_->parities.size(); i++) {
            int last = -1;
            for (int m : c_->parities[i].meas)
                last = std::max(last, m);
            if (last >= 0)
                complete_at_[size_t(last)].push_back(i);
        }
        for (auto &p : c_->partners) {
            auto it = parity_index_.find(p.parity);
            if (it == parity_index_.end())
                throw std::invalid_argument("partner on unknown parity");
            partner_of_[it->second] = &p;
        }
    }

    bool parity_flip(const Element &e, const ParityDef &p) const {
        bool f = false;
        for (int m : p.meas)
            f ^= e.flips[size_t(m)];
        return f;
    }
    bool named_flip(const Element &e, const std::string &name) const {
        auto it = parity_index_.find(name);
        if (it != parity_index_.end())
            return parity_flip(e, c_->parities[it->second]);
        // logparity: classically decoded logical flip of a measured block
        for (auto &lp : c_->logparities)
            if (lp.name == name)
                return logparity_flip(e, lp);
        throw std::invalid_argument("unknown parity " + name);
    }

    bool logparity_flip(const Element &e, const LogParityDef &lp) const {
        const StabilizerCode *code = block_code(lp.block_id);
        // flip pattern over the block, decoded like a classical codeword
        PauliOperator v(code->n);
        for (size_t i = 0; i < lp.meas.size(); i++)
            if (e.flips[size_t(lp.meas[i])])
                v.set_x(i, true); // measZ flip ~ X error pattern
        BitVec syn = code->syndrome(v);
        const PauliOperator &rec = block_table(lp.block_id).recover(syn);
        PauliOperator corrected = v * rec;
        // logical flip: anticommutation with logical Z (row k..2k-1 -> Z is last)
        const PauliOperator &logical_z = code->N.back();
        return !logical_z.commutes_with(corrected);
    }

    void apply_frame_op(Element &e, const FrameOp &op) const {
        PauliOperator p(e.frame.pauli.n());
        for (auto &[q, t] : op.paulis) {
            if (t == 'X' || t == 'Y')
                p.set_x(q, !p.x(q));
            if (t == 'Z' || t == 'Y')
                p.set_z(q, !p.z(q));
            if (t == 'Y')
                p.mul_phase(1);
        }
        e.frame.pauli = p * e.frame.pauli;
        for (auto &[a, b] : op.czs)
            e.frame.toggle_cz(a, b);
    }

    // conjugate the frame through the ideal operation at location l
    void conj_location(Element &e, const Location &l) const {
        auto &fr = e.frame;
        switch (l.kind) {
        case OpKind::H:
            conj_h(fr, l.qubits[0]);
            break;
        case OpKind::S:
            conj_s(fr, l.qubits[0]);
            break;
        case OpKind::X:
        case OpKind::Y:
        case OpKind::Z: {
            PauliOperator g(fr.pauli.n());
            if (l.kind != OpKind::Z)
                g.set_x(l.qubits[0], true);
            if (l.kind != OpKind::X)
                g.set_z(l.qubits[0], true);
            if (!g.commutes_with(fr.pauli))
                e.amp = -e.amp;
            break;
        }
        case OpKind::CNOT:
            conj_cnot(fr, l.qubits[0], l.qubits[1]);
            break;
        case OpKind::CZ:
            conj_cz_gate(fr, l.qubits[0], l.qubits[1]);
            break;
        case OpKind::CCZ:
            propagate_through_ccz(fr, l.qubits[0], l.qubits[1], l.qubits[2]);
            break;
        case OpKind::Prep0:
        case OpKind::PrepPlus:
            if (fr.touches_factor(l.qubits[0]))
                throw std::logic_error("prep on qubit carrying a CZ factor");
            fr.pauli.set_x(l.qubits[0], false);
            fr.pauli.set_z(l.qubits[0], false);
            break;
        default:
            break; // measurements handled by the caller
        }
    }

    void inject_fault(Element &e, const Location &l, const PauliOperator &p) const {
        PauliOperator g(e.frame.pauli.n());
        for (size_t i = 0; i < l.qubits.size(); i++) {
            if (p.x(i))
                g.set_x(l.qubits[i], true);
            if (p.z(i))
                g.set_z(l.qubits[i], true);
        }
        g.set_phase(p.phase());
        e.frame.apply_fault(g);
    }

    // Expand CZ factors touching qubit q; returns replacement elements.
    std::vector<Element> expand_at(const Element &in, uint32_t q) const {
        std::vector<QubitPair> fs;
        for (auto &f : in.frame.cz_factors)
            if (f.first == q || f.second == q)
                fs.push_back(f);
        if (fs.empty())
            return {in};
        std::vector<Element> out;
        size_t m = fs.size();
        for (size_t leg = 0; leg < (size_t(1) << (2 * m)); leg++) {
            Element e = in;
            int sign = 0;
            for (size_t f = 0; f < m; f++) {
                e.frame.cz_factors.erase(fs[f]);
                int choice = int((leg >> (2 * f)) & 3);
                if (choice & 1)
                    e.frame.pauli.set_z(fs[f].first, !e.frame.pauli.z(fs[f].first));
                if (choice & 2)
                    e.frame.pauli.set_z(fs[f].second, !e.frame.pauli.z(fs[f].second));
                if (choice == 3)
                    sign ^= 1;
            }
            e.amp = Dyadic(sign ? -in.amp.num : in.amp.num, in.amp.k + int(m));
            out.push_back(std::move(e));
        }
        return out;
    }

    void decode_ec(std::vector<Element> &elems, size_t ec_index) const;
    void classify(const Element &e, SimResult &res, std::vector<Element> &survivors) const;

    void build_final_group() {
        final_group_ = std::make_unique<PauliSpace>(c_->num_qubits);
        for (size_t b = 0; b < c_->blocks.size(); b++) {
            auto embed = [&](const PauliOperator &p) {
                PauliOperator q(c_->num_qubits);
                for (size_t i = 0; i < p.n(); i++) {
                    if (p.x(i))
                        q.set_x(c_->blocks[b].qubits[i], true);
                    if (p.z(i))
                        q.set_z(c_->blocks[b].qubits[i], true);
                }
                q.set_phase(p.phase());
                return q;
            };
            for (auto &s : block_codes_[b]->S)
                final_group_->insert(embed(s));
            for (auto idx : block_codes_[b]->fixed_gauge)
                final_group_->insert(embed(block_codes_[b]->gauge[idx]));
        }
    }

    // record-bfs decode tables, built by simulating candidate data errors
    // through the EC's own location span
    void build_ec_tables();
    std::vector<bool> ec_record_of(size_t ec_index, const HybridError &entry_frame) const;

    const CircuitIR *c_;
    std::vector<const StabilizerCode *> block_codes_;
    std::vector<std::unique_ptr<SyndromeTable>> tables_;
    std::map<std::string, size_t> parity_index_;
    std::vector<std::vector<size_t>> complete_at_;
    std::map<size_t, const PartnerDef *> partner_of_;
    std::unique_ptr<PauliSpace> final_group_;
    std::vector<std::map<std::string, PauliOperator>> ec_tables_; // record key -> recovery
    friend class EnumerationOracle;
};

} // namespace exrec
