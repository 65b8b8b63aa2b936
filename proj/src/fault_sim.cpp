#include "exrec/fault_sim.hpp"

#include <algorithm>

namespace exrec {

namespace {

std::string flip_key(const std::vector<bool> &v) {
    std::string s((v.size() + 7) / 8, '\0');
    for (size_t i = 0; i < v.size(); i++)
        if (v[i])
            s[i / 8] |= char(1 << (i % 8));
    return s;
}

} // namespace

void Simulator::build_ec_tables() {
    ec_tables_.resize(c_->ecs.size());
    for (size_t e = 0; e < c_->ecs.size(); e++) {
        auto &ec = c_->ecs[e];
        if (ec.mode != ECBlock::Mode::record_bfs)
            continue;
        const BlockDef &blk = c_->block(ec.block_id);
        size_t nq = blk.qubits.size();
        // candidate data errors in (weight, lex) order up to weight 3
        std::vector<PauliOperator> singles;
        for (size_t q = 0; q < nq; q++)
            for (int t = 1; t <= 3; t++) {
                PauliOperator p(c_->num_qubits);
                if (t & 1)
                    p.set_x(blk.qubits[q], true);
                if (t & 2)
                    p.set_z(blk.qubits[q], true);
                if (t == 3)
                    p.mul_phase(1);
                singles.push_back(p);
            }
        auto &table = ec_tables_[e];
        auto try_insert = [&](const PauliOperator &cand) {
            HybridError h(cand);
            auto rec = ec_record_of(e, h);
            auto key = flip_key(rec);
            if (!table.count(key))
                table.emplace(key, cand);
        };
        try_insert(PauliOperator(c_->num_qubits));
        for (auto &a : singles)
            try_insert(a);
        for (size_t i = 0; i < singles.size(); i++)
            for (size_t j = i + 1; j < singles.size(); j++) {
                if (singles[i].x_bits().dot(singles[j].x_bits()) ||
                    singles[i].z_bits().dot(singles[j].z_bits()) ||
                    !(singles[i].x_bits() & singles[j].x_bits()).zero() ||
                    !(singles[i].z_bits() & singles[j].z_bits()).zero())
                    continue; // same-qubit combinations are already singles
                try_insert(singles[i] * singles[j]);
            }
        for (size_t i = 0; i < singles.size(); i++)
            for (size_t j = i + 1; j < singles.size(); j++)
                for (size_t k = j + 1; k < singles.size(); k++) {
                    auto disjoint = [](const PauliOperator &a, const PauliOperator &b) {
                        return (a.x_bits() & b.x_bits()).zero() &&
                               (a.z_bits() & b.z_bits()).zero() &&
                               (a.x_bits() & b.z_bits()).zero() &&
                               (a.z_bits() & b.x_bits()).zero();
                    };
                    if (!disjoint(singles[i], singles[j]) ||
                        !disjoint(singles[i], singles[k]) ||
                        !disjoint(singles[j], singles[k]))
                        continue;
                    try_insert(singles[i] * singles[j] * singles[k]);
                }
    }
}

std::vector<bool> Simulator::ec_record_of(size_t ec_index, const HybridError &entry) const {
    auto &ec = c_->ecs[ec_index];
    Element e;
    e.frame = entry;
    e.flips.assign(size_t(c_->num_meas), false);
    std::vector<Element> elems{e};
    for (size_t i = ec.first_loc; i < ec.last_loc; i++) {
        auto &l = c_->locations[i];
        if (l.adaptive_id >= 0)
            throw std::logic_error("record-bfs EC with adaptive content");
        std::vector<Element> next;
        for (auto &el : elems) {
            if (op_is_meas(l.kind)) {
                if (el.frame.touches_factor(l.qubits[0]))
                    throw std::logic_error("record-bfs table: CZ factor at measurement");
                Element cur = el;
                bool flip = (l.kind == OpKind::MeasX) ? cur.frame.pauli.z(l.qubits[0])
                                                      : cur.frame.pauli.x(l.qubits[0]);
                cur.flips[size_t(l.meas_index)] = flip;
                cur.frame.pauli.set_x(l.qubits[0], false);
                cur.frame.pauli.set_z(l.qubits[0], false);
                next.push_back(std::move(cur));
            } else {
                Element cur = el;
                conj_location(cur, l);
                next.push_back(std::move(cur));
            }
        }
        elems = std::move(next);
    }
    std::vector<bool> rec;
    auto add_parity = [&](const std::string &name) {
        rec.push_back(named_flip(elems[0], name));
    };
    for (auto &p : ec.syndromes)
        add_parity(p);
    for (auto &p : ec.records)
        add_parity(p);
    return rec;
}

void Simulator::decode_ec(std::vector<Element> &elems, size_t ec_index) const {
    auto &ec = c_->ecs[ec_index];
    if (ec.mode == ECBlock::Mode::none && c_->recovers.empty() && c_->notifies.empty())
        return;
    const BlockDef &blk = c_->block(ec.block_id);
    const StabilizerCode *code = block_code(ec.block_id);

    auto embed = [&](const PauliOperator &p) {
        PauliOperator q(c_->num_qubits);
        for (size_t i = 0; i < p.n(); i++) {
            if (p.x(i))
                q.set_x(blk.qubits[i], true);
            if (p.z(i))
                q.set_z(blk.qubits[i], true);
        }
        return q;
    };

    // row subsets for the CSS partial modes
    auto rows_of_type = [&](char t) {
        std::vector<size_t> rows;
        for (size_t i = 0; i < code->S.size(); i++) {
            bool has_x = !code->S[i].x_bits().zero();
            bool has_z = !code->S[i].z_bits().zero();
            if (t == 'X' && has_z && !has_x)
                rows.push_back(i); // Z-type rows detect X errors
            if (t == 'Z' && has_x && !has_z)
                rows.push_back(i);
        }
        return rows;
    };

    for (auto &e : elems) {
        if (e.rejected_at >= 0)
            continue;
        switch (ec.mode) {
        case ECBlock::Mode::none:
            break;
        case ECBlock::Mode::lookup: {
            if (ec.syndromes.size() != code->S.size())
                throw std::logic_error("lookup EC: syndrome count mismatch");
            BitVec syn(code->S.size());
            for (size_t i = 0; i < ec.syndromes.size(); i++)
                syn.set(i, named_flip(e, ec.syndromes[i]));
            // flag-located decode first, when flags touch this block
            bool done = false;
            if (!e.flags.empty()) {
                std::vector<std::pair<uint32_t, char>> local;
                for (auto &[q, t] : e.flags)
                    for (size_t i = 0; i < blk.qubits.size(); i++)
                        if (blk.qubits[i] == q)
                            local.push_back({uint32_t(i), t});
                auto try_set = [&](const std::vector<size_t> &idx) {
                    PauliOperator cand(code->n);
                    for (auto ii : idx) {
                        if (local[ii].second != 'Z')
                            cand.set_x(local[ii].first, true);
                        if (local[ii].second != 'X')
                            cand.set_z(local[ii].first, true);
                    }
                    if (code->syndrome(cand) == syn) {
                        e.frame.apply_fault(embed(cand));
                        done = true;
                    }
                };
                for (size_t a = 0; a < local.size() && !done; a++)
                    try_set({a});
                for (size_t a = 0; a < local.size() && !done; a++)
                    for (size_t b = a + 1; b < local.size() && !done; b++)
                        try_set({a, b});
            }
            if (!done)
                e.frame.apply_fault(embed(block_table(ec.block_id).recover(syn)));
            break;
        }
        case ECBlock::Mode::lookup_x:
        case ECBlock::Mode::lookup_z: {
            char t = (ec.mode == ECBlock::Mode::lookup_x) ? 'X' : 'Z';
            auto rows = rows_of_type(t);
            if (ec.syndromes.size() != rows.size())
                throw std::logic_error("partial EC: syndrome count mismatch");
            std::vector<bool> want(rows.size());
            for (size_t i = 0; i < rows.size(); i++)
                want[i] = named_flip(e, ec.syndromes[i]);
            // BFS over single-type errors up to weight 2
            auto match = [&](const PauliOperator &cand) {
                for (size_t i = 0; i < rows.size(); i++)
                    if (!code->S[rows[i]].commutes_with(cand) != want[i])
                        return false;
                return true;
            };
            PauliOperator found(code->n);
            bool ok = match(found);
            for (size_t a = 0; a < code->n && !ok; a++) {
                PauliOperator cand(code->n);
                if (t == 'X')
                    cand.set_x(a, true);
                else
                    cand.set_z(a, true);
                if (match(cand)) {
                    found = cand;
                    ok = true;
                }
            }
            for (size_t a = 0; a < code->n && !ok; a++)
                for (size_t b = a + 1; b < code->n && !ok; b++) {
                    PauliOperator cand(code->n);
                    if (t == 'X') {
                        cand.set_x(a, true);
                        cand.set_x(b, true);
                    } else {
                        cand.set_z(a, true);
                        cand.set_z(b, true);
                    }
                    if (match(cand)) {
                        found = cand;
                        ok = true;
                    }
                }
            if (ok)
                e.frame.apply_fault(embed(found));
            break;
        }
        case ECBlock::Mode::record_bfs: {
            std::vector<bool> rec;
            for (auto &p : ec.syndromes)
                rec.push_back(named_flip(e, p));
            for (auto &p : ec.records)
                rec.push_back(named_flip(e, p));
            auto it = ec_tables_[ec_index].find(flip_key(rec));
            if (it != ec_tables_[ec_index].end())
                e.frame.apply_fault(it->second);
            break;
        }
        }
        // declarative hooks owned by this EC
        for (auto &r : c_->recovers) {
            if (r.ec_index != int(ec_index))
                continue;
            bool fire = true;
            for (auto &[p, b] : r.when)
                if (named_flip(e, p) != b)
                    fire = false;
            if (fire)
                apply_frame_op(e, r.op);
        }
        for (auto &r : c_->notifies) {
            if (r.ec_index != int(ec_index))
                continue;
            bool fire = true;
            for (auto &[p, b] : r.when)
                if (named_flip(e, p) != b)
                    fire = false;
            if (fire)
                for (auto q : r.qubits) {
                    bool dup = false;
                    for (auto &[fq, ft] : e.flags)
                        if (fq == q && ft == r.type)
                            dup = true;
                    if (!dup)
                        e.flags.push_back({q, r.type});
                }
        }
    }
}

SimResult Simulator::simulate_pattern(const FaultPattern &f) const {
    for (size_t i = 1; i < f.faults.size(); i++)
        if (f.faults[i].loc <= f.faults[i - 1].loc)
            throw std::invalid_argument("fault pattern locations must increase");
    for (auto &ft : f.faults) {
        if (ft.loc >= c_->locations.size())
            throw std::invalid_argument("fault location out of range");
        if (int(ft.op.n()) != op_arity(c_->locations[ft.loc].kind))
            throw std::invalid_argument("fault support mismatch");
        if (ft.op.identity_bits())
            throw std::invalid_argument("fault must be a nontrivial Pauli");
    }

    bool pessimistic_cz = c_->has_flag("pessimistic-cz");
    bool pessimistic_flags = c_->has_flag("pessimistic-flags");

    Element init;
    init.frame = HybridError(c_->num_qubits);
    init.flips.assign(size_t(c_->num_meas), false);
    init.adaptive_fired.assign(c_->adaptives.size(), 2);
    std::vector<Element> elems{init};
    std::vector<Element> finished; // rejected elements parked here

    size_t fi = 0; // next fault
    for (size_t i = 0; i <= c_->locations.size(); i++) {
        // events anchored at index i
        for (size_t e = 0; e < c_->ecs.size(); e++)
            if (c_->ecs[e].last_loc == i && c_->ecs[e].first_loc < c_->ecs[e].last_loc)
                decode_ec(elems, e);
        for (auto &v : c_->verifications) {
            if (v.last_loc != i || v.first_loc == v.last_loc)
                continue;
            for (auto &e : elems) {
                if (e.rejected_at >= 0)
                    continue;
                for (auto &p : v.accept_zero)
                    if (named_flip(e, p)) {
                        e.rejected_at = int(&v - &c_->verifications[0]);
                        break;
                    }
            }
        }
        for (auto &d : c_->conditionals)
            if (d.pos == i)
                for (auto &e : elems)
                    if (e.rejected_at < 0 && named_flip(e, d.parity))
                        apply_frame_op(e, d.op);
        // park rejected elements
        {
            std::vector<Element> live;
            for (auto &e : elems)
                if (e.rejected_at >= 0)
                    finished.push_back(std::move(e));
                else
                    live.push_back(std::move(e));
            elems = std::move(live);
        }
        if (i == c_->locations.size())
            break;

        const Location &l = c_->locations[i];
        bool has_fault = fi < f.faults.size() && f.faults[fi].loc == i;
        const PauliOperator *fault_op = has_fault ? &f.faults[fi].op : nullptr;
        if (has_fault)
            fi++;

        bool in_mid_ec = false;
        if (l.ec_id >= 0 && c_->ecs[size_t(l.ec_id)].role == ECBlock::Role::mid)
            in_mid_ec = true;

        std::vector<Element> next;
        for (auto &e0 : elems) {
            Element e = std::move(e0);
            // adaptive gating
            if (l.adaptive_id >= 0) {
                auto &a = c_->adaptives[size_t(l.adaptive_id)];
                if (e.adaptive_fired[size_t(l.adaptive_id)] == 2)
                    e.adaptive_fired[size_t(l.adaptive_id)] =
                        named_flip(e, a.trigger) ? 1 : 0;
                if (e.adaptive_fired[size_t(l.adaptive_id)] == 0) {
                    next.push_back(std::move(e)); // block not executed
                    continue;
                }
            }
            if (op_is_meas(l.kind)) {
                if (fault_op)
                    inject_fault(e, l, *fault_op);
                uint32_t q = l.qubits[0];
                auto subs = expand_at(e, q);
                bool factor_here = subs.size() > 1;
                for (auto &s : subs) {
                    bool flip = (l.kind == OpKind::MeasX) ? s.frame.pauli.z(q)
                                                          : s.frame.pauli.x(q);
                    // pessimistic rule: a CZ leg observed at an intermediate EC
                    if (pessimistic_cz && in_mid_ec && factor_here && flip &&
                        !e.frame.pauli.z(q))
                        s.forced_fail = true;
                    s.flips[size_t(l.meas_index)] = flip;
                    s.frame.pauli.set_x(q, false);
                    s.frame.pauli.set_z(q, false);
                    // parity completions at this measurement
                    for (auto pi : complete_at_[size_t(l.meas_index)]) {
                        auto it = partner_of_.find(pi);
                        if (it == partner_of_.end())
                            continue;
                        if (parity_flip(s, c_->parities[pi]))
                            apply_frame_op(s, it->second->op);
                    }
                    next.push_back(std::move(s));
                }
            } else {
                conj_location(e, l);
                if (fault_op)
                    inject_fault(e, l, *fault_op);
                next.push_back(std::move(e));
            }
        }
        elems = std::move(next);

        // cheap exact-duplicate compaction to keep the element count down
        if (elems.size() > 64) {
            std::map<std::string, size_t> seen;
            std::vector<Element> compact;
            for (auto &e : elems) {
                std::string key = flip_key(e.flips) + '|' + e.frame.pauli.str() + '|';
                for (auto &fc : e.frame.cz_factors)
                    key += std::to_string(fc.first) + ',' + std::to_string(fc.second) + ';';
                key += char('0' + e.forced_fail);
                for (auto c : e.adaptive_fired)
                    key += char('0' + c);
                for (auto &[q, t] : e.flags)
                    key += std::to_string(q) + t;
                auto it = seen.find(key);
                if (it == seen.end()) {
                    seen.emplace(key, compact.size());
                    compact.push_back(std::move(e));
                } else {
                    compact[it->second].amp = compact[it->second].amp + e.amp;
                }
            }
            elems.clear();
            for (auto &e : compact)
                if (!e.amp.zero())
                    elems.push_back(std::move(e));
        }
    }

    for (auto &e : elems)
        finished.push_back(std::move(e));

    // pessimistic flag-count rule
    if (pessimistic_flags)
        for (auto &e : finished)
            if (e.rejected_at < 0 && e.flags.size() > 2)
                e.forced_fail = true;

    // Final coherent merge and classification. Terms merge when they share all
    // declared parity flips (the classical record available to any decoder)
    // and their residuals agree modulo the code-state stabilizer groups.
    struct Bucket {
        PauliOperator rep;
        Dyadic amp;
        bool rejected;
        bool forced;
    };
    std::map<std::string, Bucket> buckets;

    auto record_string = [&](const Element &e) {
        std::string s;
        for (auto &p : c_->parities)
            s += parity_flip(e, p) ? '1' : '0';
        for (auto c : e.adaptive_fired)
            s += char('a' + c);
        for (auto &[q, t] : e.flags)
            s += std::to_string(q) + t;
        s += '|';
        s += (e.rejected_at >= 0) ? "r" + std::to_string(e.rejected_at) : "l";
        return s;
    };

    for (auto &e : finished) {
        std::string rs = record_string(e);
        // expand leftover CZ factors completely
        PauliSumError sum = breakdown(e.frame);
        for (auto &t : sum.terms) {
            Dyadic amp = t.amp * e.amp;
            PauliOperator canon = final_group_->reduce(t.op);
            std::string key = rs + '|' + canon.x_bits().str() + canon.z_bits().str() +
                              char('0' + e.forced_fail);
            auto it = buckets.find(key);
            if (it == buckets.end()) {
                buckets.emplace(key, Bucket{canon, amp, e.rejected_at >= 0,
                                            bool(e.forced_fail)});
            } else {
                int diff = (canon.phase() - it->second.rep.phase()) & 3;
                if (diff == 0)
                    it->second.amp = it->second.amp + amp;
                else if (diff == 2)
                    it->second.amp = it->second.amp + (-amp);
                else
                    throw std::logic_error("classify: imaginary relative phase");
            }
        }
    }

    SimResult res;
    Rational succ = 0, fail = 0, rej = 0;
    for (auto &[k, b] : buckets) {
        if (b.amp.zero())
            continue;
        Rational w = b.amp.square();
        if (b.rejected) {
            rej += w;
            continue;
        }
        if (b.forced) {
            fail += w;
            continue;
        }
        // ideal decode per block, then residual classification
        bool logical = false;
        for (size_t bi = 0; bi < c_->blocks.size() && !logical; bi++) {
            auto &blk = c_->blocks[bi];
            const StabilizerCode *code = block_codes_[bi];
            PauliOperator local(code->n);
            for (size_t qi = 0; qi < blk.qubits.size(); qi++) {
                local.set_x(qi, b.rep.x(blk.qubits[qi]));
                local.set_z(qi, b.rep.z(blk.qubits[qi]));
            }
            BitVec syn = code->syndrome(local);
            PauliOperator rec = tables_[bi]->recover(syn);
            PauliOperator resid = local * rec;
            if (code->residual_class(resid) == StabilizerCode::Residual::logical)
                logical = true;
        }
        (logical ? fail : succ) += w;
    }
    if (succ != 0)
        res.outcomes.push_back({OutcomeClass::succ_acc, succ});
    if (fail != 0)
        res.outcomes.push_back({OutcomeClass::fail_acc, fail});
    if (rej != 0)
        res.outcomes.push_back({OutcomeClass::reject, rej});
    return res;
}

} // namespace exrec
