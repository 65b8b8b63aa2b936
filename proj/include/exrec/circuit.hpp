#pragma once

#include "stabilizer_code.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace exrec {

enum class OpKind { Prep0, PrepPlus, H, S, X, Y, Z, CNOT, CZ, CCZ, MeasX, MeasZ };

inline int op_arity(OpKind k) {
    switch (k) {
    case OpKind::CNOT:
    case OpKind::CZ:
        return 2;
    case OpKind::CCZ:
        return 3;
    default:
        return 1;
    }
}
inline bool op_is_gate(OpKind k) {
    return k != OpKind::Prep0 && k != OpKind::PrepPlus && k != OpKind::MeasX &&
           k != OpKind::MeasZ;
}
inline bool op_is_meas(OpKind k) { return k == OpKind::MeasX || k == OpKind::MeasZ; }
inline bool op_is_prep(OpKind k) { return k == OpKind::Prep0 || k == OpKind::PrepPlus; }

struct Location {
    OpKind kind;
    std::vector<uint32_t> qubits;
    int noise_class;    // = arity for gates, 1 for prep/meas
    int meas_index = -1; // dense index over measurement locations
    int ec_id = -1;
    int verify_id = -1;
    int adaptive_id = -1;
    int piece_id = -1;

    bool operator==(const Location &o) const {
        return kind == o.kind && qubits == o.qubits && noise_class == o.noise_class;
    }
};

struct BlockDef {
    std::string id;
    std::string code_name;
    std::vector<uint32_t> qubits;
    bool operator==(const BlockDef &o) const {
        return id == o.id && code_name == o.code_name && qubits == o.qubits;
    }
};

// Named XOR of measurement outcomes (a deterministic observable of the ideal
// circuit, e.g. a syndrome bit or a CAT parity).
struct ParityDef {
    std::string name;
    std::vector<int> meas; // measurement indices
    bool operator==(const ParityDef &o) const { return name == o.name && meas == o.meas; }
};

// Logical parity of a transversally measured block, classically decoded.
struct LogParityDef {
    std::string name;
    std::string block_id;
    std::vector<int> meas; // one per block qubit, in block order
    bool operator==(const LogParityDef &o) const {
        return name == o.name && block_id == o.block_id && meas == o.meas;
    }
};

// Frame operation used by conditionals, partners and recovery hooks.
struct FrameOp {
    // pauli given as per-qubit letters on explicit qubits; cz as pairs
    std::vector<std::pair<uint32_t, char>> paulis; // (qubit, 'X'|'Y'|'Z')
    std::vector<std::pair<uint32_t, uint32_t>> czs;
    bool operator==(const FrameOp &o) const { return paulis == o.paulis && czs == o.czs; }
    bool empty() const { return paulis.empty() && czs.empty(); }
};

// Collapse partner: when the named parity completes with a flipped value, the
// frame is multiplied by op (re-rooting the reference at the observed branch).
struct PartnerDef {
    std::string parity;
    FrameOp op;
    bool operator==(const PartnerDef &o) const { return parity == o.parity && op == o.op; }
};

// frame <- frame * op whenever the named parity (or logparity) flip is 1;
// fires just before location index pos.
struct ConditionalDef {
    std::string parity;
    FrameOp op;
    size_t pos = 0;
    bool operator==(const ConditionalDef &o) const {
        return parity == o.parity && op == o.op && pos == o.pos;
    }
};

struct VerificationBlock {
    std::string scope;
    std::vector<std::string> accept_zero; // parity names; accept iff all flips zero
    size_t first_loc = 0, last_loc = 0;   // location span covered by the block
    bool operator==(const VerificationBlock &o) const {
        return scope == o.scope && accept_zero == o.accept_zero;
    }
};

struct AdaptiveBlock {
    std::string trigger; // parity name; executes when flip = 1
    size_t first_loc = 0, last_loc = 0;
    // worst-case location counts (g3, g2, g1, prep, meas) for accounting
    std::array<size_t, 5> worst{0, 0, 0, 0, 0};
    bool operator==(const AdaptiveBlock &o) const {
        return trigger == o.trigger && worst == o.worst;
    }
};

struct ECBlock {
    enum class Role { lead, mid, trail };
    enum class Mode { lookup, lookup_x, lookup_z, record_bfs, none };
    Role role = Role::lead;
    Mode mode = Mode::lookup;
    std::string block_id;
    std::vector<std::string> syndromes; // parity names, ordered as code stabilizer rows
    std::vector<std::string> records;   // extra deterministic bits for record_bfs
    size_t first_loc = 0, last_loc = 0;
    bool operator==(const ECBlock &o) const {
        return role == o.role && mode == o.mode && block_id == o.block_id &&
               syndromes == o.syndromes && records == o.records;
    }
};

// Declarative recovery hook: if all listed parity flips match, multiply the
// frame by op at the end of the EC that owns the hook.
struct RecoverRule {
    int ec_index = -1;
    std::vector<std::pair<std::string, bool>> when;
    FrameOp op;
    bool operator==(const RecoverRule &o) const {
        return ec_index == o.ec_index && when == o.when && op == o.op;
    }
};

// Flag rule: when the pattern matches at a mid EC, notify the trailing EC that
// the listed qubits may carry errors of the given type.
struct NotifyRule {
    int ec_index = -1;
    std::vector<std::pair<std::string, bool>> when;
    std::string block_id;
    char type = 'Z';
    std::vector<uint32_t> qubits;
    bool operator==(const NotifyRule &o) const {
        return ec_index == o.ec_index && when == o.when && block_id == o.block_id &&
               type == o.type && qubits == o.qubits;
    }
};

struct CircuitIR {
    std::string name;
    std::vector<std::string> flags; // construction flags, e.g. pessimistic-cz
    std::vector<BlockDef> blocks;
    std::vector<Location> locations;
    std::vector<ParityDef> parities;
    std::vector<LogParityDef> logparities;
    std::vector<PartnerDef> partners;
    std::vector<ConditionalDef> conditionals;
    std::vector<VerificationBlock> verifications;
    std::vector<AdaptiveBlock> adaptives;
    std::vector<ECBlock> ecs;
    std::vector<RecoverRule> recovers;
    std::vector<NotifyRule> notifies;
    std::vector<size_t> piece_starts, piece_ends;
    uint32_t num_qubits = 0;
    int num_meas = 0;

    bool has_flag(const std::string &f) const {
        for (auto &x : flags)
            if (x == f)
                return true;
        return false;
    }

    const BlockDef &block(const std::string &id) const {
        for (auto &b : blocks)
            if (b.id == id)
                return b;
        throw std::invalid_argument("unknown block: " + id);
    }

    const ParityDef *find_parity(const std::string &name) const {
        for (auto &p : parities)
            if (p.name == name)
                return &p;
        return nullptr;
    }
    const LogParityDef *find_logparity(const std::string &name) const {
        for (auto &p : logparities)
            if (p.name == name)
                return &p;
        return nullptr;
    }

    void renumber() {
        num_meas = 0;
        num_qubits = 0;
        for (auto &l : locations) {
            if (op_is_meas(l.kind))
                l.meas_index = num_meas++;
            for (auto q : l.qubits)
                num_qubits = std::max(num_qubits, q + 1);
        }
        for (auto &b : blocks)
            for (auto q : b.qubits)
                num_qubits = std::max(num_qubits, q + 1);
    }

    void validate() const {
        for (auto &l : locations) {
            if (int(l.qubits.size()) != op_arity(l.kind))
                throw std::invalid_argument(name + ": location arity mismatch");
            int expect = op_is_gate(l.kind) ? op_arity(l.kind) : 1;
            if (l.noise_class != expect)
                throw std::invalid_argument(name + ": noise class mismatch");
            for (size_t i = 0; i < l.qubits.size(); i++)
                for (size_t j = i + 1; j < l.qubits.size(); j++)
                    if (l.qubits[i] == l.qubits[j])
                        throw std::invalid_argument(name + ": repeated qubit in location");
        }
        auto check_parity = [&](const std::string &p) {
            if (!find_parity(p) && !find_logparity(p))
                throw std::invalid_argument(name + ": unknown parity " + p);
        };
        for (auto &p : parities)
            for (int m : p.meas)
                if (m < 0 || m >= num_meas)
                    throw std::invalid_argument(name + ": parity references bad measurement");
        for (auto &v : verifications)
            for (auto &p : v.accept_zero)
                check_parity(p);
        for (auto &a : adaptives)
            check_parity(a.trigger);
        for (auto &c : conditionals)
            check_parity(c.parity);
        for (auto &pt : partners)
            check_parity(pt.parity);
        for (auto &e : ecs) {
            (void)block(e.block_id);
            for (auto &p : e.syndromes)
                check_parity(p);
            for (auto &p : e.records)
                check_parity(p);
        }
        // exREC discipline: leading and trailing EC spans nonempty
        bool lead = false, trail = false;
        for (auto &e : ecs) {
            if (e.role == ECBlock::Role::lead)
                lead = true;
            if (e.role == ECBlock::Role::trail)
                trail = true;
        }
        if (!ecs.empty() && (!lead || !trail))
            throw std::invalid_argument(name + ": missing leading or trailing EC span");
    }

    bool operator==(const CircuitIR &o) const {
        auto sorted_parities = [](std::vector<ParityDef> v) {
            std::sort(v.begin(), v.end(),
                      [](const ParityDef &a, const ParityDef &b) { return a.name < b.name; });
            return v;
        };
        return name == o.name && flags == o.flags && blocks == o.blocks &&
               locations == o.locations &&
               sorted_parities(parities) == sorted_parities(o.parities) &&
               logparities == o.logparities && partners == o.partners &&
               conditionals == o.conditionals &&
               verifications == o.verifications && adaptives == o.adaptives &&
               ecs == o.ecs && recovers == o.recovers && notifies == o.notifies &&
               piece_starts == o.piece_starts && piece_ends == o.piece_ends;
    }
};

// 5-vector of component counts: (gates3, gates2, gates1, prep, meas).
struct CountVector {
    std::array<size_t, 5> v{0, 0, 0, 0, 0};
    size_t g3() const { return v[0]; }
    size_t g2() const { return v[1]; }
    size_t g1() const { return v[2]; }
    size_t prep() const { return v[3]; }
    size_t meas() const { return v[4]; }
    // fault-location totals by noise class (prep/meas carry p1)
    std::array<size_t, 3> noise_totals() const {
        return {g1() + prep() + meas(), g2(), g3()};
    }
    CountVector &operator+=(const CountVector &o) {
        for (int i = 0; i < 5; i++)
            v[i] += o.v[i];
        return *this;
    }
    bool operator==(const CountVector &o) const { return v == o.v; }
};

// Exact counts by kind. Adaptive blocks are counted at their declared worst
// case when include_adaptive, and excluded entirely otherwise (the n' mode).
inline CountVector count_components(const CircuitIR &c, bool include_adaptive = true) {
    CountVector out;
    for (size_t i = 0; i < c.locations.size(); i++) {
        auto &l = c.locations[i];
        if (l.adaptive_id >= 0)
            continue; // accounted via declared worst case
        if (op_is_prep(l.kind))
            out.v[3]++;
        else if (op_is_meas(l.kind))
            out.v[4]++;
        else
            out.v[3 - op_arity(l.kind)]++;
    }
    if (include_adaptive)
        for (auto &a : c.adaptives)
            for (int i = 0; i < 5; i++)
                out.v[i] += a.worst[i];
    return out;
}

} // namespace exrec
