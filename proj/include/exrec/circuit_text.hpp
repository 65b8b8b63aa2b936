#pragma once

#include "circuit.hpp"

#include <sstream>
#include <stdexcept>

namespace exrec {

// Line-oriented circuit DSL. One statement per line, tokens split on spaces.
// Measurement indices are implicit (order of appearance); `@name` after a
// measurement both names a single-bit parity for it and keeps files readable.
//
//   circuit <name>
//   flag <word>
//   block <id> <code> <q...>
//   prep0|prep+ <q>            h|s|x|y|z <q>
//   cnot|cz <a> <b>            ccz <a> <b> <c>
//   measx|measz <q> [@p]
//   parity <name> = <p...>           # XOR of named single-bit parities
//   logparity <name> <block> = <p...>
//   partner <parity> <ops>
//   conditional <parity> <ops>
//   begin piece | end piece
//   begin verify <scope> | accept-zero <p...> | end verify
//   begin adaptive <trigger> worst <g3> <g2> <g1> <np> <nm> | end adaptive
//   begin ec <lead|mid|trail> <block> <mode> | syndrome <p...> | record <p...> | end ec
//   recover ec <idx> when <p>=<0|1> [...] apply <ops>
//   notify ec <idx> when <p>=<0|1> [...] flag <block> <X|Z> <q...>
//
// <ops> is a ';'-separated list of `x q`, `y q`, `z q`, `cz a b`.

class ParseError : public std::runtime_error {
  public:
    ParseError(size_t line, const std::string &msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    size_t line;
};

namespace dsl_detail {

inline std::vector<std::string> tokens(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#')
            break;
        out.push_back(t);
    }
    return out;
}

inline uint32_t qubit_of(const std::string &t, size_t ln) {
    if (t.empty() || t[0] != 'q')
        throw ParseError(ln, "expected qubit id, got '" + t + "'");
    for (size_t i = 1; i < t.size(); i++)
        if (!isdigit(t[i]))
            throw ParseError(ln, "bad qubit id '" + t + "'");
    return uint32_t(std::stoul(t.substr(1)));
}

inline FrameOp parse_ops(const std::vector<std::string> &tk, size_t from, size_t ln) {
    FrameOp op;
    size_t i = from;
    while (i < tk.size()) {
        std::string g = tk[i];
        if (g == ";") {
            i++;
            continue;
        }
        if (g == "x" || g == "y" || g == "z") {
            if (i + 1 >= tk.size())
                throw ParseError(ln, "op missing qubit");
            op.paulis.push_back({qubit_of(tk[i + 1], ln), char(toupper(g[0]))});
            i += 2;
        } else if (g == "cz") {
            if (i + 2 >= tk.size())
                throw ParseError(ln, "cz missing qubits");
            op.czs.push_back({qubit_of(tk[i + 1], ln), qubit_of(tk[i + 2], ln)});
            i += 3;
        } else {
            throw ParseError(ln, "bad frame op '" + g + "'");
        }
    }
    return op;
}

inline std::string ops_str(const FrameOp &op) {
    std::string s;
    bool first = true;
    for (auto &[q, t] : op.paulis) {
        if (!first)
            s += " ; ";
        s += char(tolower(t));
        s += " q" + std::to_string(q);
        first = false;
    }
    for (auto &[a, b] : op.czs) {
        if (!first)
            s += " ; ";
        s += "cz q" + std::to_string(a) + " q" + std::to_string(b);
        first = false;
    }
    return s;
}

} // namespace dsl_detail

inline CircuitIR parse_circuit(const std::string &text) {
    using namespace dsl_detail;
    CircuitIR c;
    std::istringstream is(text);
    std::string line;
    size_t ln = 0;
    int cur_verify = -1, cur_adaptive = -1, cur_ec = -1, cur_piece = -1;
    int meas_count = 0;

    auto op_of = [](const std::string &s) -> std::optional<OpKind> {
        if (s == "prep0")
            return OpKind::Prep0;
        if (s == "prep+")
            return OpKind::PrepPlus;
        if (s == "h")
            return OpKind::H;
        if (s == "s")
            return OpKind::S;
        if (s == "x")
            return OpKind::X;
        if (s == "y")
            return OpKind::Y;
        if (s == "z")
            return OpKind::Z;
        if (s == "cnot")
            return OpKind::CNOT;
        if (s == "cz")
            return OpKind::CZ;
        if (s == "ccz")
            return OpKind::CCZ;
        if (s == "measx")
            return OpKind::MeasX;
        if (s == "measz")
            return OpKind::MeasZ;
        return std::nullopt;
    };

    while (std::getline(is, line)) {
        ln++;
        auto tk = tokens(line);
        if (tk.empty())
            continue;
        const std::string &head = tk[0];

        if (head == "circuit") {
            if (tk.size() != 2)
                throw ParseError(ln, "circuit needs a name");
            c.name = tk[1];
        } else if (head == "flag") {
            if (tk.size() != 2)
                throw ParseError(ln, "flag needs a word");
            c.flags.push_back(tk[1]);
        } else if (head == "block") {
            if (tk.size() < 4)
                throw ParseError(ln, "block <id> <code> <q...>");
            BlockDef b;
            b.id = tk[1];
            b.code_name = tk[2];
            for (size_t i = 3; i < tk.size(); i++)
                b.qubits.push_back(qubit_of(tk[i], ln));
            c.blocks.push_back(std::move(b));
        } else if (auto k = op_of(head)) {
            Location l;
            l.kind = *k;
            int ar = op_arity(*k);
            size_t expect = 1 + size_t(ar);
            bool named = false;
            if (op_is_meas(*k) && tk.size() == expect + 1 && tk.back()[0] == '@')
                named = true;
            if (tk.size() != expect && !named)
                throw ParseError(ln, head + " expects " + std::to_string(ar) + " qubits");
            for (int i = 0; i < ar; i++)
                l.qubits.push_back(qubit_of(tk[1 + i], ln));
            l.noise_class = op_is_gate(*k) ? ar : 1;
            l.verify_id = cur_verify;
            l.adaptive_id = cur_adaptive;
            l.ec_id = cur_ec;
            l.piece_id = cur_piece;
            if (op_is_meas(*k)) {
                l.meas_index = meas_count++;
                if (named)
                    c.parities.push_back({tk.back().substr(1), {l.meas_index}});
            }
            c.locations.push_back(std::move(l));
        } else if (head == "parity") {
            if (tk.size() < 4 || tk[2] != "=")
                throw ParseError(ln, "parity <name> = <p...>");
            ParityDef p;
            p.name = tk[1];
            for (size_t i = 3; i < tk.size(); i++) {
                auto *q = [&]() -> const ParityDef * {
                    for (auto &x : c.parities)
                        if (x.name == tk[i])
                            return &x;
                    return nullptr;
                }();
                if (!q)
                    throw ParseError(ln, "unknown parity '" + tk[i] + "'");
                for (int m : q->meas)
                    p.meas.push_back(m);
            }
            // XOR semantics: repeated indices cancel
            std::sort(p.meas.begin(), p.meas.end());
            std::vector<int> dedup;
            for (size_t i = 0; i < p.meas.size(); i++) {
                if (i + 1 < p.meas.size() && p.meas[i] == p.meas[i + 1]) {
                    i++;
                    continue;
                }
                dedup.push_back(p.meas[i]);
            }
            p.meas = dedup;
            c.parities.push_back(std::move(p));
        } else if (head == "logparity") {
            if (tk.size() < 5 || tk[3] != "=")
                throw ParseError(ln, "logparity <name> <block> = <p...>");
            LogParityDef p;
            p.name = tk[1];
            p.block_id = tk[2];
            for (size_t i = 4; i < tk.size(); i++) {
                const ParityDef *q = nullptr;
                for (auto &x : c.parities)
                    if (x.name == tk[i])
                        q = &x;
                if (!q || q->meas.size() != 1)
                    throw ParseError(ln, "logparity needs single-bit parities");
                p.meas.push_back(q->meas[0]);
            }
            c.logparities.push_back(std::move(p));
        } else if (head == "partner") {
            if (tk.size() < 3)
                throw ParseError(ln, "partner <parity> <ops>");
            c.partners.push_back({tk[1], parse_ops(tk, 2, ln)});
        } else if (head == "conditional") {
            if (tk.size() < 3)
                throw ParseError(ln, "conditional <parity> <ops>");
            ConditionalDef d;
            d.parity = tk[1];
            d.op = parse_ops(tk, 2, ln);
            d.pos = c.locations.size();
            c.conditionals.push_back(std::move(d));
        } else if (head == "begin") {
            if (tk.size() < 2)
                throw ParseError(ln, "begin what?");
            if (tk[1] == "piece") {
                if (cur_piece >= 0)
                    throw ParseError(ln, "nested piece");
                cur_piece = int(c.piece_starts.size());
                c.piece_starts.push_back(c.locations.size());
            } else if (tk[1] == "verify") {
                if (cur_verify >= 0)
                    throw ParseError(ln, "nested verify");
                VerificationBlock v;
                v.scope = tk.size() > 2 ? tk[2] : "";
                v.first_loc = c.locations.size();
                cur_verify = int(c.verifications.size());
                c.verifications.push_back(std::move(v));
            } else if (tk[1] == "adaptive") {
                if (cur_adaptive >= 0)
                    throw ParseError(ln, "nested adaptive");
                if (tk.size() != 8 || tk[3] != "worst")
                    throw ParseError(ln, "begin adaptive <trigger> worst g3 g2 g1 np nm");
                AdaptiveBlock a;
                a.trigger = tk[2];
                for (int i = 0; i < 5; i++)
                    a.worst[i] = std::stoul(tk[4 + i]);
                a.first_loc = c.locations.size();
                cur_adaptive = int(c.adaptives.size());
                c.adaptives.push_back(std::move(a));
            } else if (tk[1] == "ec") {
                if (cur_ec >= 0)
                    throw ParseError(ln, "nested ec");
                if (tk.size() != 5)
                    throw ParseError(ln, "begin ec <role> <block> <mode>");
                ECBlock e;
                if (tk[2] == "lead")
                    e.role = ECBlock::Role::lead;
                else if (tk[2] == "mid")
                    e.role = ECBlock::Role::mid;
                else if (tk[2] == "trail")
                    e.role = ECBlock::Role::trail;
                else
                    throw ParseError(ln, "bad ec role");
                e.block_id = tk[3];
                if (tk[4] == "lookup")
                    e.mode = ECBlock::Mode::lookup;
                else if (tk[4] == "lookup-x")
                    e.mode = ECBlock::Mode::lookup_x;
                else if (tk[4] == "lookup-z")
                    e.mode = ECBlock::Mode::lookup_z;
                else if (tk[4] == "record-bfs")
                    e.mode = ECBlock::Mode::record_bfs;
                else if (tk[4] == "none")
                    e.mode = ECBlock::Mode::none;
                else
                    throw ParseError(ln, "bad ec mode");
                e.first_loc = c.locations.size();
                cur_ec = int(c.ecs.size());
                c.ecs.push_back(std::move(e));
            } else {
                throw ParseError(ln, "unknown block kind '" + tk[1] + "'");
            }
        } else if (head == "end") {
            if (tk.size() != 2)
                throw ParseError(ln, "end what?");
            if (tk[1] == "piece") {
                if (cur_piece < 0)
                    throw ParseError(ln, "end piece without begin");
                c.piece_ends.push_back(c.locations.size());
                cur_piece = -1;
            } else if (tk[1] == "verify") {
                if (cur_verify < 0)
                    throw ParseError(ln, "end verify without begin");
                c.verifications[cur_verify].last_loc = c.locations.size();
                cur_verify = -1;
            } else if (tk[1] == "adaptive") {
                if (cur_adaptive < 0)
                    throw ParseError(ln, "end adaptive without begin");
                c.adaptives[cur_adaptive].last_loc = c.locations.size();
                cur_adaptive = -1;
            } else if (tk[1] == "ec") {
                if (cur_ec < 0)
                    throw ParseError(ln, "end ec without begin");
                c.ecs[cur_ec].last_loc = c.locations.size();
                cur_ec = -1;
            } else {
                throw ParseError(ln, "unknown block kind '" + tk[1] + "'");
            }
        } else if (head == "accept-zero") {
            if (cur_verify < 0)
                throw ParseError(ln, "accept-zero outside verify");
            for (size_t i = 1; i < tk.size(); i++)
                c.verifications[cur_verify].accept_zero.push_back(tk[i]);
        } else if (head == "syndrome") {
            if (cur_ec < 0)
                throw ParseError(ln, "syndrome outside ec");
            for (size_t i = 1; i < tk.size(); i++)
                c.ecs[cur_ec].syndromes.push_back(tk[i]);
        } else if (head == "record") {
            if (cur_ec < 0)
                throw ParseError(ln, "record outside ec");
            for (size_t i = 1; i < tk.size(); i++)
                c.ecs[cur_ec].records.push_back(tk[i]);
        } else if (head == "recover" || head == "notify") {
            if (tk.size() < 4 || tk[1] != "ec")
                throw ParseError(ln, head + " ec <idx> when ...");
            size_t i = 3;
            if (tk[i] != "when")
                throw ParseError(ln, "expected 'when'");
            i++;
            std::vector<std::pair<std::string, bool>> when;
            while (i < tk.size() && tk[i] != "apply" && tk[i] != "flag") {
                auto eq = tk[i].find('=');
                if (eq == std::string::npos)
                    throw ParseError(ln, "condition must be parity=bit");
                when.push_back({tk[i].substr(0, eq), tk[i].substr(eq + 1) == "1"});
                i++;
            }
            if (head == "recover") {
                if (i >= tk.size() || tk[i] != "apply")
                    throw ParseError(ln, "recover needs apply");
                RecoverRule r;
                r.ec_index = std::stoi(tk[2]);
                r.when = std::move(when);
                r.op = parse_ops(tk, i + 1, ln);
                c.recovers.push_back(std::move(r));
            } else {
                if (i + 2 >= tk.size() || tk[i] != "flag")
                    throw ParseError(ln, "notify needs flag <block> <type> <q...>");
                NotifyRule r;
                r.ec_index = std::stoi(tk[2]);
                r.when = std::move(when);
                r.block_id = tk[i + 1];
                r.type = char(toupper(tk[i + 2][0]));
                for (size_t j = i + 3; j < tk.size(); j++)
                    r.qubits.push_back(qubit_of(tk[j], ln));
                c.notifies.push_back(std::move(r));
            }
        } else {
            throw ParseError(ln, "unknown statement '" + head + "'");
        }
    }
    if (cur_verify >= 0 || cur_adaptive >= 0 || cur_ec >= 0 || cur_piece >= 0)
        throw ParseError(ln, "unterminated block");
    c.renumber();
    c.validate();
    return c;
}

inline std::string serialize_circuit(const CircuitIR &c) {
    using namespace dsl_detail;
    std::ostringstream os;
    os << "circuit " << c.name << "\n";
    for (auto &f : c.flags)
        os << "flag " << f << "\n";
    for (auto &b : c.blocks) {
        os << "block " << b.id << " " << b.code_name;
        for (auto q : b.qubits)
            os << " q" << q;
        os << "\n";
    }
    // single-bit parities attached to measurements are emitted inline
    std::map<int, std::string> meas_names;
    std::vector<const ParityDef *> compound;
    for (auto &p : c.parities) {
        if (p.meas.size() == 1 && !meas_names.count(p.meas[0]))
            meas_names[p.meas[0]] = p.name;
        else
            compound.push_back(&p);
    }
    auto opname = [](OpKind k) {
        switch (k) {
        case OpKind::Prep0:
            return "prep0";
        case OpKind::PrepPlus:
            return "prep+";
        case OpKind::H:
            return "h";
        case OpKind::S:
            return "s";
        case OpKind::X:
            return "x";
        case OpKind::Y:
            return "y";
        case OpKind::Z:
            return "z";
        case OpKind::CNOT:
            return "cnot";
        case OpKind::CZ:
            return "cz";
        case OpKind::CCZ:
            return "ccz";
        case OpKind::MeasX:
            return "measx";
        case OpKind::MeasZ:
            return "measz";
        }
        return "?";
    };

    // emit locations with structural markers at the right spots
    struct Marker {
        size_t pos;
        int order; // ends before begins at same pos
        std::string text;
    };
    std::vector<Marker> markers;
    for (size_t i = 0; i < c.piece_starts.size(); i++) {
        markers.push_back({c.piece_starts[i], 1, "begin piece"});
        markers.push_back({c.piece_ends[i], 0, "end piece"});
    }
    for (auto &v : c.verifications) {
        std::string acc = "accept-zero";
        for (auto &p : v.accept_zero)
            acc += " " + p;
        markers.push_back({v.first_loc, 1, "begin verify " + v.scope});
        markers.push_back({v.last_loc, -1, acc});
        markers.push_back({v.last_loc, 0, "end verify"});
    }
    for (auto &a : c.adaptives) {
        std::string b = "begin adaptive " + a.trigger + " worst";
        for (auto w : a.worst)
            b += " " + std::to_string(w);
        markers.push_back({a.first_loc, 1, b});
        markers.push_back({a.last_loc, 0, "end adaptive"});
    }
    for (auto &e : c.ecs) {
        std::string role = e.role == ECBlock::Role::lead  ? "lead"
                           : e.role == ECBlock::Role::mid ? "mid"
                                                          : "trail";
        std::string mode = e.mode == ECBlock::Mode::lookup     ? "lookup"
                           : e.mode == ECBlock::Mode::lookup_x ? "lookup-x"
                           : e.mode == ECBlock::Mode::lookup_z ? "lookup-z"
                           : e.mode == ECBlock::Mode::record_bfs ? "record-bfs"
                                                                 : "none";
        markers.push_back({e.first_loc, 1, "begin ec " + role + " " + e.block_id + " " + mode});
        if (!e.syndromes.empty()) {
            std::string s = "syndrome";
            for (auto &p : e.syndromes)
                s += " " + p;
            markers.push_back({e.last_loc, -2, s});
        }
        if (!e.records.empty()) {
            std::string s = "record";
            for (auto &p : e.records)
                s += " " + p;
            markers.push_back({e.last_loc, -1, s});
        }
        markers.push_back({e.last_loc, 0, "end ec"});
    }
    for (auto &d : c.conditionals)
        markers.push_back({d.pos, 2, "conditional " + d.parity + " " + ops_str(d.op)});
    std::stable_sort(markers.begin(), markers.end(), [](const Marker &a, const Marker &b) {
        if (a.pos != b.pos)
            return a.pos < b.pos;
        return a.order < b.order;
    });

    size_t mi = 0;
    for (size_t i = 0; i <= c.locations.size(); i++) {
        while (mi < markers.size() && markers[mi].pos == i) {
            os << markers[mi].text << "\n";
            mi++;
        }
        if (i == c.locations.size())
            break;
        auto &l = c.locations[i];
        os << opname(l.kind);
        for (auto q : l.qubits)
            os << " q" << q;
        if (op_is_meas(l.kind) && meas_names.count(l.meas_index))
            os << " @" << meas_names[l.meas_index];
        os << "\n";
    }
    // compound parities, logparities, partners after the body (they only
    // reference earlier names)
    for (auto *p : compound) {
        os << "parity " << p->name << " =";
        for (int m : p->meas) {
            if (!meas_names.count(m))
                throw std::logic_error("serialize: compound parity over unnamed measurement");
            os << " " << meas_names[m];
        }
        os << "\n";
    }
    for (auto &p : c.logparities) {
        os << "logparity " << p.name << " " << p.block_id << " =";
        for (int m : p.meas) {
            if (!meas_names.count(m))
                throw std::logic_error("serialize: logparity over unnamed measurement");
            os << " " << meas_names.at(m);
        }
        os << "\n";
    }
    for (auto &p : c.partners)
        os << "partner " << p.parity << " " << ops_str(p.op) << "\n";
    for (auto &r : c.recovers) {
        os << "recover ec " << r.ec_index << " when";
        for (auto &[p, b] : r.when)
            os << " " << p << "=" << (b ? 1 : 0);
        os << " apply " << ops_str(r.op) << "\n";
    }
    for (auto &r : c.notifies) {
        os << "notify ec " << r.ec_index << " when";
        for (auto &[p, b] : r.when)
            os << " " << p << "=" << (b ? 1 : 0);
        os << " flag " << r.block_id << " " << r.type;
        for (auto q : r.qubits)
            os << " q" << q;
        os << "\n";
    }
    return os.str();
}

} // namespace exrec
