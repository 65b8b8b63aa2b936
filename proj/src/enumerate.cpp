#include "exrec/enumerate.hpp"

#include <cstdlib>
#include <thread>

namespace exrec {

int resolve_workers(int requested) {
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("EXREC_WORKERS"))
        if (int v = atoi(env); v > 0)
            return v;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

namespace {

struct LocInfo {
    size_t loc;
    int r; // noise class
    bool adaptive;
};

std::vector<LocInfo> fault_locations(const CircuitIR &c) {
    std::vector<LocInfo> out;
    for (size_t i = 0; i < c.locations.size(); i++)
        out.push_back({i, c.locations[i].noise_class, c.locations[i].adaptive_id >= 0});
    return out;
}

} // namespace

CoefficientTable enumerate_faults(const Simulator &sim, const EnumerateOptions &opt) {
    const CircuitIR &c = sim.circuit();
    CoefficientTable t;
    auto totals = count_components(c, /*include_adaptive=*/true).noise_totals();
    auto totals_prime = count_components(c, /*include_adaptive=*/false).noise_totals();
    for (int r = 0; r < 3; r++) {
        t.n[r] = long(totals[r]);
        t.n_prime[r] = long(totals_prime[r]);
    }

    auto locs = fault_locations(c);
    bool five_q = opt.mode == TableMode::five_qubit;

    // single faults
    struct SingleJob {
        size_t li;
    };
    int workers = resolve_workers(opt.workers);

    struct Partial {
        std::array<Rational, 3> S1{}, F1{};
        Rational F2[3][3]{}, S2[3][3]{};
    };
    std::vector<Partial> parts(size_t(workers));

    auto run_single = [&](size_t li, Partial &acc) {
        auto &L = locs[li];
        if (five_q && L.adaptive)
            return; // first-order accounting excludes adaptive locations
        auto paulis = sim.location_paulis(L.loc);
        Rational denom = Rational(long(paulis.size()));
        for (auto &p : paulis) {
            FaultPattern f;
            f.faults.push_back({L.loc, p});
            SimResult res = sim.simulate_pattern(f);
            acc.S1[L.r - 1] += res.weight(OutcomeClass::succ_acc) / denom;
            acc.F1[L.r - 1] += res.weight(OutcomeClass::fail_acc) / denom;
        }
    };
    auto run_pair = [&](size_t li, size_t lj, Partial &acc) {
        auto &A = locs[li];
        auto &B = locs[lj];
        int r = std::min(A.r, B.r), s = std::max(A.r, B.r);
        auto pa = sim.location_paulis(A.loc);
        auto pb = sim.location_paulis(B.loc);
        Rational denom = Rational(long(pa.size()) * long(pb.size()));
        for (auto &x : pa)
            for (auto &y : pb) {
                FaultPattern f;
                f.faults.push_back({A.loc, x});
                f.faults.push_back({B.loc, y});
                SimResult res = sim.simulate_pattern(f);
                acc.F2[r - 1][s - 1] += res.weight(OutcomeClass::fail_acc) / denom;
                acc.S2[r - 1][s - 1] += res.weight(OutcomeClass::succ_acc) / denom;
            }
    };

    // deterministic partition of the work: stride over indices
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++)
            pool.emplace_back([&, w]() {
                for (size_t li = size_t(w); li < locs.size(); li += size_t(workers))
                    run_single(li, parts[size_t(w)]);
            });
        for (auto &th : pool)
            th.join();
    }
    if (opt.pairs) {
        std::vector<std::pair<size_t, size_t>> pairs;
        for (size_t i = 0; i < locs.size(); i++)
            for (size_t j = i + 1; j < locs.size(); j++)
                pairs.push_back({i, j});
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++)
            pool.emplace_back([&, w]() {
                for (size_t k = size_t(w); k < pairs.size(); k += size_t(workers))
                    run_pair(pairs[k].first, pairs[k].second, parts[size_t(w)]);
            });
        for (auto &th : pool)
            th.join();
    }
    // associative merge in fixed order
    for (auto &p : parts) {
        for (int r = 0; r < 3; r++) {
            t.S1[r] += p.S1[r];
            t.F1[r] += p.F1[r];
        }
        for (int r = 0; r < 3; r++)
            for (int s = r; s < 3; s++) {
                t.F2[r][s] += p.F2[r][s];
                t.S2[r][s] += p.S2[r][s];
            }
    }
    return t;
}

std::vector<FaultPattern> verify_fault_tolerance(const Simulator &sim, int workers) {
    const CircuitIR &c = sim.circuit();
    auto locs = fault_locations(c);
    int w = resolve_workers(workers);
    std::vector<std::vector<FaultPattern>> found(size_t(w));
    std::vector<std::thread> pool;
    for (int wi = 0; wi < w; wi++)
        pool.emplace_back([&, wi]() {
            for (size_t li = size_t(wi); li < locs.size(); li += size_t(w)) {
                auto paulis = sim.location_paulis(locs[li].loc);
                for (auto &p : paulis) {
                    FaultPattern f;
                    f.faults.push_back({locs[li].loc, p});
                    SimResult res = sim.simulate_pattern(f);
                    if (res.weight(OutcomeClass::fail_acc) != 0)
                        found[size_t(wi)].push_back(f);
                }
            }
        });
    for (auto &th : pool)
        th.join();
    std::vector<FaultPattern> out;
    for (auto &v : found)
        for (auto &f : v)
            out.push_back(f);
    std::sort(out.begin(), out.end(), [](const FaultPattern &a, const FaultPattern &b) {
        if (a.faults[0].loc != b.faults[0].loc)
            return a.faults[0].loc < b.faults[0].loc;
        return a.faults[0].op.str() < b.faults[0].op.str();
    });
    return out;
}

MonteCarloResult monte_carlo_oracle(const Simulator &sim, const std::array<double, 3> &p,
                                    uint64_t trials, uint64_t seed) {
    const CircuitIR &c = sim.circuit();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    MonteCarloResult out;
    out.trials = trials;
    for (uint64_t trial = 0; trial < trials; trial++) {
        FaultPattern f;
        for (size_t i = 0; i < c.locations.size(); i++) {
            int r = c.locations[i].noise_class;
            if (uni(rng) >= p[size_t(r - 1)])
                continue;
            int count = (1 << (2 * r)) - 1;
            int pick = int(uni(rng) * count);
            if (pick >= count)
                pick = count - 1;
            // pick-th nontrivial Pauli in location_paulis order
            PauliOperator op(size_t(r));
            int m = pick + 1;
            for (int q = 0; q < r; q++) {
                int tt = (m >> (2 * q)) & 3;
                if (tt & 1)
                    op.set_x(size_t(q), true);
                if (tt & 2)
                    op.set_z(size_t(q), true);
                if (tt == 3)
                    op.mul_phase(1);
            }
            f.faults.push_back({i, op});
        }
        SimResult res = f.faults.empty() ? SimResult{} : sim.simulate_pattern(f);
        if (f.faults.empty()) {
            continue; // no fault: success
        }
        double u = uni(rng);
        double acc = 0;
        OutcomeClass cls = OutcomeClass::succ_acc;
        for (auto &o : res.outcomes) {
            acc += double(o.weight.convert_to<double>());
            if (u < acc) {
                cls = o.cls;
                break;
            }
        }
        if (cls == OutcomeClass::fail_acc)
            out.fails++;
        else if (cls == OutcomeClass::reject)
            out.rejects++;
    }
    auto wilson = [&](uint64_t k, uint64_t n_tr, double &lo, double &hi) {
        if (n_tr == 0) {
            lo = hi = 0;
            return;
        }
        double z = 1.959963984540054;
        double ph = double(k) / double(n_tr);
        double z2 = z * z;
        double denom = 1 + z2 / double(n_tr);
        double center = ph + z2 / (2.0 * double(n_tr));
        double rad = z * std::sqrt(ph * (1 - ph) / double(n_tr) +
                                   z2 / (4.0 * double(n_tr) * double(n_tr)));
        lo = (center - rad) / denom;
        hi = (center + rad) / denom;
    };
    out.fail_rate = double(out.fails) / double(trials);
    out.reject_rate = double(out.rejects) / double(trials);
    wilson(out.fails, trials, out.fail_lo, out.fail_hi);
    wilson(out.rejects, trials, out.reject_lo, out.reject_hi);
    return out;
}

} // namespace exrec
