#pragma once

#include "fault_sim.hpp"

#include <random>

namespace exrec {

// Counted quantities of the up-to-two-fault expansion. Entries are exact
// rationals; F2/S2 are upper triangular over noise classes (1-indexed r <= s).
struct CoefficientTable {
    std::array<long, 3> n{0, 0, 0};       // locations by noise class r = 1..3
    std::array<long, 3> n_prime{0, 0, 0}; // excluding adaptive measurements
    std::array<Rational, 3> S1{};         // single-fault success coefficients
    std::array<Rational, 3> F1{};         // single-fault failures (0 when FT)
    Rational F2[3][3]{};                  // [r-1][s-1], r <= s
    Rational S2[3][3]{};

    Rational A1(int r) const { return Rational(n[r - 1]) - S1[r - 1] - F1[r - 1]; }
    Rational A2(int r, int s) const {
        Rational pairs = (r == s) ? Rational(long(n[r - 1]) * (n[r - 1] - 1), 2)
                                  : Rational(long(n[r - 1]) * long(n[s - 1]));
        return pairs - F2[r - 1][s - 1] - S2[r - 1][s - 1];
    }

    void check_invariants() const {
        for (int r = 1; r <= 3; r++) {
            if (A1(r) < 0)
                throw std::logic_error("negative A1");
            for (int s = r; s <= 3; s++)
                if (A2(r, s) < 0)
                    throw std::logic_error("negative A2");
        }
    }
};

enum class TableMode { standard, five_qubit };

struct EnumerateOptions {
    TableMode mode = TableMode::standard;
    int workers = 0; // 0 = hardware choice / EXREC_WORKERS
    bool pairs = true;
};

CoefficientTable enumerate_faults(const Simulator &sim, const EnumerateOptions &opt = {});

// Empty iff every single-fault pattern yields only success or reject outcomes.
std::vector<FaultPattern> verify_fault_tolerance(const Simulator &sim, int workers = 0);

struct NoiseParams; // analysis.hpp

struct MonteCarloResult {
    double fail_rate = 0, reject_rate = 0;
    double fail_lo = 0, fail_hi = 0; // Wilson 95% interval
    double reject_lo = 0, reject_hi = 0;
    uint64_t trials = 0, fails = 0, rejects = 0;
};

MonteCarloResult monte_carlo_oracle(const Simulator &sim, const std::array<double, 3> &p,
                                    uint64_t trials, uint64_t seed);

int resolve_workers(int requested);

} // namespace exrec
