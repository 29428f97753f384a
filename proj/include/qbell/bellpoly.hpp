// Closed-form Bell polynomials for the two-qubit CHSH test and the
// four-qubit Dicke-state inequality, plus multi-start derivative-free
// maximization of both.
#pragma once

#include <cstdint>
#include <vector>

#include "qbell/observables.hpp"

namespace qbell {

struct ChshAngles {
    MeasurementSetting a, a_prime, b, b_prime;

    std::vector<double> flatten() const; // 8 values, theta/phi pairs
    static ChshAngles from_flat(const std::vector<double>& v);
};

struct DickeAngles {
    MeasurementSetting a, a_prime, b, b_prime, c, c_prime, d, d_prime;

    std::vector<double> flatten() const; // 16 values
    static DickeAngles from_flat(const std::vector<double>& v);
};

struct OptimizationResult {
    std::vector<double> angles; // flattened, best restart
    double value = 0.0;
    int restarts_used = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    // distinct optima whose values tie the best within 1e-6
    std::vector<std::vector<double>> tied_optima;
};

// S = <AB> + <AB'> - <A'B> + <A'B'> on |Phi+>, evaluated in closed form.
double chsh_closed_form(const ChshAngles& a);

// <A B C D> on the Dicke(4,2) state, evaluated in closed form.
double dicke_term_closed_form(const MeasurementSetting& a,
                              const MeasurementSetting& b,
                              const MeasurementSetting& c,
                              const MeasurementSetting& d);

// <ABCD> + <AB'C'D'> + <A'BC'D> - <A'B'CD'> on Dicke(4,2).
double dicke_bell_value(const DickeAngles& a);

OptimizationResult optimize_chsh(int restarts, std::uint64_t seed);
OptimizationResult optimize_dicke(int restarts, std::uint64_t seed);

// Published optimal measurement settings, in degrees, embedded as the
// harness defaults (CHSH: A, A', B, B'; Dicke: A, A', B, B', C, C', D, D').
ChshAngles chsh_reference_angles();
DickeAngles dicke_reference_angles();

} // namespace qbell
