// Readout-confusion calibration and matrix-free measurement-error
// mitigation producing quasi-probability distributions.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qbell/confusion.hpp"
#include "qbell/shots.hpp"

namespace qbell {

struct QuasiDistribution {
    std::map<std::string, double> entries; // may be negative, sums to 1
    long long shots_basis = 0;
};

enum class MitigationSolver { DIRECT, MATRIX_FREE };

// Estimates the confusion model by preparing and measuring computational
// basis states under the given readout noise: |0..0> and |1..1> in
// PER_QUBIT mode, all 2^n states in FULL mode.
ConfusionModel calibrate_confusion(const NoiseSpec& noise, int n_qubits,
                                   long long shots, std::uint64_t seed,
                                   ConfusionMode mode);

// Solves A x = p on the subspace spanned by the observed bitstrings plus
// neighbors within Hamming distance `hamming_distance` (negative = no
// truncation); x is normalized to unit sum. The DIRECT path densifies
// the restricted matrix; MATRIX_FREE iterates with Jacobi-preconditioned
// residual updates using on-the-fly matrix elements.
QuasiDistribution mitigate_counts(const CountsMap& c, const ConfusionModel& m,
                                  MitigationSolver solver = MitigationSolver::MATRIX_FREE,
                                  int hamming_distance = -1);

// expectation_from_counts applied to the quasi-distribution; stderr is
// the binomial plug-in scaled by the absolute quasi-probability mass
// (approximate, documented as such).
ExpectationEstimate mitigated_expectation(const CountsMap& c,
                                          const ConfusionModel& m,
                                          const PauliString& p,
                                          MitigationSolver solver = MitigationSolver::MATRIX_FREE,
                                          int hamming_distance = -1);

} // namespace qbell
