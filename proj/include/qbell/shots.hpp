// Finite-shot measurement in Pauli eigenbases, counts-to-expectation
// conversion, and noise injection: readout confusion, stochastic
// two-qubit Pauli errors after CNOTs, coherent ZZ over-rotation, and
// Pauli twirling of a coherently miscalibrated CNOT.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbell/confusion.hpp"
#include "qbell/simcore.hpp"

namespace qbell {

struct CountsMap {
    std::map<std::string, long long> entries; // bitstring -> count
    long long shots = 0;

    int n_qubits() const;
    std::vector<double> distribution() const; // counts/shots, dense

    std::string to_text() const; // JSON: {"shots": N, "counts": {...}}
    static CountsMap from_text(const std::string& text);
};

struct NoiseSpec {
    std::optional<ConfusionModel> readout;
    double two_qubit_pauli_error_prob = 0.0;
    double coherent_overrotation_rad = 0.0; // extra RZZ after each CNOT
    std::uint64_t seed = 0;

    bool has_gate_noise() const {
        return two_qubit_pauli_error_prob > 0.0 ||
               coherent_overrotation_rad != 0.0;
    }
};

// Basis-change circuit: X -> H, Y -> Sdg then H, Z -> nothing; a
// computational-basis measurement afterwards realizes the Pauli
// eigenbasis.
std::vector<Gate> measurement_circuit(const PauliString& p);

// Draws from |amplitudes|^2 after the basis change (readout confusion
// applied if configured). Streams are (noise.seed, stream, shot index).
CountsMap sample_counts(const StateVector& state, const PauliString& basis,
                        long long shots, const NoiseSpec& noise,
                        std::uint64_t stream = 0);

struct ExpectationEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

// value = sum_b P(b) * prod_q (+1 for '0', -1 for '1');
// stderr = sqrt((1 - value^2) / shots).
ExpectationEstimate expectation_from_counts(const CountsMap& c,
                                            const PauliString& p);

std::vector<double> apply_readout_noise(const std::vector<double>& distribution,
                                        const ConfusionModel& confusion);

// Per shot: each CNOT suffers a uniformly random non-identity two-qubit
// Pauli with probability two_qubit_pauli_error_prob and an RZZ
// over-rotation if configured; then basis change, readout noise, sample.
CountsMap sample_with_gate_noise(const std::vector<Gate>& circuit,
                                 int n_qubits, long long shots,
                                 const NoiseSpec& noise,
                                 const PauliString& basis,
                                 std::uint64_t stream = 0);

// A CNOT whose physical implementation carries a coherent RZZ error,
// wrapped in random Pauli frames chosen so the ideal gate is preserved.
class TwirledCnot {
public:
    TwirledCnot(int control, int target, double coherent_error_rad);

    // frame in 0..15; pre-Paulis, CNOT, error rotation, post-Paulis
    std::vector<Gate> frame_circuit(int frame) const;

    // <observable> after applying one twirled gate to state_in,
    // averaged over all 16 frames exactly
    double exact_average_expectation(const StateVector& state_in,
                                     const PauliString& observable) const;

    // same, averaged over `samples` uniformly drawn frames
    double sampled_expectation(const StateVector& state_in,
                               const PauliString& observable, int samples,
                               std::uint64_t seed) const;

private:
    int control_, target_;
    double error_rad_;
};

} // namespace qbell
