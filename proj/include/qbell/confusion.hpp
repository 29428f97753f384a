// Readout confusion matrices, per-qubit or full, shared by the noise
// injection and mitigation paths.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace qbell {

enum class ConfusionMode { PER_QUBIT, FULL };

// PER_QUBIT: one 2x2 row-stochastic matrix per qubit, m[true][observed].
// FULL: a 2^n x 2^n column-stochastic matrix a[observed][true].
class ConfusionModel {
public:
    static ConfusionModel identity(int n_qubits);
    // p(0->1) = p(1->0) = flip_prob on every qubit
    static ConfusionModel symmetric_flip(int n_qubits, double flip_prob);
    static ConfusionModel per_qubit(std::vector<std::array<double, 4>> matrices);
    static ConfusionModel full(int n_qubits, std::vector<double> matrix);

    ConfusionMode mode() const { return mode_; }
    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << n_qubits_; }

    // a[observed][true], computed from per-qubit factors when needed
    double element(std::uint64_t observed, std::uint64_t true_state) const;
    const std::array<double, 4>& qubit_matrix(int q) const;

    // observed = A * true; preserves total mass
    std::vector<double> apply(const std::vector<double>& distribution) const;

    std::string to_text() const;
    static ConfusionModel from_text(const std::string& text);

private:
    ConfusionMode mode_;
    int n_qubits_;
    std::vector<std::array<double, 4>> per_qubit_; // PER_QUBIT
    std::vector<double> full_;                     // FULL, row-major [obs*dim+true]

    ConfusionModel(ConfusionMode mode, int n) : mode_(mode), n_qubits_(n) {}
    void validate() const;
};

} // namespace qbell
