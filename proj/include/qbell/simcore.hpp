// Dense statevector simulation: state allocation, gate application,
// inner products, exact Pauli-string expectation values.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qbell {

using cplx = std::complex<double>;

constexpr int kMaxQubits = 12;
constexpr double kExactTol = 1e-12;

// Bit convention (global, shared by every module): the leftmost character
// of a bitstring is qubit 0, so qubit q occupies bit (n-1-q) of the
// amplitude index.
inline int bit_of(std::uint64_t index, int qubit, int n_qubits) {
    return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

enum class GateKind { H, X, S, Sdg, RY, RZ, U1Q, CNOT, CRY, RZZ };

struct Gate {
    GateKind kind;
    std::vector<int> targets;     // control first for CNOT/CRY
    double angle = 0.0;           // radians, for RY/RZ/CRY/RZZ
    std::array<cplx, 4> unitary{}; // row-major 2x2, for U1Q only

    static Gate h(int q);
    static Gate x(int q);
    static Gate s(int q);
    static Gate sdg(int q);
    static Gate ry(int q, double angle);
    static Gate rz(int q, double angle);
    static Gate u1q(int q, const std::array<cplx, 4>& matrix); // must be unitary
    static Gate cnot(int control, int target);
    static Gate cry(int control, int target, double angle);
    static Gate rzz(int a, int b, double angle);

    // 2x2 matrix for single-qubit kinds (throws for two-qubit kinds)
    std::array<cplx, 4> matrix1q() const;
    Gate inverse() const;
    bool is_two_qubit() const;
    std::string name() const;
};

// Pauli string over {X, Y, Z}, one axis per qubit (no identity component).
struct PauliString {
    std::string axes; // chars 'X', 'Y', 'Z'; axes[q] acts on qubit q

    PauliString() = default;
    explicit PauliString(std::string s);
    int size() const { return static_cast<int>(axes.size()); }
};

class StateVector {
public:
    explicit StateVector(int n_qubits); // |0...0>
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amplitudes_.size(); }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    cplx amplitude(std::uint64_t index) const { return amplitudes_.at(index); }
    cplx amplitude(const std::string& bitstring) const;

    double norm_sq() const;
    std::vector<double> probabilities() const;

    void apply(const Gate& g);
    void apply(const std::vector<Gate>& circuit);

private:
    int n_qubits_;
    std::vector<cplx> amplitudes_;

    void apply_1q(const std::array<cplx, 4>& m, int q);
};

StateVector new_zero_state(int n_qubits);

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);
cplx inner_product(const StateVector& a, const StateVector& b);

// Exact <psi|P|psi>. Always real for Hermitian P; the imaginary part is
// checked against kExactTol before truncation.
double expectation_pauli(const StateVector& state, const PauliString& p);

std::uint64_t index_of_bitstring(const std::string& bits);
std::string bitstring_of_index(std::uint64_t index, int n_qubits);

} // namespace qbell
