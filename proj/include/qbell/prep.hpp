// State preparation: the two-qubit |Phi+> Bell state and Dicke(n,k)
// states, each by an explicit gate circuit or by direct amplitude
// assignment.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbell/simcore.hpp"

namespace qbell {

enum class StateLabel { BELL_PHI_PLUS, DICKE };
enum class PrepMethod { GATE_BASED, DIRECT };

struct PreparedState {
    StateLabel label;
    PrepMethod method;
    int n = 0;
    int k = 0; // excitation number, DICKE only
    StateVector state;
    std::optional<std::vector<Gate>> circuit;
    std::map<std::string, int> gate_counts;
    int depth = 0; // greedy layering of gates on disjoint qubits
};

// (|00> + |11>)/sqrt(2) via H(0), CNOT(0,1).
PreparedState prepare_bell();

// Deterministic recursive split-and-cyclic-shift circuit built from X,
// CNOT and controlled-RY gates; exact up to round-off.
PreparedState prepare_dicke_gate(int n, int k);

// Direct amplitude assignment: 1/sqrt(C(n,k)) on every weight-k
// bitstring.
PreparedState prepare_dicke_direct(int n, int k);

// Exact Dicke(n,k) statevector (also used as fidelity reference).
StateVector dicke_statevector(int n, int k);

int circuit_depth(const std::vector<Gate>& circuit, int n_qubits);
std::map<std::string, int> count_gates(const std::vector<Gate>& circuit);

// One gate per line: "KIND q_targets [angle_rad]". Angle printed with
// full precision; control qubit listed first for CNOT/CRY.
std::string export_circuit(const std::vector<Gate>& circuit);
std::vector<Gate> parse_circuit(const std::string& text);

} // namespace qbell
