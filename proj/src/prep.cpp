#include "qbell/prep.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qbell {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

void check_dicke_args(int n, int k) {
    if (n < 1 || n > kMaxQubits) {
        throw std::out_of_range("dicke: n out of range 1..12");
    }
    if (k < 0 || k > n) {
        throw std::domain_error("dicke: requires 0 <= k <= n");
    }
}

// Doubly-controlled RY(theta) on target t, controls a and b, decomposed
// into controlled-RY and CNOT.
void emit_ccry(std::vector<Gate>& c, int a, int b, int t, double theta) {
    c.push_back(Gate::cry(b, t, theta / 2));
    c.push_back(Gate::cnot(a, b));
    c.push_back(Gate::cry(b, t, -theta / 2));
    c.push_back(Gate::cnot(a, b));
    c.push_back(Gate::cry(a, t, theta / 2));
}

// Split-and-cyclic-shift block on qubits 0..m-1, handling excitation
// numbers up to kk. Gadget l moves amplitude between the patterns
// 0^(m-l) 1^l and 0^(m-l-1) 1^l 0 with weights sqrt(l/m), sqrt((m-l)/m).
void emit_scs_block(std::vector<Gate>& c, int m, int kk) {
    const int last = m - 1;
    for (int l = 1; l <= kk; ++l) {
        // rotation |1> -> sin(t/2)|0> + cos(t/2)|1| with cos(t/2)=sqrt(l/m)
        const double theta = -2.0 * std::acos(std::sqrt(double(l) / m));
        const int q = last - l;
        c.push_back(Gate::cnot(last, q));
        if (l == 1) {
            c.push_back(Gate::cry(q, last, theta));
        } else {
            emit_ccry(c, q, q + 1, last, theta);
        }
        c.push_back(Gate::cnot(last, q));
    }
}

PreparedState from_circuit(StateLabel label, int n, int k,
                           std::vector<Gate> circuit) {
    StateVector sv(n);
    sv.apply(circuit);
    PreparedState p{label, PrepMethod::GATE_BASED, n, k, std::move(sv),
                    std::nullopt, count_gates(circuit),
                    circuit_depth(circuit, n)};
    p.circuit = std::move(circuit);
    return p;
}

} // namespace

PreparedState prepare_bell() {
    return from_circuit(StateLabel::BELL_PHI_PLUS, 2, 0,
                        {Gate::h(0), Gate::cnot(0, 1)});
}

PreparedState prepare_dicke_gate(int n, int k) {
    check_dicke_args(n, k);
    std::vector<Gate> circuit;
    for (int q = n - k; q < n; ++q) circuit.push_back(Gate::x(q));
    for (int m = n; m >= 2; --m) {
        emit_scs_block(circuit, m, std::min(k, m - 1));
    }
    return from_circuit(StateLabel::DICKE, n, k, std::move(circuit));
}

StateVector dicke_statevector(int n, int k) {
    check_dicke_args(n, k);
    const std::uint64_t dim = std::uint64_t{1} << n;
    const double amp = 1.0 / std::sqrt(binomial(n, k));
    std::vector<cplx> amps(dim, 0.0);
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (std::popcount(b) == k) amps[b] = amp;
    }
    return StateVector(n, std::move(amps));
}

PreparedState prepare_dicke_direct(int n, int k) {
    return PreparedState{StateLabel::DICKE, PrepMethod::DIRECT, n, k,
                         dicke_statevector(n, k), std::nullopt, {}, 0};
}

int circuit_depth(const std::vector<Gate>& circuit, int n_qubits) {
    std::vector<int> layer(n_qubits, 0);
    int depth = 0;
    for (const Gate& g : circuit) {
        int at = 0;
        for (int q : g.targets) at = std::max(at, layer[q]);
        ++at;
        for (int q : g.targets) layer[q] = at;
        depth = std::max(depth, at);
    }
    return depth;
}

std::map<std::string, int> count_gates(const std::vector<Gate>& circuit) {
    std::map<std::string, int> counts;
    for (const Gate& g : circuit) ++counts[g.name()];
    return counts;
}

std::string export_circuit(const std::vector<Gate>& circuit) {
    std::ostringstream out;
    out.precision(17);
    for (const Gate& g : circuit) {
        if (g.kind == GateKind::U1Q) {
            throw std::invalid_argument(
                "export_circuit: general 1q gates have no text form");
        }
        out << g.name();
        for (int q : g.targets) out << ' ' << q;
        if (g.kind == GateKind::RY || g.kind == GateKind::RZ ||
            g.kind == GateKind::CRY || g.kind == GateKind::RZZ) {
            out << ' ' << g.angle;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<Gate> parse_circuit(const std::string& text) {
    std::vector<Gate> circuit;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        auto q = [&ls, &line]() {
            int v;
            if (!(ls >> v)) {
                throw std::invalid_argument("parse_circuit: bad line: " + line);
            }
            return v;
        };
        auto ang = [&ls, &line]() {
            double v;
            if (!(ls >> v)) {
                throw std::invalid_argument("parse_circuit: bad line: " + line);
            }
            return v;
        };
        if (kind == "H") circuit.push_back(Gate::h(q()));
        else if (kind == "X") circuit.push_back(Gate::x(q()));
        else if (kind == "S") circuit.push_back(Gate::s(q()));
        else if (kind == "SDG") circuit.push_back(Gate::sdg(q()));
        else if (kind == "RY") { int a = q(); circuit.push_back(Gate::ry(a, ang())); }
        else if (kind == "RZ") { int a = q(); circuit.push_back(Gate::rz(a, ang())); }
        else if (kind == "CNOT") { int a = q(); circuit.push_back(Gate::cnot(a, q())); }
        else if (kind == "CRY") { int a = q(), b = q(); circuit.push_back(Gate::cry(a, b, ang())); }
        else if (kind == "RZZ") { int a = q(), b = q(); circuit.push_back(Gate::rzz(a, b, ang())); }
        else throw std::invalid_argument("parse_circuit: unknown gate: " + kind);
    }
    return circuit;
}

} // namespace qbell
