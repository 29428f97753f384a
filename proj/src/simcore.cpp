#include "qbell/simcore.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qbell {

namespace {

const cplx I{0.0, 1.0};

void check_unitary_2x2(const std::array<cplx, 4>& m) {
    // U†U = I within kExactTol
    cplx a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    cplx b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    cplx d = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    if (std::abs(a - 1.0) > kExactTol || std::abs(b) > kExactTol ||
        std::abs(d - 1.0) > kExactTol) {
        throw std::invalid_argument("general 1q gate matrix is not unitary");
    }
}

} // namespace

Gate Gate::h(int q) { return Gate{GateKind::H, {q}}; }
Gate Gate::x(int q) { return Gate{GateKind::X, {q}}; }
Gate Gate::s(int q) { return Gate{GateKind::S, {q}}; }
Gate Gate::sdg(int q) { return Gate{GateKind::Sdg, {q}}; }
Gate Gate::ry(int q, double angle) { return Gate{GateKind::RY, {q}, angle}; }
Gate Gate::rz(int q, double angle) { return Gate{GateKind::RZ, {q}, angle}; }

Gate Gate::u1q(int q, const std::array<cplx, 4>& matrix) {
    check_unitary_2x2(matrix);
    return Gate{GateKind::U1Q, {q}, 0.0, matrix};
}

Gate Gate::cnot(int control, int target) {
    return Gate{GateKind::CNOT, {control, target}};
}
Gate Gate::cry(int control, int target, double angle) {
    return Gate{GateKind::CRY, {control, target}, angle};
}
Gate Gate::rzz(int a, int b, double angle) {
    return Gate{GateKind::RZZ, {a, b}, angle};
}

std::array<cplx, 4> Gate::matrix1q() const {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (kind) {
    case GateKind::H:
        return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::S:
        return {1.0, 0.0, 0.0, I};
    case GateKind::Sdg:
        return {1.0, 0.0, 0.0, -I};
    case GateKind::RY: {
        double c = std::cos(angle / 2), s = std::sin(angle / 2);
        return {c, -s, s, c};
    }
    case GateKind::RZ: {
        cplx e = std::exp(-I * (angle / 2));
        return {e, 0.0, 0.0, std::conj(e)};
    }
    case GateKind::CRY: { // target rotation, used when control bit is set
        double c = std::cos(angle / 2), s = std::sin(angle / 2);
        return {c, -s, s, c};
    }
    case GateKind::U1Q:
        return unitary;
    default:
        throw std::logic_error("matrix1q: not a single-qubit gate");
    }
}

Gate Gate::inverse() const {
    switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::CNOT:
        return *this;
    case GateKind::S:
        return Gate{GateKind::Sdg, targets};
    case GateKind::Sdg:
        return Gate{GateKind::S, targets};
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRY:
    case GateKind::RZZ: {
        Gate g = *this;
        g.angle = -angle;
        return g;
    }
    case GateKind::U1Q: {
        Gate g = *this;
        g.unitary = {std::conj(unitary[0]), std::conj(unitary[2]),
                     std::conj(unitary[1]), std::conj(unitary[3])};
        return g;
    }
    }
    throw std::logic_error("inverse: unknown gate kind");
}

bool Gate::is_two_qubit() const {
    return kind == GateKind::CNOT || kind == GateKind::CRY ||
           kind == GateKind::RZZ;
}

std::string Gate::name() const {
    switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::U1Q: return "U1Q";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRY: return "CRY";
    case GateKind::RZZ: return "RZZ";
    }
    return "?";
}

PauliString::PauliString(std::string s) : axes(std::move(s)) {
    for (char c : axes) {
        if (c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument("PauliString: axes must be X, Y or Z");
        }
    }
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::out_of_range("StateVector: qubit count out of range 1..12");
    }
    amplitudes_.assign(std::uint64_t{1} << n_qubits, 0.0);
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::out_of_range("StateVector: qubit count out of range 1..12");
    }
    if (amplitudes_.size() != (std::uint64_t{1} << n_qubits)) {
        throw std::invalid_argument("StateVector: amplitude count != 2^n");
    }
    if (std::abs(norm_sq() - 1.0) > 1e-9) {
        throw std::invalid_argument("StateVector: amplitudes not normalized");
    }
}

cplx StateVector::amplitude(const std::string& bitstring) const {
    if (static_cast<int>(bitstring.size()) != n_qubits_) {
        throw std::invalid_argument("amplitude: bitstring length != n_qubits");
    }
    return amplitudes_[index_of_bitstring(bitstring)];
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amplitudes_) s += std::norm(a);
    return s;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amplitudes_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes_[i]);
    return p;
}

void StateVector::apply_1q(const std::array<cplx, 4>& m, int q) {
    const std::uint64_t stride = std::uint64_t{1} << (n_qubits_ - 1 - q);
    const std::uint64_t dim = amplitudes_.size();
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
        for (std::uint64_t i = base; i < base + stride; ++i) {
            cplx a0 = amplitudes_[i];
            cplx a1 = amplitudes_[i + stride];
            amplitudes_[i] = m[0] * a0 + m[1] * a1;
            amplitudes_[i + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void StateVector::apply(const Gate& g) {
    for (int q : g.targets) {
        if (q < 0 || q >= n_qubits_) {
            throw std::out_of_range("apply: target qubit out of range");
        }
    }
    if (g.targets.size() == 2 && g.targets[0] == g.targets[1]) {
        throw std::invalid_argument("apply: duplicate target qubits");
    }

    switch (g.kind) {
    case GateKind::CNOT: {
        const int c = g.targets[0], t = g.targets[1];
        const std::uint64_t cm = std::uint64_t{1} << (n_qubits_ - 1 - c);
        const std::uint64_t tm = std::uint64_t{1} << (n_qubits_ - 1 - t);
        for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & cm) && !(i & tm)) {
                std::swap(amplitudes_[i], amplitudes_[i | tm]);
            }
        }
        return;
    }
    case GateKind::CRY: {
        const int c = g.targets[0], t = g.targets[1];
        const std::uint64_t cm = std::uint64_t{1} << (n_qubits_ - 1 - c);
        const std::uint64_t tm = std::uint64_t{1} << (n_qubits_ - 1 - t);
        const double ch = std::cos(g.angle / 2), sh = std::sin(g.angle / 2);
        for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & cm) && !(i & tm)) {
                cplx a0 = amplitudes_[i];
                cplx a1 = amplitudes_[i | tm];
                amplitudes_[i] = ch * a0 - sh * a1;
                amplitudes_[i | tm] = sh * a0 + ch * a1;
            }
        }
        return;
    }
    case GateKind::RZZ: {
        const int a = g.targets[0], b = g.targets[1];
        const cplx same = std::exp(-I * (g.angle / 2));
        const cplx diff = std::conj(same);
        for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
            bool equal = bit_of(i, a, n_qubits_) == bit_of(i, b, n_qubits_);
            amplitudes_[i] *= equal ? same : diff;
        }
        return;
    }
    default:
        apply_1q(g.matrix1q(), g.targets[0]);
        return;
    }
}

void StateVector::apply(const std::vector<Gate>& circuit) {
    for (const Gate& g : circuit) apply(g);
}

StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner_product: qubit count mismatch");
    }
    cplx s = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

double expectation_pauli(const StateVector& state, const PauliString& p) {
    if (p.size() != state.n_qubits()) {
        throw std::invalid_argument("expectation_pauli: string length mismatch");
    }
    const int n = state.n_qubits();

    // P|b> = phase(b) |b ^ flip_mask>
    std::uint64_t flip_mask = 0;
    for (int q = 0; q < n; ++q) {
        if (p.axes[q] == 'X' || p.axes[q] == 'Y') {
            flip_mask |= std::uint64_t{1} << (n - 1 - q);
        }
    }

    cplx acc = 0.0;
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
        cplx phase = 1.0;
        for (int q = 0; q < n; ++q) {
            int bit = bit_of(b, q, n);
            switch (p.axes[q]) {
            case 'Y': phase *= bit ? -I : I; break;
            case 'Z': if (bit) phase = -phase; break;
            default: break;
            }
        }
        acc += std::conj(state.amplitudes()[b ^ flip_mask]) * phase *
               state.amplitudes()[b];
    }
    if (std::abs(acc.imag()) > kExactTol) {
        throw std::logic_error("expectation_pauli: non-real expectation");
    }
    return acc.real();
}

std::uint64_t index_of_bitstring(const std::string& bits) {
    std::uint64_t idx = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bitstring must contain only 0/1");
        }
        idx = (idx << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return idx;
}

std::string bitstring_of_index(std::uint64_t index, int n_qubits) {
    std::string s(n_qubits, '0');
    for (int q = 0; q < n_qubits; ++q) {
        if (bit_of(index, q, n_qubits)) s[q] = '1';
    }
    return s;
}

} // namespace qbell
