#include "qbell/confusion.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "qbell/simcore.hpp"

namespace qbell {

namespace {
constexpr double kStochasticTol = 1e-9;
}

ConfusionModel ConfusionModel::identity(int n_qubits) {
    return symmetric_flip(n_qubits, 0.0);
}

ConfusionModel ConfusionModel::symmetric_flip(int n_qubits, double flip_prob) {
    std::vector<std::array<double, 4>> m(
        n_qubits,
        {1.0 - flip_prob, flip_prob, flip_prob, 1.0 - flip_prob});
    return per_qubit(std::move(m));
}

ConfusionModel ConfusionModel::per_qubit(
    std::vector<std::array<double, 4>> matrices) {
    if (matrices.empty() || matrices.size() > kMaxQubits) {
        throw std::out_of_range("ConfusionModel: qubit count out of range");
    }
    ConfusionModel m(ConfusionMode::PER_QUBIT,
                     static_cast<int>(matrices.size()));
    m.per_qubit_ = std::move(matrices);
    m.validate();
    return m;
}

ConfusionModel ConfusionModel::full(int n_qubits, std::vector<double> matrix) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::out_of_range("ConfusionModel: qubit count out of range");
    }
    ConfusionModel m(ConfusionMode::FULL, n_qubits);
    if (matrix.size() != m.dim() * m.dim()) {
        throw std::invalid_argument("ConfusionModel: matrix size != 4^n");
    }
    m.full_ = std::move(matrix);
    m.validate();
    return m;
}

void ConfusionModel::validate() const {
    if (mode_ == ConfusionMode::PER_QUBIT) {
        for (const auto& m : per_qubit_) {
            for (double e : m) {
                if (e < -kStochasticTol || e > 1.0 + kStochasticTol) {
                    throw std::invalid_argument(
                        "ConfusionModel: entry outside [0,1]");
                }
            }
            if (std::abs(m[0] + m[1] - 1.0) > kStochasticTol ||
                std::abs(m[2] + m[3] - 1.0) > kStochasticTol) {
                throw std::invalid_argument(
                    "ConfusionModel: per-qubit rows must sum to 1");
            }
        }
    } else {
        const std::uint64_t d = dim();
        for (std::uint64_t t = 0; t < d; ++t) {
            double col = 0.0;
            for (std::uint64_t o = 0; o < d; ++o) {
                double e = full_[o * d + t];
                if (e < -kStochasticTol || e > 1.0 + kStochasticTol) {
                    throw std::invalid_argument(
                        "ConfusionModel: entry outside [0,1]");
                }
                col += e;
            }
            if (std::abs(col - 1.0) > kStochasticTol) {
                throw std::invalid_argument(
                    "ConfusionModel: columns must sum to 1");
            }
        }
    }
}

double ConfusionModel::element(std::uint64_t observed,
                               std::uint64_t true_state) const {
    if (mode_ == ConfusionMode::FULL) {
        return full_[observed * dim() + true_state];
    }
    double e = 1.0;
    for (int q = 0; q < n_qubits_; ++q) {
        int t = bit_of(true_state, q, n_qubits_);
        int o = bit_of(observed, q, n_qubits_);
        e *= per_qubit_[q][t * 2 + o];
    }
    return e;
}

const std::array<double, 4>& ConfusionModel::qubit_matrix(int q) const {
    if (mode_ != ConfusionMode::PER_QUBIT) {
        throw std::logic_error("qubit_matrix: model is FULL mode");
    }
    return per_qubit_.at(q);
}

std::vector<double> ConfusionModel::apply(
    const std::vector<double>& distribution) const {
    if (distribution.size() != dim()) {
        throw std::invalid_argument("ConfusionModel::apply: dimension mismatch");
    }
    if (mode_ == ConfusionMode::FULL) {
        const std::uint64_t d = dim();
        std::vector<double> out(d, 0.0);
        for (std::uint64_t o = 0; o < d; ++o) {
            for (std::uint64_t t = 0; t < d; ++t) {
                out[o] += full_[o * d + t] * distribution[t];
            }
        }
        return out;
    }
    // per-qubit tensor application, one qubit at a time
    std::vector<double> p = distribution;
    for (int q = 0; q < n_qubits_; ++q) {
        const auto& m = per_qubit_[q];
        const std::uint64_t stride = std::uint64_t{1} << (n_qubits_ - 1 - q);
        for (std::uint64_t base = 0; base < p.size(); base += 2 * stride) {
            for (std::uint64_t i = base; i < base + stride; ++i) {
                double p0 = p[i], p1 = p[i + stride];
                p[i] = m[0] * p0 + m[2] * p1;
                p[i + stride] = m[1] * p0 + m[3] * p1;
            }
        }
    }
    return p;
}

std::string ConfusionModel::to_text() const {
    std::ostringstream out;
    out.precision(17);
    if (mode_ == ConfusionMode::PER_QUBIT) {
        out << "mode PER_QUBIT\nqubits " << n_qubits_ << '\n';
        for (const auto& m : per_qubit_) {
            out << m[0] << ' ' << m[1] << '\n' << m[2] << ' ' << m[3] << '\n';
        }
    } else {
        out << "mode FULL\nqubits " << n_qubits_ << '\n';
        const std::uint64_t d = dim();
        for (std::uint64_t o = 0; o < d; ++o) {
            for (std::uint64_t t = 0; t < d; ++t) {
                out << full_[o * d + t] << (t + 1 == d ? '\n' : ' ');
            }
        }
    }
    return out.str();
}

ConfusionModel ConfusionModel::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string key, mode;
    int n = 0;
    if (!(in >> key >> mode) || key != "mode") {
        throw std::invalid_argument("ConfusionModel: missing mode header");
    }
    if (!(in >> key >> n) || key != "qubits") {
        throw std::invalid_argument("ConfusionModel: missing qubits header");
    }
    if (mode == "PER_QUBIT") {
        std::vector<std::array<double, 4>> ms(n);
        for (auto& m : ms) {
            if (!(in >> m[0] >> m[1] >> m[2] >> m[3])) {
                throw std::invalid_argument("ConfusionModel: truncated matrix");
            }
        }
        return per_qubit(std::move(ms));
    }
    if (mode == "FULL") {
        const std::uint64_t d = std::uint64_t{1} << n;
        std::vector<double> m(d * d);
        for (double& e : m) {
            if (!(in >> e)) {
                throw std::invalid_argument("ConfusionModel: truncated matrix");
            }
        }
        return full(n, std::move(m));
    }
    throw std::invalid_argument("ConfusionModel: unknown mode " + mode);
}

} // namespace qbell
