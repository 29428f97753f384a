#include "qbell/mitigate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace qbell {

namespace {

// basis-state preparation circuit-free sampling helper
CountsMap sample_basis_state(std::uint64_t index, int n, long long shots,
                             const NoiseSpec& noise, std::uint64_t stream) {
    std::vector<cplx> amps(std::uint64_t{1} << n, 0.0);
    amps[index] = 1.0;
    StateVector sv(n, std::move(amps));
    return sample_counts(sv, PauliString(std::string(n, 'Z')), shots, noise,
                         stream);
}

std::vector<std::uint64_t> restricted_subspace(const CountsMap& c, int n,
                                               int hamming_distance) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    if (hamming_distance < 0 || hamming_distance >= n) {
        std::vector<std::uint64_t> all(dim);
        for (std::uint64_t i = 0; i < dim; ++i) all[i] = i;
        return all;
    }
    std::set<std::uint64_t> keep;
    for (const auto& [bits, count] : c.entries) {
        std::uint64_t base = index_of_bitstring(bits);
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (std::popcount(base ^ i) <= hamming_distance) keep.insert(i);
        }
    }
    return {keep.begin(), keep.end()};
}

// Gaussian elimination with partial pivoting on the densified
// restricted matrix.
std::vector<double> solve_direct(const ConfusionModel& m,
                                 const std::vector<std::uint64_t>& subspace,
                                 std::vector<double> rhs) {
    const std::size_t k = subspace.size();
    std::vector<double> a(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            a[i * k + j] = m.element(subspace[i], subspace[j]);
        }
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot * k + col]) < 1e-14) {
            throw std::runtime_error(
                "mitigate_counts: restricted confusion matrix is singular "
                "(pivot below 1e-14 at column " + std::to_string(col) + ")");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < k; ++j) {
                std::swap(a[pivot * k + j], a[col * k + j]);
            }
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = a[r * k + col] / a[col * k + col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < k; ++j) a[r * k + j] -= f * a[col * k + j];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(k);
    for (std::size_t ri = k; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t j = ri + 1; j < k; ++j) s -= a[ri * k + j] * x[j];
        x[ri] = s / a[ri * k + ri];
    }
    return x;
}

// Jacobi-preconditioned residual iteration; the matrix is touched only
// through ConfusionModel::element.
std::vector<double> solve_matrix_free(const ConfusionModel& m,
                                      const std::vector<std::uint64_t>& subspace,
                                      const std::vector<double>& rhs) {
    const std::size_t k = subspace.size();
    std::vector<double> diag(k);
    for (std::size_t i = 0; i < k; ++i) {
        diag[i] = m.element(subspace[i], subspace[i]);
        if (std::abs(diag[i]) < 1e-14) {
            throw std::runtime_error(
                "mitigate_counts: zero diagonal in restricted confusion "
                "matrix, matrix-free iteration cannot proceed");
        }
    }
    std::vector<double> x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = rhs[i]; // raw counts start
    std::vector<double> ax(k);
    constexpr int kMaxSweeps = 10000;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double residual = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                s += m.element(subspace[i], subspace[j]) * x[j];
            }
            ax[i] = s;
            residual = std::max(residual, std::abs(s - rhs[i]));
        }
        if (residual < 1e-13) return x;
        for (std::size_t i = 0; i < k; ++i) {
            x[i] += (rhs[i] - ax[i]) / diag[i];
        }
    }
    throw std::runtime_error(
        "mitigate_counts: matrix-free iteration did not converge "
        "(confusion matrix too far from diagonal dominance)");
}

} // namespace

ConfusionModel calibrate_confusion(const NoiseSpec& noise, int n_qubits,
                                   long long shots, std::uint64_t seed,
                                   ConfusionMode mode) {
    if (shots < 1) {
        throw std::domain_error("calibrate_confusion: shots must be >= 1");
    }
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::out_of_range("calibrate_confusion: qubit count out of range");
    }
    NoiseSpec cal = noise;
    cal.seed = seed;

    if (mode == ConfusionMode::PER_QUBIT) {
        const std::uint64_t ones = (std::uint64_t{1} << n_qubits) - 1;
        CountsMap zeros = sample_basis_state(0, n_qubits, shots, cal, 0x63'00);
        CountsMap all_ones =
            sample_basis_state(ones, n_qubits, shots, cal, 0x63'01);
        std::vector<std::array<double, 4>> ms(n_qubits);
        for (int q = 0; q < n_qubits; ++q) {
            long long flip0 = 0, flip1 = 0;
            for (const auto& [bits, count] : zeros.entries) {
                if (bits[q] == '1') flip0 += count;
            }
            for (const auto& [bits, count] : all_ones.entries) {
                if (bits[q] == '0') flip1 += count;
            }
            double p01 = static_cast<double>(flip0) / shots;
            double p10 = static_cast<double>(flip1) / shots;
            ms[q] = {1.0 - p01, p01, p10, 1.0 - p10};
        }
        return ConfusionModel::per_qubit(std::move(ms));
    }

    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    std::vector<double> a(dim * dim, 0.0);
    for (std::uint64_t t = 0; t < dim; ++t) {
        CountsMap counts =
            sample_basis_state(t, n_qubits, shots, cal, 0x66'00 + t);
        for (const auto& [bits, count] : counts.entries) {
            a[index_of_bitstring(bits) * dim + t] =
                static_cast<double>(count) / shots;
        }
    }
    return ConfusionModel::full(n_qubits, std::move(a));
}

QuasiDistribution mitigate_counts(const CountsMap& c, const ConfusionModel& m,
                                  MitigationSolver solver,
                                  int hamming_distance) {
    const int n = c.n_qubits();
    if (n != m.n_qubits()) {
        throw std::invalid_argument("mitigate_counts: dimension mismatch");
    }
    std::vector<std::uint64_t> subspace =
        restricted_subspace(c, n, hamming_distance);
    std::vector<double> p(subspace.size(), 0.0);
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        auto it = c.entries.find(bitstring_of_index(subspace[i], n));
        if (it != c.entries.end()) {
            p[i] = static_cast<double>(it->second) / c.shots;
        }
    }
    std::vector<double> x = (solver == MitigationSolver::DIRECT)
                                ? solve_direct(m, subspace, p)
                                : solve_matrix_free(m, subspace, p);
    double mass = 0.0;
    for (double v : x) mass += v;
    if (std::abs(mass) < 1e-12) {
        throw std::runtime_error("mitigate_counts: solution has zero mass");
    }
    // skip the renormalization when mass is already unit, so an identity
    // model reproduces counts/shots bit-for-bit
    const double scale = (std::abs(mass - 1.0) < 1e-12) ? 1.0 : mass;
    QuasiDistribution q;
    q.shots_basis = c.shots;
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        q.entries[bitstring_of_index(subspace[i], n)] = x[i] / scale;
    }
    return q;
}

ExpectationEstimate mitigated_expectation(const CountsMap& c,
                                          const ConfusionModel& m,
                                          const PauliString& p,
                                          MitigationSolver solver,
                                          int hamming_distance) {
    QuasiDistribution q = mitigate_counts(c, m, solver, hamming_distance);
    double value = 0.0, abs_mass = 0.0;
    for (const auto& [bits, weight] : q.entries) {
        if (static_cast<int>(bits.size()) != p.size()) {
            throw std::invalid_argument(
                "mitigated_expectation: key length mismatch");
        }
        int ones = 0;
        for (char b : bits) ones += (b == '1');
        value += (ones % 2 == 0) ? weight : -weight;
        abs_mass += std::abs(weight);
    }
    double var = std::max(0.0, abs_mass * abs_mass - value * value);
    return {value, std::sqrt(var / static_cast<double>(q.shots_basis))};
}

} // namespace qbell
