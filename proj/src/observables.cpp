#include "qbell/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbell {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phi(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w;
}
} // namespace

MeasurementSetting::MeasurementSetting(double theta_rad, double phi_rad) {
    double t = std::fmod(theta_rad, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t > std::numbers::pi) {
        t = kTwoPi - t;
        phi_rad += std::numbers::pi;
    }
    theta = t;
    phi = wrap_phi(phi_rad);
}

MeasurementSetting MeasurementSetting::from_degrees(double theta_deg,
                                                    double phi_deg) {
    return MeasurementSetting(deg_to_rad(theta_deg), deg_to_rad(phi_deg));
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector bloch_from_angles(const MeasurementSetting& s) {
    return {std::sin(s.theta) * std::cos(s.phi),
            std::sin(s.theta) * std::sin(s.phi), std::cos(s.theta)};
}

PauliTermExpansion expand_tensor(const std::vector<BlochVector>& settings) {
    const int m = static_cast<int>(settings.size());
    if (m < 1 || m > kMaxQubits) {
        throw std::domain_error("expand_tensor: need 1..12 settings");
    }
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= 3;

    PauliTermExpansion out;
    out.terms.reserve(total);
    const char axes[3] = {'X', 'Y', 'Z'};
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::string s(m, 'X');
        double coeff = 1.0;
        std::size_t rem = idx;
        // base-3 digits, leftmost setting varies slowest
        for (int i = m - 1; i >= 0; --i) {
            int d = static_cast<int>(rem % 3);
            rem /= 3;
            s[i] = axes[d];
            const BlochVector& b = settings[i];
            coeff *= (d == 0) ? b.x : (d == 1) ? b.y : b.z;
        }
        out.terms.push_back({coeff, PauliString(s)});
    }
    return out;
}

PauliTermExpansion expand_tensor(
    const std::vector<MeasurementSetting>& settings) {
    std::vector<BlochVector> bloch;
    bloch.reserve(settings.size());
    for (const auto& s : settings) bloch.push_back(bloch_from_angles(s));
    return expand_tensor(bloch);
}

PauliTermExpansion filter_nonzero(const PauliTermExpansion& exp,
                                  const StateVector& state, double tol) {
    PauliTermExpansion out;
    for (const PauliTerm& t : exp.terms) {
        if (t.string.size() != state.n_qubits()) {
            throw std::invalid_argument("filter_nonzero: register size mismatch");
        }
        if (std::abs(expectation_pauli(state, t.string)) > tol) {
            out.terms.push_back(t);
        }
    }
    return out;
}

double expectation_setting(const StateVector& state,
                           const std::vector<MeasurementSetting>& settings,
                           bool filtered) {
    if (static_cast<int>(settings.size()) != state.n_qubits()) {
        throw std::invalid_argument(
            "expectation_setting: one setting per qubit required");
    }
    PauliTermExpansion exp = expand_tensor(settings);
    if (filtered) exp = filter_nonzero(exp, state);
    double sum = 0.0;
    for (const PauliTerm& t : exp.terms) {
        sum += t.coeff * expectation_pauli(state, t.string);
    }
    return sum;
}

} // namespace qbell
