// Customized measurement operators built from polar angles, their
// expansion into weighted Pauli strings, zero-term filtering and
// composite expectation values.
#pragma once

#include <vector>

#include "qbell/simcore.hpp"

namespace qbell {

// Polar angle pair defining one local observable
//   sin(theta)cos(phi) X + sin(theta)sin(phi) Y + cos(theta) Z.
// Angles outside theta in [0,pi], phi in [0,2pi) are normalized: phi is
// reduced mod 2pi, a negative or reflex theta is folded back with a
// compensating half-turn of phi (same direction on the sphere).
struct MeasurementSetting {
    double theta = 0.0; // radians
    double phi = 0.0;   // radians

    MeasurementSetting() = default;
    MeasurementSetting(double theta_rad, double phi_rad);
    static MeasurementSetting from_degrees(double theta_deg, double phi_deg);
};

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const;
};

struct PauliTerm {
    double coeff;
    PauliString string;
};

struct PauliTermExpansion {
    std::vector<PauliTerm> terms;
};

BlochVector bloch_from_angles(const MeasurementSetting& s);

// Tensor product of m local observables as 3^m weighted Pauli strings;
// coefficient of string k1..km is the product of the matching Bloch
// components.
PauliTermExpansion expand_tensor(const std::vector<BlochVector>& settings);
PauliTermExpansion expand_tensor(const std::vector<MeasurementSetting>& settings);

// Retains terms with |<state|P|state>| > tol, order preserved.
PauliTermExpansion filter_nonzero(const PauliTermExpansion& exp,
                                  const StateVector& state,
                                  double tol = 1e-10);

// Sum of coeff * <P> over the (optionally filtered) expansion.
double expectation_setting(const StateVector& state,
                           const std::vector<MeasurementSetting>& settings,
                           bool filtered);

double deg_to_rad(double deg);

} // namespace qbell
