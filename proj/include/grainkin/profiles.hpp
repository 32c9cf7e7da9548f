#pragma once

#include <cmath>
#include <numbers>

// Closed-form densities and constants of the Maxwell (gamma = 0) problem.

namespace grainkin::profiles {

/// A0 = log 2 + 1/2.
inline const double A0 = std::numbers::ln2 + 0.5;
/// Limiting temperature lambda0 = exp(A0) = 2 sqrt(e).
inline const double lambda0 = 2.0 * std::sqrt(std::numbers::e);

/// Unit-mass, unit-energy steady profile H(x) = 2 / (pi (1 + x^2)^2).
inline double H(double x) {
    const double d = 1.0 + x * x;
    return 2.0 / (std::numbers::pi * d * d);
}

/// G0(x) = lambda0 H(lambda0 x).
inline double G0(double x) { return lambda0 * H(lambda0 * x); }

/// Cauchy density 1 / (pi (1 + x^2)).
inline double cauchy(double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); }

/// Gaussian with variance sigma^2, unit mass.
inline double gaussian(double x, double sigma = 1.0, double center = 0.0) {
    const double z = (x - center) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// M(x) = exp(-x^2) / sqrt(pi).
inline double maxwellian(double x) { return std::exp(-x * x) / std::sqrt(std::numbers::pi); }

/// Kernel element g0(x) = (2/pi)(1 - 3x^2)/(1 + x^2)^3.
inline double g0(double x) {
    const double d = 1.0 + x * x;
    return 2.0 / std::numbers::pi * (1.0 - 3.0 * x * x) / (d * d * d);
}

/// phi0(x) = g0(lambda0 x).
inline double phi0(double x) { return g0(lambda0 * x); }

/// Phi(xi) = (1 + |xi|) exp(-|xi|), the transform of H.
inline double Phi(double xi) {
    const double a = std::abs(xi);
    return (1.0 + a) * std::exp(-a);
}

/// psi0(xi) = xi^2 exp(-|xi|), the transform of g0.
inline double psi0(double xi) { return xi * xi * std::exp(-std::abs(xi)); }

}  // namespace grainkin::profiles
