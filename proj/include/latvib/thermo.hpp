#pragma once

/// @file
///
/// Phonon thermodynamics over spectral samples: zero-point energy, internal
/// energy U1(T), specific heat C(T), and the Debye / Einstein reference
/// models with their low- and high-temperature laws.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latvib/dos.hpp"
#include "latvib/quadrature.hpp"

namespace latvib {

struct PhysicalConstants {
    double hbar = 1.0;
    double boltzmann = 1.0;
};

inline PhysicalConstants natural_units() { return {1.0, 1.0}; }
inline PhysicalConstants si_units() { return {1.054571817e-34, 1.380649e-23}; }

namespace detail {

/// Bose-Einstein energy per mode, hbar sqrt(lambda) / (e^x - 1) with
/// x = hbar sqrt(lambda) / KT. The lambda = 0 value is the equipartition
/// limit KT; x beyond 700 would overflow e^x and contributes nothing.
inline double bose_energy(double lambda, double temperature,
                          const PhysicalConstants& c) {
    if (lambda <= 0.0) return c.boltzmann * temperature;
    const double hw = c.hbar * std::sqrt(lambda);
    const double x = hw / (c.boltzmann * temperature);
    if (x > 700.0) return 0.0;
    return hw / std::expm1(x);
}

/// Specific-heat kernel K (x / 2 sinh(x/2))^2; equals K at lambda = 0.
inline double heat_kernel(double lambda, double temperature,
                          const PhysicalConstants& c) {
    if (lambda <= 0.0) return c.boltzmann;
    const double x = c.hbar * std::sqrt(lambda) / (c.boltzmann * temperature);
    if (x > 700.0) return 0.0;
    const double r = x / (2.0 * std::sinh(0.5 * x));
    return c.boltzmann * r * r;
}

}  // namespace detail

/// U0 = (hbar/2) integral of sqrt(lambda) d(phi).
inline double zero_point_energy(const SpectralSamples& s,
                                const PhysicalConstants& c = {}) {
    return 0.5 * c.hbar *
           spectral_average(s, [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

/// U1(T) = integral of hbar sqrt(lambda) / (e^{hbar sqrt(lambda)/KT} - 1) d(phi).
inline double internal_energy(const SpectralSamples& s, double temperature,
                              const PhysicalConstants& c = {}) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("internal_energy: temperature must be positive");
    return spectral_average(
        s, [&](double l) { return detail::bose_energy(l, temperature, c); });
}

/// C(T) = dU1/dT as a weighted sum of the per-mode heat kernel.
inline double specific_heat(const SpectralSamples& s, double temperature,
                            const PhysicalConstants& c = {}) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("specific_heat: temperature must be positive");
    return spectral_average(
        s, [&](double l) { return detail::heat_kernel(l, temperature, c); });
}

/// lambda_D with the Debye distribution exhausting 3n modes:
/// c0 lambda_D^{3/2} = 3n.
inline double debye_lambda(double c0, int n) {
    if (!(c0 > 0.0)) throw std::invalid_argument("debye_lambda: c0 must be positive");
    if (n < 1) throw std::invalid_argument("debye_lambda: n must be >= 1");
    return std::pow(3.0 * n / c0, 2.0 / 3.0);
}

inline double debye_temperature(double lambda_d, const PhysicalConstants& c = {}) {
    if (!(lambda_d > 0.0))
        throw std::invalid_argument("debye_temperature: lambda_D must be positive");
    return c.hbar / c.boltzmann * std::sqrt(lambda_d);
}

/// Debye model specific heat
///   C(T) = 9 n K (T/Theta_D)^3 int_0^{Theta_D/T} x^4 e^x / (e^x-1)^2 dx.
inline double debye_specific_heat(double theta_d, int n, double temperature,
                                  const PhysicalConstants& c = {}) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("debye_specific_heat: temperature must be positive");
    // The integrand is below 1e-30 past x ~ 80; clamping keeps the panel
    // subdivision focused where the mass is when Theta_D/T is huge.
    const double xmax = std::min(theta_d / temperature, 80.0);
    const double integral = integrate_finite(
        [](double x) {
            if (x < 1e-12) return x * x;
            const double r = x / (2.0 * std::sinh(0.5 * x));
            return x * x * r * r;
        },
        0.0, xmax, 1e-10);
    const double ratio = temperature / theta_d;
    return 9.0 * n * c.boltzmann * ratio * ratio * ratio * integral;
}

/// Einstein model: all 3n modes at the single frequency sqrt(lambda0).
inline double einstein_specific_heat(double lambda0, int n, double temperature,
                                     const PhysicalConstants& c = {}) {
    if (!(lambda0 > 0.0) || !(temperature > 0.0))
        throw std::invalid_argument("einstein_specific_heat: inputs must be positive");
    return 3.0 * n * detail::heat_kernel(lambda0, temperature, c);
}

/// Leading low-temperature coefficients:
///   U1(T) ~ (1/5) pi^4 c0 K^4 T^4 / hbar^3,
///   C(T)  ~ (4/5) pi^4 c0 K^4 T^3 / hbar^3.
struct T3Coefficients {
    double internal_energy = 0.0;
    double specific_heat = 0.0;
};

inline T3Coefficients t3_coefficients(double c0, const PhysicalConstants& c = {}) {
    if (!(c0 > 0.0)) throw std::invalid_argument("t3_coefficients: c0 must be positive");
    const double pi4 = std::pow(std::numbers::pi, 4);
    const double k4h3 = std::pow(c.boltzmann, 4) / std::pow(c.hbar, 3);
    return {0.2 * pi4 * c0 * k4h3, 0.8 * pi4 * c0 * k4h3};
}

struct ThermoCurve {
    std::vector<double> temperatures;
    std::vector<double> u1;
    std::vector<double> c;
};

/// Log-spaced temperature sweep of U1 and C over the samples.
inline ThermoCurve make_thermo_curve(const SpectralSamples& s, double tmin,
                                     double tmax, int steps,
                                     const PhysicalConstants& consts = {}) {
    if (!(tmin > 0.0) || !(tmax > tmin))
        throw std::invalid_argument("make_thermo_curve: need 0 < tmin < tmax");
    if (steps < 2) throw std::invalid_argument("make_thermo_curve: steps must be >= 2");
    ThermoCurve curve;
    const double ratio = std::log(tmax / tmin);
    for (int i = 0; i < steps; ++i) {
        const double t = tmin * std::exp(ratio * i / (steps - 1));
        curve.temperatures.push_back(t);
        curve.u1.push_back(internal_energy(s, t, consts));
        curve.c.push_back(specific_heat(s, t, consts));
    }
    return curve;
}

}  // namespace latvib
