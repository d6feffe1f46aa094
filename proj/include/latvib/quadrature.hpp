#pragma once

/// @file
///
/// Gauss-Legendre quadrature, a product rule on the unit sphere, and the
/// improper integrals showing up in phonon thermodynamics (Bose integrals,
/// Laplace transforms of spectral densities).

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "latvib/linalg.hpp"

namespace latvib {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// Nodes and weights via Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    GaussLegendre r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

template <class F>
double integrate_gl(F&& f, double a, double b, const GaussLegendre& gl) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * f(mid + hw * gl.nodes[i]);
    return hw * acc;
}

/// Composite Gauss-Legendre on [a, b], doubling the panel count until two
/// successive estimates agree to rel_tol.
template <class F>
double integrate_finite(F&& f, double a, double b, double rel_tol = 1e-12,
                        int gl_points = 24) {
    const GaussLegendre gl = gauss_legendre(gl_points);
    double prev = integrate_gl(f, a, b, gl);
    for (int panels = 2; panels <= 4096; panels *= 2) {
        double acc = 0.0;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p)
            acc += integrate_gl(f, a + p * h, a + (p + 1) * h, gl);
        if (std::abs(acc - prev) <= rel_tol * std::max(std::abs(acc), 1e-300))
            return acc;
        prev = acc;
    }
    return prev;
}

/// Integral of f over (0, inf) for integrands with exponential-type decay.
/// The substitution x = -log u maps (0,1] panels u in [2^-(k+1), 2^-k] onto
/// uniform x-panels of width log 2; panels are accumulated until they stop
/// contributing relative to the running total.
template <class F>
double integrate_to_inf(F&& f, int gl_points = 32, double rel_tol = 1e-14) {
    const GaussLegendre gl = gauss_legendre(gl_points);
    const double width = std::numbers::ln2;
    double acc = 0.0;
    int quiet = 0;
    for (int k = 0; k < 4096; ++k) {
        const double part = integrate_gl(f, k * width, (k + 1) * width, gl);
        acc += part;
        if (k >= 8 && std::abs(part) <= rel_tol * std::max(std::abs(acc), 1e-300)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    return acc;
}

enum class BoseKind { plain, squared };

/// The two Bose-type integrals used by the low-temperature laws:
///   plain:   int_0^inf x^p / (e^x - 1) dx
///   squared: int_0^inf x^p e^x / (e^x - 1)^2 dx
inline double bose_integral(int p, BoseKind kind, int gl_points = 32) {
    if (p != 3 && p != 4)
        throw std::invalid_argument("bose_integral: unsupported exponent");
    if (kind == BoseKind::plain) {
        return integrate_to_inf(
            [p](double x) {
                const double e = std::exp(-x);
                return std::pow(x, p) * e / (1.0 - e);
            },
            gl_points);
    }
    return integrate_to_inf(
        [p](double x) {
            const double e = std::exp(-x);
            const double d = 1.0 - e;
            return std::pow(x, p) * e / (d * d);
        },
        gl_points);
}

/// Quadrature rule on the unit sphere; weights sum to 4*pi.
struct QuadratureRule {
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    double weight_sum() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

/// Product rule: `order` Gauss-Legendre nodes in cos(theta) times 2*order
/// uniform azimuthal nodes.
inline QuadratureRule sphere_rule(int order) {
    if (order < 2) throw std::invalid_argument("sphere_rule: order must be >= 2");
    const GaussLegendre gl = gauss_legendre(order);
    const int nphi = 2 * order;
    const double wphi = 2.0 * std::numbers::pi / nphi;
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<size_t>(order) * nphi);
    rule.weights.reserve(static_cast<size_t>(order) * nphi);
    for (int i = 0; i < order; ++i) {
        const double c = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < nphi; ++j) {
            const double phi = wphi * j;
            rule.nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
            rule.weights.push_back(gl.weights[i] * wphi);
        }
    }
    return rule;
}

template <class F>
double integrate_sphere(F&& f, const QuadratureRule& rule) {
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

}  // namespace latvib
