#pragma once

/// @file
///
/// Long-wavelength acoustics. The 3x3 acoustic matrix
///   A_chi = (2 pi^2 / m(V0)) sum_e (chi . v(e))^2 A(e)
/// has the squared sound speeds as eigenvalues; integrating the inverse
/// cubes of the speeds over the unit sphere yields the coefficient c0 of the
/// low-frequency law phi(lambda) ~ c0 lambda^{3/2}. The continuum elastic
/// tensor, the isotropic (Lame) reduction and the heat-trace check of the
/// continuum limit live here as cross-validations of the same quantities.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "latvib/bloch.hpp"
#include "latvib/lattice.hpp"
#include "latvib/quadrature.hpp"

namespace latvib {

struct AcousticTensor {
    Vec3 direction{};
    Mat3 matrix;  // symmetric, positive definite for direction != 0
};

inline AcousticTensor acoustic_matrix(const CrystalSpec& crystal, const Vec3& chi) {
    Mat3 acc = Mat3::zero();
    for (const auto& e : crystal.edges) {
        const double proj = dot(chi, e.bond);
        acc = acc + (proj * proj) * e.force;
    }
    const double factor =
        2.0 * std::numbers::pi * std::numbers::pi / crystal.total_mass();
    return {chi, factor * acc};
}

namespace detail {

inline std::array<double, 3> acoustic_eigenvalues(const Mat3& m) {
    SymmetricMatrix s(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) s.set(i, j, m(i, j));
    const auto eig = eigh_symmetric(s);
    return {eig.values[0], eig.values[1], eig.values[2]};
}

}  // namespace detail

struct SoundSpeeds {
    Vec3 direction{};
    std::array<double, 3> speeds{};  // ascending
};

/// Ascending sound speeds along a unit direction: square roots of the
/// acoustic matrix eigenvalues.
inline SoundSpeeds sound_speeds(const CrystalSpec& crystal, const Vec3& omega) {
    if (std::abs(norm(omega) - 1.0) > 1e-12)
        throw std::invalid_argument("sound_speeds: direction must be a unit vector");
    const auto ev = detail::acoustic_eigenvalues(acoustic_matrix(crystal, omega).matrix);
    SoundSpeeds s;
    s.direction = omega;
    for (int i = 0; i < 3; ++i) {
        if (ev[i] <= 0.0)
            throw std::runtime_error("sound_speeds: nonpositive squared speed");
        s.speeds[i] = std::sqrt(ev[i]);
    }
    return s;
}

/// Finite-scale check of the linear dispersion law: the three lowest
/// dispersion eigenvalues at the character t*chi, divided by t^2. These
/// ratios converge to the eigenvalues of A_chi as t goes to zero.
inline std::array<double, 3> linear_dispersion_limit(const CrystalSpec& crystal,
                                                     const Vec3& chi, double t) {
    if (!(t > 0.0) || t > 0.1)
        throw std::invalid_argument("linear_dispersion_limit: t must be in (0, 0.1]");
    const Character c = character_from_cartesian(crystal.basis, t * chi);
    const std::vector<double> vals = dispersion(crystal, c);
    return {vals[0] / (t * t), vals[1] / (t * t), vals[2] / (t * t)};
}

/// Debye constant by spherical quadrature:
///   c0 = (V/3) int_{S^2} sum_a s_a(Omega)^{-3} dOmega.
inline double c0_quadrature(const CrystalSpec& crystal, int order) {
    if (order < 4) throw std::invalid_argument("c0_quadrature: order must be >= 4");
    const QuadratureRule rule = sphere_rule(order);
    const double integral = integrate_sphere(
        [&](const Vec3& omega) {
            const auto s = sound_speeds(crystal, omega);
            return 1.0 / (s.speeds[0] * s.speeds[0] * s.speeds[0]) +
                   1.0 / (s.speeds[1] * s.speeds[1] * s.speeds[1]) +
                   1.0 / (s.speeds[2] * s.speeds[2] * s.speeds[2]);
        },
        rule);
    return crystal.basis.volume / 3.0 * integral;
}

/// Continuum elastic tensor blocks A_ij = (1/2V) sum_e v(e)_i v(e)_j A(e)
/// plus the mass density.
struct ElasticTensor {
    std::array<std::array<Mat3, 3>, 3> blocks{};
    double density = 0.0;

    /// Contraction M(chi) = sum_ij chi_i chi_j A_ij.
    Mat3 contract(const Vec3& chi) const {
        Mat3 acc = Mat3::zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) acc = acc + (chi[i] * chi[j]) * blocks[i][j];
        return acc;
    }
};

/// Builds the elastic tensor and verifies the summation identity
/// A_chi = (4 pi^2 / rho) sum_ij chi_i chi_j A_ij on a fixed direction set.
inline ElasticTensor elastic_tensor(const CrystalSpec& crystal) {
    ElasticTensor t;
    t.density = crystal.density();
    const double factor = 1.0 / (2.0 * crystal.basis.volume);
    for (const auto& e : crystal.edges)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t.blocks[i][j] = t.blocks[i][j] + (factor * e.bond[i] * e.bond[j]) * e.force;

    std::mt19937 rng(8211u);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial) {
        Vec3 chi = {gauss(rng), gauss(rng), gauss(rng)};
        const double nn = norm(chi);
        chi = (1.0 / nn) * chi;
        const Mat3 lhs = acoustic_matrix(crystal, chi).matrix;
        const Mat3 rhs = (4.0 * std::numbers::pi * std::numbers::pi / t.density) *
                         t.contract(chi);
        const double scale = std::max(max_abs(lhs), 1.0);
        if (max_abs(lhs - rhs) > 1e-10 * scale)
            throw std::runtime_error(
                "elastic_tensor: acoustic-matrix consistency identity failed");
    }
    return t;
}

/// Isotropic (Lame) fit of the elastic tensor. a and b are reported without
/// a sign restriction; degenerate lattices can produce a <= 0 with the
/// velocities still real.
struct LameFit {
    double a = 0.0;
    double b = 0.0;
    double c_l = 0.0;  // sqrt((a + 2b) / rho)
    double c_t = 0.0;  // sqrt(b / rho)
    double residual = 0.0;
    bool a_positive = false;
};

namespace detail {

/// The 26 normalized nonzero vectors of {-1,0,1}^3 plus 24 unit vectors from
/// a fixed seed: a deterministic overdetermined design for the Lame fit.
inline std::vector<Vec3> isotropy_directions() {
    std::vector<Vec3> dirs;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                Vec3 v = {static_cast<double>(i), static_cast<double>(j),
                          static_cast<double>(k)};
                dirs.push_back((1.0 / norm(v)) * v);
            }
    std::mt19937 rng(462901u);
    std::normal_distribution<double> gauss;
    while (dirs.size() < 50) {
        Vec3 v = {gauss(rng), gauss(rng), gauss(rng)};
        const double nn = norm(v);
        if (nn < 1e-3) continue;
        dirs.push_back((1.0 / nn) * v);
    }
    return dirs;
}

}  // namespace detail

/// Least-squares fit of M(chi) = (a+b) chi chi^T + b |chi|^2 I over the
/// direction design; empty when the residual exceeds tol * scale or the
/// fitted b admits no real transverse velocity.
inline std::optional<LameFit> fit_lame(const ElasticTensor& tensor, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("fit_lame: tol must be positive");
    const std::vector<Vec3> dirs = detail::isotropy_directions();
    // Normal equations in p = a+b, q = b with Frobenius inner products
    // <X,X> = <X,I> = D and <I,I> = 3D for D unit directions.
    const double d = static_cast<double>(dirs.size());
    double rx = 0.0, ri = 0.0, msq = 0.0;
    std::vector<Mat3> ms(dirs.size());
    for (size_t k = 0; k < dirs.size(); ++k) {
        ms[k] = tensor.contract(dirs[k]);
        const Vec3& chi = dirs[k];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                rx += ms[k](i, j) * chi[i] * chi[j];
                msq += ms[k](i, j) * ms[k](i, j);
            }
        ri += trace(ms[k]);
    }
    // Solve [[D, D], [D, 3D]] (p, q)^T = (rx, ri)^T.
    const double q = (ri - rx) / (2.0 * d);
    const double p = rx / d - q;

    double res2 = 0.0;
    for (size_t k = 0; k < dirs.size(); ++k) {
        const Vec3& chi = dirs[k];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double model = p * chi[i] * chi[j] + (i == j ? q : 0.0);
                const double r = ms[k](i, j) - model;
                res2 += r * r;
            }
    }
    const double scale = std::sqrt(msq / d);
    const double residual = std::sqrt(res2 / d);
    if (residual > tol * scale) return std::nullopt;

    LameFit fit;
    fit.a = p - q;
    fit.b = q;
    fit.residual = residual;
    fit.a_positive = fit.a > 0.0;
    if (!(fit.b > 0.0) || !(fit.a + 2.0 * fit.b > 0.0)) return std::nullopt;
    fit.c_l = std::sqrt((fit.a + 2.0 * fit.b) / tensor.density);
    fit.c_t = std::sqrt(fit.b / tensor.density);
    return fit;
}

inline std::optional<LameFit> isotropy_fit(const CrystalSpec& crystal, double tol) {
    return fit_lame(elastic_tensor(crystal), tol);
}

/// Closed form for the isotropic continuum:
///   c0 = (V / 6 pi^2) (1/c_l^3 + 2/c_t^3).
inline double c0_isotropic(double c_l, double c_t, double volume) {
    if (!(c_l > 0.0) || !(c_t > 0.0) || !(volume > 0.0))
        throw std::invalid_argument("c0_isotropic: inputs must be positive");
    return volume / (6.0 * std::numbers::pi * std::numbers::pi) *
           (1.0 / (c_l * c_l * c_l) + 2.0 / (c_t * c_t * c_t));
}

/// Integrated density of states of the limiting elastic continuum.
inline double continuum_ids(double c0, double lambda) {
    if (!(c0 > 0.0)) throw std::invalid_argument("continuum_ids: c0 must be positive");
    return lambda <= 0.0 ? 0.0 : c0 * std::pow(lambda, 1.5);
}

/// Trace of the continuum heat kernel at time t, evaluated by spherical
/// quadrature and checked against the closed form (3/4) sqrt(pi) c0 t^{-3/2}.
inline double continuum_heat_trace(const CrystalSpec& crystal, double t, int order) {
    if (!(t > 0.0))
        throw std::invalid_argument("continuum_heat_trace: t must be positive");
    const QuadratureRule rule = sphere_rule(order);
    const double integral = integrate_sphere(
        [&](const Vec3& omega) {
            const auto s = sound_speeds(crystal, omega);
            return 1.0 / (s.speeds[0] * s.speeds[0] * s.speeds[0]) +
                   1.0 / (s.speeds[1] * s.speeds[1] * s.speeds[1]) +
                   1.0 / (s.speeds[2] * s.speeds[2] * s.speeds[2]);
        },
        rule);
    const double value = std::sqrt(std::numbers::pi) / 4.0 * crystal.basis.volume *
                         std::pow(t, -1.5) * integral;
    const double closed = 0.75 * std::sqrt(std::numbers::pi) *
                          c0_quadrature(crystal, order) * std::pow(t, -1.5);
    if (std::abs(value - closed) > 1e-10 * std::abs(closed))
        throw std::runtime_error(
            "continuum_heat_trace: quadrature and closed form disagree");
    return value;
}

}  // namespace latvib
