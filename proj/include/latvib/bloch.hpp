#pragma once

/// @file
///
/// Bloch decomposition of the lattice vibration operator. For a character
/// chi of the translation lattice the twisted operator acts on C^{3n}; after
/// symmetrization with diag(sqrt(m)) it becomes an ordinary Hermitian matrix
/// with unchanged spectrum. A periodic supercell operator provides an
/// independent spectral oracle: its eigenvalue multiset must equal the union
/// of the Bloch spectra over the commensurate character grid.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "latvib/lattice.hpp"
#include "latvib/linalg.hpp"

namespace latvib {

/// A unitary character of the translation lattice, stored as fractional
/// coordinates k in the dual basis with the Cartesian vector derived.
struct Character {
    Vec3 fractional{};
    Vec3 cartesian{};
};

inline Character make_character(const LatticeBasis& basis, const Vec3& kfrac) {
    return {kfrac, basis.dual_cartesian(kfrac)};
}

inline Character character_from_cartesian(const LatticeBasis& basis,
                                          const Vec3& chi) {
    return {{dot(chi, basis.vectors[0]), dot(chi, basis.vectors[1]),
             dot(chi, basis.vectors[2])},
            chi};
}

struct BlochMatrix {
    Character character;
    HermitianMatrix matrix;
};

/// Builds the mass-symmetrized negative twisted operator at chi:
///   H(x,y) = delta_xy (1/m(x)) sum_{e at x} A(e)
///            - (m(x) m(y))^{-1/2} sum_{e: x->y} A(e) exp(2 pi i chi.v(e)).
/// Phases of an edge and its reverse are exact conjugates because reverse
/// bond vectors are stored exactly negated, so the accumulated matrix is
/// Hermitian to the last bit; construction mirrors the upper triangle.
inline BlochMatrix assemble_bloch(const CrystalSpec& crystal, const Character& chi) {
    const int n = crystal.atom_count();
    const int dim = 3 * n;
    std::vector<std::complex<double>> buf(static_cast<size_t>(dim) * dim,
                                          std::complex<double>(0.0, 0.0));
    auto at = [&](int i, int j) -> std::complex<double>& {
        return buf[static_cast<size_t>(i) * dim + j];
    };
    std::vector<double> sqm(n);
    for (int x = 0; x < n; ++x) sqm[x] = std::sqrt(crystal.vertices[x].mass);

    for (const auto& e : crystal.edges) {
        const double theta = 2.0 * std::numbers::pi * dot(chi.cartesian, e.bond);
        const std::complex<double> phase(std::cos(theta), std::sin(theta));
        const double mo = crystal.vertices[e.origin].mass;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                at(3 * e.origin + i, 3 * e.origin + j) += e.force(i, j) / mo;
                at(3 * e.origin + i, 3 * e.terminus + j) -=
                    e.force(i, j) * phase / (sqm[e.origin] * sqm[e.terminus]);
            }
        }
    }

    HermitianMatrix h(dim);
    const double scale = [&] {
        double s = 0.0;
        for (const auto& z : buf) s = std::max(s, std::abs(z));
        return std::max(s, 1e-300);
    }();
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const std::complex<double> upper = at(i, j);
            if (std::abs(upper - std::conj(at(j, i))) > 1e-12 * scale)
                throw std::runtime_error("assemble_bloch: assembly lost Hermiticity");
            h.set(i, j, upper);
        }
    }
    return {chi, std::move(h)};
}

/// Ascending eigenvalues of the Bloch matrix; values within the noise band
/// [-1e-10 * max|lambda|, 0) are clamped to zero so that sqrt(lambda) stays
/// well defined at the zone center.
inline std::vector<double> dispersion(const CrystalSpec& crystal,
                                      const Character& chi) {
    const BlochMatrix bm = assemble_bloch(crystal, chi);
    std::vector<double> vals = eigh_hermitian(bm.matrix).values;
    const double top = std::abs(vals.back());
    for (double& v : vals)
        if (v < 0.0 && v >= -1e-10 * std::max(top, 1.0)) v = 0.0;
    return vals;
}

inline std::vector<double> dispersion(const CrystalSpec& crystal, const Vec3& kfrac) {
    return dispersion(crystal, make_character(crystal.basis, kfrac));
}

struct DispersionRow {
    int segment = 0;
    double t = 0.0;  // position along the path, in segment units
    Vec3 kfrac{};
    std::vector<double> branches;
};

struct DispersionTable {
    std::vector<DispersionRow> rows;
};

/// Samples the dispersion along straight segments between consecutive
/// fractional waypoints, `steps` intervals per segment.
inline DispersionTable band_path(const CrystalSpec& crystal,
                                 const std::vector<Vec3>& waypoints, int steps) {
    if (waypoints.size() < 2)
        throw std::invalid_argument("band_path: need at least two waypoints");
    if (steps < 1) throw std::invalid_argument("band_path: steps must be >= 1");
    DispersionTable table;
    for (size_t s = 0; s + 1 < waypoints.size(); ++s) {
        const Vec3& a = waypoints[s];
        const Vec3& b = waypoints[s + 1];
        const int first = (s == 0) ? 0 : 1;  // avoid duplicating shared points
        for (int i = first; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            const Vec3 k = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
                            a[2] + t * (b[2] - a[2])};
            DispersionRow row;
            row.segment = static_cast<int>(s);
            row.t = t;
            row.kfrac = k;
            row.branches = dispersion(crystal, k);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

/// Mass-symmetrized operator on displacements periodic under N times the
/// lattice, as a real symmetric matrix of dimension 3n N^3. Couplings wrap
/// modulo N in each lattice direction.
inline SymmetricMatrix supercell_operator(const CrystalSpec& crystal, int N,
                                          int dimension_cap = 1000) {
    if (N < 1) throw std::invalid_argument("supercell_operator: N must be >= 1");
    const int n = crystal.atom_count();
    const long dim = 3L * n * N * N * N;
    if (dim > dimension_cap)
        throw std::invalid_argument(
            "supercell_operator: dimension exceeds the desk-scale cap");

    std::vector<double> buf(static_cast<size_t>(dim) * dim, 0.0);
    auto at = [&](long i, long j) -> double& {
        return buf[static_cast<size_t>(i) * dim + j];
    };
    auto cell_index = [&](int c1, int c2, int c3) {
        return (static_cast<long>(c1) * N + c2) * N + c3;
    };
    auto row = [&](long cell, int vertex, int coord) {
        return (cell * n + vertex) * 3 + coord;
    };
    std::vector<double> sqm(n);
    for (int x = 0; x < n; ++x) sqm[x] = std::sqrt(crystal.vertices[x].mass);
    auto wrap = [N](int c) { return ((c % N) + N) % N; };

    for (int c1 = 0; c1 < N; ++c1)
        for (int c2 = 0; c2 < N; ++c2)
            for (int c3 = 0; c3 < N; ++c3) {
                const long cell = cell_index(c1, c2, c3);
                for (const auto& e : crystal.edges) {
                    const long tcell = cell_index(wrap(c1 + e.shift[0]),
                                                  wrap(c2 + e.shift[1]),
                                                  wrap(c3 + e.shift[2]));
                    const double mo = crystal.vertices[e.origin].mass;
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) {
                            at(row(cell, e.origin, i), row(cell, e.origin, j)) +=
                                e.force(i, j) / mo;
                            at(row(cell, e.origin, i), row(tcell, e.terminus, j)) -=
                                e.force(i, j) / (sqm[e.origin] * sqm[e.terminus]);
                        }
                }
            }

    SymmetricMatrix m(static_cast<int>(dim));
    double scale = 1e-300;
    for (double x : buf) scale = std::max(scale, std::abs(x));
    for (long i = 0; i < dim; ++i)
        for (long j = i; j < dim; ++j) {
            if (std::abs(at(i, j) - at(j, i)) > 1e-12 * scale)
                throw std::runtime_error("supercell_operator: assembly lost symmetry");
            m.set(static_cast<int>(i), static_cast<int>(j), at(i, j));
        }
    return m;
}

/// Ascending eigenvalues of the periodic supercell operator.
inline std::vector<double> supercell_spectrum(const CrystalSpec& crystal, int N,
                                              int dimension_cap = 1000) {
    return eigh_symmetric(supercell_operator(crystal, N, dimension_cap)).values;
}

/// Connectivity certificate for the covering graph: the N=3 supercell
/// operator must have eigenvalue zero with multiplicity exactly three.
inline bool connectivity_certificate(const CrystalSpec& crystal) {
    const std::vector<double> vals = supercell_spectrum(crystal, 3);
    const double tol = 1e-8 * std::max(std::abs(vals.back()), 1.0);
    int zeros = 0;
    for (double v : vals)
        if (std::abs(v) <= tol) ++zeros;
    return zeros == 3;
}

}  // namespace latvib
