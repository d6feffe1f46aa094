#pragma once

/// @file
///
/// Crystal lattices as periodic graphs: a translation lattice basis, vertex
/// classes (atoms of the quotient graph) and oriented edge classes carrying
/// 3x3 force-constant matrices. Includes the admissibility check on the
/// force matrices and builders for the cubic and diamond example lattices.

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "latvib/linalg.hpp"

namespace latvib {

/// Raised when a crystal description violates a structural invariant.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Admissibility threshold for the per-vertex force-matrix tensor sum,
/// in force units times length units. Hand-authored lattices produce
/// residuals that are either ~0 or O(1).
inline constexpr double kRotationInvarianceTol = 1e-9;

struct LatticeBasis {
    std::array<Vec3, 3> vectors;       // rows b_i spanning the lattice L
    std::array<Vec3, 3> dual_vectors;  // b*_j with b_i . b*_j = delta_ij
    double volume = 0.0;

    Vec3 cartesian(const Vec3& frac) const {
        return frac[0] * vectors[0] + frac[1] * vectors[1] + frac[2] * vectors[2];
    }
    Vec3 cartesian(const std::array<int, 3>& shift) const {
        return cartesian(Vec3{static_cast<double>(shift[0]),
                              static_cast<double>(shift[1]),
                              static_cast<double>(shift[2])});
    }
    /// Coordinates of a Cartesian vector in the lattice basis.
    Vec3 fractional(const Vec3& cart) const {
        return {dot(cart, dual_vectors[0]), dot(cart, dual_vectors[1]),
                dot(cart, dual_vectors[2])};
    }
    Vec3 dual_cartesian(const Vec3& kfrac) const {
        return kfrac[0] * dual_vectors[0] + kfrac[1] * dual_vectors[1] +
               kfrac[2] * dual_vectors[2];
    }
};

inline LatticeBasis make_basis(const std::array<Vec3, 3>& rows) {
    Mat3 b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(i, j) = rows[i][j];
    const double d = det(b);
    double scale = 0.0;
    for (const auto& r : rows) scale = std::max(scale, norm(r));
    if (std::abs(d) <= 1e-12 * scale * scale * scale)
        throw SpecError("singular basis");
    LatticeBasis basis;
    basis.vectors = rows;
    basis.volume = std::abs(d);
    // Dual vectors are the columns of B^{-1}.
    const Mat3 binv = inverse(b);
    for (int j = 0; j < 3; ++j)
        basis.dual_vectors[j] = {binv(0, j), binv(1, j), binv(2, j)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(dot(basis.vectors[i], basis.dual_vectors[j]) - expect) >
                1e-12)
                throw SpecError("dual basis fails biorthogonality");
        }
    return basis;
}

struct VertexClass {
    std::string id;
    Vec3 position{};  // Cartesian
    double mass = 0.0;
};

/// One oriented edge class of the quotient graph. `shift` holds integer
/// coordinates in the lattice basis; the Cartesian bond vector is
/// v(e) = position(terminus) + B*shift - position(origin).
struct EdgeClass {
    int origin = 0;
    int terminus = 0;
    std::array<int, 3> shift{};
    Mat3 force;
    Vec3 bond{};
};

/// One bond as declared in a document or by a builder (single orientation;
/// the reverse edge is generated on construction).
struct BondDecl {
    std::string from;
    std::string to;
    std::array<int, 3> shift{};
    Mat3 matrix;
};

struct CrystalSpec {
    std::string name;
    LatticeBasis basis;
    std::vector<VertexClass> vertices;
    std::vector<EdgeClass> edges;  // closed under reversal

    int atom_count() const { return static_cast<int>(vertices.size()); }
    int branch_count() const { return 3 * atom_count(); }
    double total_mass() const {
        double m = 0.0;
        for (const auto& v : vertices) m += v.mass;
        return m;
    }
    double density() const { return total_mass() / basis.volume; }
};

namespace detail {

inline void check_force_matrix(const Mat3& a) {
    const double scale = std::max(max_abs(a), 1e-300);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
                throw SpecError("non-symmetric force matrix");
    SymmetricMatrix s(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    const auto eig = eigh_symmetric(s);
    if (eig.values.front() <= 1e-12 * scale)
        throw SpecError("non-positive-definite force matrix");
}

}  // namespace detail

/// Assembles and validates a crystal from declared bonds. Reverse edges are
/// added with negated shift, exactly negated bond vector and transposed
/// matrix, so reversal closure holds bit for bit.
inline CrystalSpec make_crystal(std::string name, const std::array<Vec3, 3>& basis_rows,
                                std::vector<VertexClass> vertices,
                                const std::vector<BondDecl>& bonds) {
    CrystalSpec c;
    c.name = std::move(name);
    c.basis = make_basis(basis_rows);
    if (vertices.empty()) throw SpecError("crystal needs at least one vertex");
    for (const auto& v : vertices)
        if (!(v.mass > 0.0)) throw SpecError("nonpositive mass");
    for (size_t i = 0; i < vertices.size(); ++i)
        for (size_t j = i + 1; j < vertices.size(); ++j) {
            if (vertices[i].id == vertices[j].id)
                throw SpecError("duplicate vertex id '" + vertices[i].id + "'");
            const Vec3 d = c.basis.fractional(vertices[j].position - vertices[i].position);
            bool integral = true;
            for (double x : d)
                if (std::abs(x - std::round(x)) > 1e-9) integral = false;
            if (integral)
                throw SpecError("vertex positions coincide modulo the lattice");
        }
    c.vertices = std::move(vertices);

    auto vertex_index = [&](const std::string& id) {
        for (size_t i = 0; i < c.vertices.size(); ++i)
            if (c.vertices[i].id == id) return static_cast<int>(i);
        throw SpecError("dangling edge endpoint '" + id + "'");
    };

    std::vector<int> comp(c.vertices.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return comp[x] == x ? x : comp[x] = find(comp[x]);
    };

    for (const auto& b : bonds) {
        EdgeClass e;
        e.origin = vertex_index(b.from);
        e.terminus = vertex_index(b.to);
        e.shift = b.shift;
        detail::check_force_matrix(b.matrix);
        // Store the exactly symmetrized matrix; downstream assembly relies
        // on force(i,j) == force(j,i) holding bit for bit.
        for (int i = 0; i < 3; ++i) {
            e.force(i, i) = b.matrix(i, i);
            for (int j = i + 1; j < 3; ++j) {
                const double s = 0.5 * (b.matrix(i, j) + b.matrix(j, i));
                e.force(i, j) = s;
                e.force(j, i) = s;
            }
        }
        e.bond = c.vertices[e.terminus].position + c.basis.cartesian(e.shift) -
                 c.vertices[e.origin].position;
        if (norm(e.bond) <= 1e-12)
            throw SpecError("degenerate bond with zero bond vector");
        EdgeClass r;
        r.origin = e.terminus;
        r.terminus = e.origin;
        r.shift = {-e.shift[0], -e.shift[1], -e.shift[2]};
        r.force = transpose(e.force);
        r.bond = -e.bond;
        c.edges.push_back(e);
        c.edges.push_back(r);
        comp[find(e.origin)] = find(e.terminus);
    }

    int roots = 0;
    for (size_t i = 0; i < c.vertices.size(); ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i)) ++roots;
    if (roots != 1) throw SpecError("quotient graph is disconnected");
    return c;
}

/// Maximum over vertices of the max-abs entry of the tensor
/// sum_{e at x} A(e)_{ij} v(e)_k. Zero for admissible crystals.
inline double validate_rotation_invariance(const CrystalSpec& c) {
    double worst = 0.0;
    for (int x = 0; x < c.atom_count(); ++x) {
        std::array<double, 27> tensor{};
        for (const auto& e : c.edges) {
            if (e.origin != x) continue;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        tensor[9 * i + 3 * j + k] += e.force(i, j) * e.bond[k];
        }
        for (double t : tensor) worst = std::max(worst, std::abs(t));
    }
    return worst;
}

inline bool is_admissible(const CrystalSpec& c) {
    return validate_rotation_invariance(c) <= kRotationInvarianceTol;
}

/// Simple cubic lattice: one atom, six oriented edges along the axes, scalar
/// force matrices stiffness * I. The quotient graph is the 3-bouquet.
inline CrystalSpec build_cubic(double mass, double stiffness) {
    if (!(mass > 0.0) || !(stiffness > 0.0))
        throw std::invalid_argument("build_cubic: mass and stiffness must be positive");
    const std::array<Vec3, 3> basis = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    std::vector<VertexClass> verts = {{"a", {0, 0, 0}, mass}};
    const Mat3 m = stiffness * Mat3::identity();
    std::vector<BondDecl> bonds = {
        {"a", "a", {1, 0, 0}, m},
        {"a", "a", {0, 1, 0}, m},
        {"a", "a", {0, 0, 1}, m},
    };
    return make_crystal("cubic", basis, std::move(verts), bonds);
}

/// Diamond lattice on the fcc translation lattice generated by e1+e2, e2+e3,
/// e3+e1 (cell volume 2), two atoms at 0 and (1/2,1/2,1/2), four bonds with
/// scalar force matrices.
inline CrystalSpec build_diamond(double mass_a, double mass_b, double stiffness) {
    if (!(mass_a > 0.0) || !(mass_b > 0.0) || !(stiffness > 0.0))
        throw std::invalid_argument("build_diamond: inputs must be positive");
    const std::array<Vec3, 3> basis = {Vec3{1, 1, 0}, Vec3{0, 1, 1}, Vec3{1, 0, 1}};
    std::vector<VertexClass> verts = {{"a", {0, 0, 0}, mass_a},
                                      {"b", {0.5, 0.5, 0.5}, mass_b}};
    const Mat3 m = stiffness * Mat3::identity();
    // Bond vectors from "a": (1/2)(1,1,1), (1/2)(-1,-1,1), (1/2)(1,-1,-1),
    // (1/2)(-1,1,-1); shifts expressed in the basis above.
    std::vector<BondDecl> bonds = {
        {"a", "b", {0, 0, 0}, m},
        {"a", "b", {-1, 0, 0}, m},
        {"a", "b", {0, -1, 0}, m},
        {"a", "b", {0, 0, -1}, m},
    };
    return make_crystal("diamond", basis, std::move(verts), bonds);
}

}  // namespace latvib
