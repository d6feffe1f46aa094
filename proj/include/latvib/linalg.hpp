#pragma once

/// @file
///
/// Small fixed-size vector/matrix types and dense symmetric/Hermitian
/// eigensolvers. Everything here is self-contained; matrices at the scales
/// this library works with (3n x 3n Bloch matrices, supercell operators of
/// dimension a few hundred) are handled by cyclic Jacobi sweeps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace latvib {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Dense 3x3 real matrix, row-major.
struct Mat3 {
    std::array<double, 9> a{};

    static Mat3 identity() {
        Mat3 m;
        m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return m;
    }
    static Mat3 zero() { return Mat3{}; }

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }
};

inline Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}
inline Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}
inline Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
    return r;
}
inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
            m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
            m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

inline double det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Inverse via the adjugate; throws on a singular matrix.
inline Mat3 inverse(const Mat3& m) {
    const double d = det(m);
    if (d == 0.0) throw std::runtime_error("singular 3x3 matrix");
    Mat3 r;
    r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
    r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
    r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
    r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
    r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
    r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
    r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
    r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
    r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    return r;
}

inline double max_abs(const Mat3& m) {
    double r = 0.0;
    for (double x : m.a) r = std::max(r, std::abs(x));
    return r;
}

inline double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

/// Dense real symmetric matrix. set() writes both (i,j) and (j,i), so the
/// symmetry invariant holds exactly by construction.
class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(int dim)
        : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0) {
        if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    }

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }
    double max_abs() const {
        double r = 0.0;
        for (double x : a_) r = std::max(r, std::abs(x));
        return r;
    }

  private:
    size_t idx(int i, int j) const {
        return static_cast<size_t>(i) * dim_ + j;
    }
    int dim_;
    std::vector<double> a_;
};

/// Dense complex Hermitian matrix; set() mirrors the conjugate entry.
class HermitianMatrix {
  public:
    using cplx = std::complex<double>;

    explicit HermitianMatrix(int dim)
        : dim_(dim), a_(static_cast<size_t>(dim) * dim, cplx(0.0, 0.0)) {
        if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    }

    int dim() const { return dim_; }
    cplx operator()(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, cplx v) {
        if (i == j) v = cplx(v.real(), 0.0);
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = std::conj(v);
    }

    double max_abs() const {
        double r = 0.0;
        for (const cplx& x : a_)
            r = std::max({r, std::abs(x.real()), std::abs(x.imag())});
        return r;
    }
    cplx trace() const {
        cplx t(0.0, 0.0);
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

  private:
    size_t idx(int i, int j) const {
        return static_cast<size_t>(i) * dim_ + j;
    }
    int dim_;
    std::vector<cplx> a_;
};

/// Eigenvalues ascending; eigenvectors stored column-major,
/// vectors[j * dim + i] = component i of the eigenvector for values[j].
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<double> vectors;
    int dim = 0;

    double vec(int i, int j) const {
        return vectors[static_cast<size_t>(j) * dim + i];
    }
};

struct HermitianEigen {
    std::vector<double> values;
    std::vector<std::complex<double>> vectors;  // column-major as above
    int dim = 0;

    std::complex<double> vec(int i, int j) const {
        return vectors[static_cast<size_t>(j) * dim + i];
    }
};

/// Cyclic Jacobi with threshold sweeps. Dimensions here stay in the low
/// hundreds, where Jacobi is accurate and has no dependencies.
inline SymmetricEigen eigh_symmetric(const SymmetricMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i) * n + j] = m(i, j);
    std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

    auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<size_t>(i) * n + j]; };

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off += std::abs(A(p, q));
        if (off == 0.0) break;
        // Early sweeps only rotate entries above a shrinking threshold.
        const double thresh = (sweep < 3) ? 0.2 * off / (n * n) : 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(A(p, p)) + g == std::abs(A(p, p)) &&
                    std::abs(A(q, q)) + g == std::abs(A(q, q))) {
                    A(p, q) = A(q, p) = 0.0;
                    continue;
                }
                if (std::abs(apq) <= thresh) continue;
                const double h = A(q, q) - A(p, p);
                double t;
                if (std::abs(h) + g == std::abs(h)) {
                    t = apq / h;
                } else {
                    const double theta = 0.5 * h / apq;
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double delta = t * apq;
                A(p, p) -= delta;
                A(q, q) += delta;
                A(p, q) = A(q, p) = 0.0;
                auto rotate = [&](double& x, double& y) {
                    const double xo = x, yo = y;
                    x = xo - s * (yo + xo * tau);
                    y = yo + s * (xo - yo * tau);
                };
                for (int i = 0; i < p; ++i) rotate(A(i, p), A(i, q));
                for (int i = p + 1; i < q; ++i) rotate(A(p, i), A(i, q));
                for (int i = q + 1; i < n; ++i) rotate(A(p, i), A(q, i));
                for (int i = p + 1; i < q; ++i) A(i, p) = A(p, i);
                for (int i = q + 1; i < n; ++i) {
                    A(i, p) = A(p, i);
                    A(i, q) = A(q, i);
                }
                for (int i = 0; i < n; ++i) rotate(V(i, p), V(i, q));
            }
        }
    }
    if (sweep == max_sweeps)
        throw std::runtime_error("eigh_symmetric: Jacobi did not converge");

    SymmetricEigen res;
    res.dim = n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A(i, i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return diag[x] < diag[y]; });
    res.values.resize(n);
    res.vectors.resize(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        res.values[j] = diag[order[j]];
        for (int i = 0; i < n; ++i)
            res.vectors[static_cast<size_t>(j) * n + i] = V(i, order[j]);
    }
    return res;
}

/// Hermitian eigenproblem through the real embedding
/// H = X + iY  ->  [[X, -Y], [Y, X]],
/// a 2d x 2d symmetric matrix whose spectrum doubles that of H. Each doubled
/// pair is returned once; a mismatched pair signals a broken input.
inline HermitianEigen eigh_hermitian(const HermitianMatrix& m) {
    const int n = m.dim();
    SymmetricMatrix w(2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const std::complex<double> z = m(i, j);
            w.set(i, j, z.real());
            w.set(n + i, n + j, z.real());
            // -Y block; Y antisymmetric so only the upper wedge is written.
            w.set(i, n + j, -z.imag());
            w.set(j, n + i, z.imag());
        }
    }
    SymmetricEigen emb = eigh_symmetric(w);

    const double scale = std::max(m.max_abs(), 1e-300);
    HermitianEigen res;
    res.dim = n;
    res.values.resize(n);
    res.vectors.resize(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const double lo = emb.values[2 * k];
        const double hi = emb.values[2 * k + 1];
        if (std::abs(hi - lo) > 1e-9 * scale)
            throw std::runtime_error(
                "eigh_hermitian: embedded eigenvalues fail to pair");
        res.values[k] = 0.5 * (lo + hi);
    }

    // Embedded vector (p; q) maps to the complex eigenvector p + iq, but in a
    // degenerate cluster different embedded columns can map to the same
    // complex ray. Extract an orthonormal set per cluster by pivoted
    // Gram-Schmidt over all candidate columns of the cluster.
    auto to_complex = [&](int col) {
        std::vector<std::complex<double>> v(n);
        for (int i = 0; i < n; ++i)
            v[i] = std::complex<double>(emb.vec(i, col), emb.vec(n + i, col));
        return v;
    };
    int k = 0;
    while (k < n) {
        int kend = k + 1;
        while (kend < n && std::abs(res.values[kend] - res.values[k]) <= 1e-8 * scale)
            ++kend;
        const int mult = kend - k;
        std::vector<std::vector<std::complex<double>>> cands;
        for (int j = 2 * k; j < 2 * kend; ++j) cands.push_back(to_complex(j));
        std::vector<std::vector<std::complex<double>>> basis;
        while (static_cast<int>(basis.size()) < mult) {
            // Orthogonalize every remaining candidate, keep the largest.
            double best = -1.0;
            size_t best_idx = 0;
            for (size_t c = 0; c < cands.size(); ++c) {
                auto v = cands[c];
                for (const auto& b : basis) {
                    std::complex<double> ov(0.0, 0.0);
                    for (int i = 0; i < n; ++i) ov += std::conj(b[i]) * v[i];
                    for (int i = 0; i < n; ++i) v[i] -= ov * b[i];
                }
                double nrm2 = 0.0;
                for (int i = 0; i < n; ++i) nrm2 += std::norm(v[i]);
                cands[c] = std::move(v);
                if (nrm2 > best) {
                    best = nrm2;
                    best_idx = c;
                }
            }
            auto v = cands[best_idx];
            cands.erase(cands.begin() + best_idx);
            const double nrm = std::sqrt(
                std::max(best, 1e-300));
            for (int i = 0; i < n; ++i) v[i] /= nrm;
            basis.push_back(std::move(v));
        }
        for (int j = 0; j < mult; ++j)
            for (int i = 0; i < n; ++i)
                res.vectors[static_cast<size_t>(k + j) * n + i] = basis[j][i];
        k = kend;
    }
    return res;
}

}  // namespace latvib
