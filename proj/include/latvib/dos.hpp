#pragma once

/// @file
///
/// Integrated density of states from Brillouin-zone sampling. A Gamma
/// centered N^3 grid of characters is exactly the character group of L/NL,
/// so the weighted eigenvalue multiset collected here coincides with the
/// normalized spectrum of the N-supercell operator; that equality is the
/// finite-scale trace decomposition and is used as a test oracle throughout.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "latvib/bloch.hpp"
#include "latvib/lattice.hpp"

namespace latvib {

namespace detail {

/// Runs fn(i) for i in [0, count) across hardware threads. Work is written
/// to preallocated slots, so results are deterministic.
template <class Fn>
void parallel_for(long count, Fn&& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, 16);
    if (workers <= 1 || count < 64) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Weighted multiset of eigenvalues; the empirical spectral measure d(phi).
/// Grid-generated samples carry uniform weight 1/N^3 per eigenvalue and keep
/// the integer divisor so that averages of exactly representable sums stay
/// exact (e.g. the normalization integral equals 3n with no roundoff).
struct SpectralSamples {
    struct Entry {
        double lambda;
        double weight;
    };

    std::vector<Entry> entries;  // ascending in lambda
    double total_weight = 0.0;
    int grid_n = 0;        // N of the generating grid; 0 for ad-hoc samples
    int branch_count = 0;  // 3n

    double max_lambda() const {
        return entries.empty() ? 0.0 : entries.back().lambda;
    }
};

/// Ad-hoc samples (used by tests and the Einstein model comparisons).
inline SpectralSamples make_samples(std::vector<SpectralSamples::Entry> entries) {
    SpectralSamples s;
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    for (const auto& e : entries) {
        if (e.lambda < 0.0) throw std::invalid_argument("negative sample");
        if (!(e.weight > 0.0)) throw std::invalid_argument("nonpositive weight");
        s.total_weight += e.weight;
    }
    s.entries = std::move(entries);
    return s;
}

/// Dispersion over the Gamma-centered grid k = (j1/N, j2/N, j3/N).
inline SpectralSamples sample_spectrum(const CrystalSpec& crystal, int N) {
    if (N < 1) throw std::invalid_argument("sample_spectrum: N must be >= 1");
    const long cells = static_cast<long>(N) * N * N;
    const int branches = crystal.branch_count();
    std::vector<std::vector<double>> slots(cells);
    detail::parallel_for(cells, [&](long idx) {
        const int j1 = static_cast<int>(idx / (N * N));
        const int j2 = static_cast<int>((idx / N) % N);
        const int j3 = static_cast<int>(idx % N);
        const Vec3 k = {static_cast<double>(j1) / N, static_cast<double>(j2) / N,
                        static_cast<double>(j3) / N};
        slots[idx] = dispersion(crystal, k);
    });

    SpectralSamples s;
    s.grid_n = N;
    s.branch_count = branches;
    const double w = 1.0 / static_cast<double>(cells);
    s.entries.reserve(static_cast<size_t>(cells) * branches);
    for (const auto& vals : slots)
        for (double v : vals) s.entries.push_back({v, w});
    std::sort(s.entries.begin(), s.entries.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    // count / N^3 is an exact IEEE division here.
    s.total_weight = static_cast<double>(s.entries.size()) / static_cast<double>(cells);
    return s;
}

/// Integrated density of states phi(lambda): total weight at or below the
/// threshold. A nondecreasing step function with phi(-eps) = 0 and
/// phi(lambda_max) = 3n.
inline double ids(const SpectralSamples& s, double lambda) {
    const auto it = std::upper_bound(
        s.entries.begin(), s.entries.end(), lambda,
        [](double x, const SpectralSamples::Entry& e) { return x < e.lambda; });
    const long count = static_cast<long>(it - s.entries.begin());
    if (s.grid_n > 0) {
        const long cells = static_cast<long>(s.grid_n) * s.grid_n * s.grid_n;
        return static_cast<double>(count) / static_cast<double>(cells);
    }
    double acc = 0.0;
    for (long i = 0; i < count; ++i) acc += s.entries[i].weight;
    return acc;
}

/// Von Neumann trace average: sum of w_i f(lambda_i). Uniform grid samples
/// accumulate f first and divide once, which keeps f == 1 exactly 3n.
template <class F>
double spectral_average(const SpectralSamples& s, F&& f) {
    if (s.grid_n > 0) {
        const long cells = static_cast<long>(s.grid_n) * s.grid_n * s.grid_n;
        double acc = 0.0;
        for (const auto& e : s.entries) acc += f(e.lambda);
        return acc / static_cast<double>(cells);
    }
    double acc = 0.0;
    for (const auto& e : s.entries) acc += e.weight * f(e.lambda);
    return acc;
}

struct IdsCurve {
    std::vector<double> thresholds;
    std::vector<double> values;
};

inline IdsCurve ids_curve(const SpectralSamples& samples,
                          const std::vector<double>& thresholds) {
    for (size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] < thresholds[i - 1])
            throw std::invalid_argument("ids_curve: thresholds must be ascending");
    IdsCurve c;
    c.thresholds = thresholds;
    c.values.reserve(thresholds.size());
    for (double t : thresholds) c.values.push_back(ids(samples, t));
    return c;
}

inline IdsCurve ids_curve(const CrystalSpec& crystal, int N,
                          const std::vector<double>& thresholds) {
    return ids_curve(sample_spectrum(crystal, N), thresholds);
}

inline std::pair<double, double> default_fit_window(const SpectralSamples& s) {
    const double top = s.max_lambda();
    return {top * 1e-3, top * 0.03};
}

/// Least-squares estimate of the coefficient c0 in phi(lambda) ~ c0
/// lambda^{3/2}: regression through the origin in the variable lambda^{3/2}
/// over thresholds spanning the fit window,
///   c0 = sum phi(l_i) l_i^{3/2} / sum l_i^3.
/// Requires at least 20 samples inside the window so the step function
/// carries signal there.
inline double fit_c0(const SpectralSamples& s, double lambda_lo, double lambda_hi) {
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
        throw std::invalid_argument("fit_c0: window must satisfy 0 < lo < hi");
    long in_window = 0;
    for (const auto& e : s.entries)
        if (e.lambda > lambda_lo && e.lambda < lambda_hi) ++in_window;
    if (in_window < 20)
        throw std::invalid_argument("fit_c0: fewer than 20 samples in the window");
    const int thresholds = 128;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < thresholds; ++i) {
        const double l =
            lambda_lo + (lambda_hi - lambda_lo) * (i + 0.5) / thresholds;
        const double x = std::pow(l, 1.5);
        num += ids(s, l) * x;
        den += x * x;
    }
    return num / den;
}

inline double fit_c0(const CrystalSpec& crystal, int N, double lambda_lo,
                     double lambda_hi) {
    return fit_c0(sample_spectrum(crystal, N), lambda_lo, lambda_hi);
}

inline double fit_c0(const CrystalSpec& crystal, int N) {
    const SpectralSamples s = sample_spectrum(crystal, N);
    const auto [lo, hi] = default_fit_window(s);
    return fit_c0(s, lo, hi);
}

}  // namespace latvib
