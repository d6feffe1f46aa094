#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "latvib/bloch.hpp"
#include "latvib/dos.hpp"
#include "latvib/lattice.hpp"

using namespace latvib;

namespace {

// Brute-force enumeration of the grid eigenvalue multiset, independent of
// sample_spectrum's bookkeeping.
std::vector<double> enumerate_grid(const CrystalSpec& c, int N) {
    std::vector<double> out;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (double v :
                     dispersion(c, Vec3{double(i) / N, double(j) / N, double(k) / N}))
                    out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("sample_spectrum basics") {
    const CrystalSpec cubic = build_cubic(1.0, 1.0);
    SECTION("cubic N=2: 24 entries of weight 1/8, total weight exactly 3") {
        const SpectralSamples s = sample_spectrum(cubic, 2);
        CHECK(s.entries.size() == 24);
        CHECK(s.total_weight == 3.0);
        for (const auto& e : s.entries) CHECK(e.weight == 0.125);
        CHECK(std::is_sorted(s.entries.begin(), s.entries.end(),
                             [](const auto& a, const auto& b) {
                                 return a.lambda < b.lambda;
                             }));
    }
    SECTION("N=1 keeps the Gamma eigenvalues at weight 1") {
        const SpectralSamples s = sample_spectrum(cubic, 1);
        REQUIRE(s.entries.size() == 3);
        for (const auto& e : s.entries) {
            CHECK(e.lambda == 0.0);
            CHECK(e.weight == 1.0);
        }
    }
    SECTION("diamond N=2 total weight 6 exactly") {
        CHECK(sample_spectrum(build_diamond(1, 1, 1), 2).total_weight == 6.0);
    }
    SECTION("total weight stays exact on non-dyadic grids") {
        CHECK(sample_spectrum(cubic, 3).total_weight == 3.0);
        CHECK(sample_spectrum(build_diamond(1, 2, 1), 3).total_weight == 6.0);
    }
    SECTION("sampling is deterministic across runs despite threading") {
        const CrystalSpec d = build_diamond(1.0, 2.0, 1.0);
        const SpectralSamples a = sample_spectrum(d, 6);
        const SpectralSamples b = sample_spectrum(d, 6);
        REQUIRE(a.entries.size() == b.entries.size());
        for (size_t i = 0; i < a.entries.size(); ++i)
            CHECK(a.entries[i].lambda == b.entries[i].lambda);
    }
}

TEST_CASE("ids step function") {
    const CrystalSpec cubic = build_cubic(1.0, 1.0);
    const SpectralSamples s = sample_spectrum(cubic, 2);
    SECTION("below the spectrum") { CHECK(ids(s, -1.0) == 0.0); }
    SECTION("above the spectral bound") { CHECK(ids(s, 13.0) == 3.0); }
    SECTION("midband value against brute-force counting") {
        const std::vector<double> all = enumerate_grid(cubic, 2);
        long count = 0;
        for (double v : all)
            if (v <= 4.0) ++count;
        CHECK(count == 12);  // {0 x3, 4 x9} of the 24 grid eigenvalues
        CHECK(ids(s, 4.0) == static_cast<double>(count) / 8.0);
        CHECK(ids(s, 4.0) == 1.5);
    }
    SECTION("nondecreasing with saturation") {
        double prev = -1.0;
        for (double lam = -0.5; lam <= 12.5; lam += 0.25) {
            const double v = ids(s, lam);
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(prev == 3.0);
    }
}

TEST_CASE("spectral_average") {
    const CrystalSpec cubic = build_cubic(1.0, 1.0);
    const CrystalSpec diamond = build_diamond(1.0, 2.0, 1.0);
    SECTION("normalization is exact") {
        CHECK(spectral_average(sample_spectrum(cubic, 2), [](double) { return 1.0; }) ==
              3.0);
        CHECK(spectral_average(sample_spectrum(cubic, 3), [](double) { return 1.0; }) ==
              3.0);
        CHECK(spectral_average(sample_spectrum(diamond, 3),
                               [](double) { return 1.0; }) == 6.0);
    }
    SECTION("f = lambda gives the per-cell trace of the operator") {
        // tr_L(-D) = sum_x (1/m(x)) sum_{e at x} tr A(e): 18 for the unit cubic.
        const SpectralSamples s = sample_spectrum(cubic, 2);
        const double avg = spectral_average(s, [](double l) { return l; });
        double edge_sum = 0.0;
        for (const auto& e : cubic.edges)
            edge_sum += trace(e.force) / cubic.vertices[e.origin].mass;
        CHECK(edge_sum == 18.0);
        CHECK(avg == Catch::Approx(edge_sum).margin(1e-12));
    }
    SECTION("loop-free lattices have a chi-independent Bloch trace") {
        // Hopping terms of the diamond lattice never touch the diagonal, so
        // tr H_chi is constant and the spectral average of lambda equals it.
        const SpectralSamples s = sample_spectrum(diamond, 2);
        const double avg = spectral_average(s, [](double l) { return l; });
        double edge_sum = 0.0;
        for (const auto& e : diamond.edges)
            edge_sum += trace(e.force) / diamond.vertices[e.origin].mass;
        for (const Vec3& k : {Vec3{0.3, 0.7, 0.1}, Vec3{0.9, 0.2, 0.4}}) {
            const auto bm = assemble_bloch(diamond, make_character(diamond.basis, k));
            CHECK(bm.matrix.trace().real() == Catch::Approx(edge_sum).margin(1e-12));
        }
        CHECK(avg == Catch::Approx(edge_sum).margin(1e-12));
    }
    SECTION("f = exp(-lambda) equals the regrouped per-character trace sum") {
        const SpectralSamples s = sample_spectrum(diamond, 2);
        const double avg = spectral_average(s, [](double l) { return std::exp(-l); });
        double regrouped = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (double v : dispersion(diamond, Vec3{i / 2.0, j / 2.0, k / 2.0}))
                        regrouped += std::exp(-v);
        regrouped /= 8.0;
        CHECK(avg == Catch::Approx(regrouped).margin(1e-12));
    }
    SECTION("linearity and monotonicity") {
        const SpectralSamples s = sample_spectrum(cubic, 3);
        auto f = [](double l) { return l * l; };
        auto g = [](double l) { return 2.0 + l; };
        const double lin = spectral_average(s, [&](double l) { return 3.0 * f(l) + g(l); });
        CHECK(lin == Catch::Approx(3.0 * spectral_average(s, f) +
                                   spectral_average(s, g))
                         .epsilon(1e-14));
        CHECK(spectral_average(s, f) <=
              spectral_average(s, [](double l) { return l * l + 0.5; }));
    }
}

TEST_CASE("ids_curve") {
    const CrystalSpec cubic = build_cubic(1.0, 1.0);
    SECTION("thresholds below zero give zeros") {
        const IdsCurve c = ids_curve(cubic, 2, {-3.0, -2.0, -1.0});
        for (double v : c.values) CHECK(v == 0.0);
    }
    SECTION("one threshold above the bound gives 3n") {
        const IdsCurve c = ids_curve(cubic, 2, {100.0});
        CHECK(c.values[0] == 3.0);
    }
    SECTION("unsorted thresholds rejected") {
        CHECK_THROWS_AS(ids_curve(cubic, 2, {1.0, 0.5}), std::invalid_argument);
    }
    SECTION("curve matches normalized supercell counting exactly at N=4") {
        // Thresholds are offset off the eigenvalue atoms so that the two
        // 1e-15-jittered multisets count identically.
        const SpectralSamples s = sample_spectrum(cubic, 4);
        const std::vector<double> super = supercell_spectrum(cubic, 4);
        std::vector<double> thresholds;
        for (int i = 0; i <= 48; ++i)
            thresholds.push_back(-0.25 + 12.75 * i / 48.0 + 1e-7);
        const IdsCurve curve = ids_curve(s, thresholds);
        for (size_t i = 0; i < thresholds.size(); ++i) {
            long count = 0;
            for (double v : super)
                if (v <= thresholds[i]) ++count;
            CHECK(curve.values[i] == static_cast<double>(count) / 64.0);
        }
    }
}

TEST_CASE("ids refinement gap shrinks with N") {
    const CrystalSpec cubic = build_cubic(1.0, 1.0);
    const SpectralSamples s4 = sample_spectrum(cubic, 4);
    const SpectralSamples s8 = sample_spectrum(cubic, 8);
    const SpectralSamples s16 = sample_spectrum(cubic, 16);
    double d48 = 0.0, d816 = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double lam = -0.5 + 13.0 * i / 63.0;
        d48 = std::max(d48, std::abs(ids(s4, lam) - ids(s8, lam)));
        d816 = std::max(d816, std::abs(ids(s8, lam) - ids(s16, lam)));
    }
    CHECK(d816 < d48);
}

TEST_CASE("fit_c0") {
    SECTION("cubic slope in a fixed window") {
        const double est = fit_c0(build_cubic(1.0, 1.0), 32, 0.05, 0.3);
        const double expect = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
        CHECK(std::abs(est / expect - 1.0) < 0.05);
    }
    SECTION("diamond slope in the default window") {
        const double est = fit_c0(build_diamond(1.0, 1.0, 1.0), 32);
        const double expect = 2.0 * std::sqrt(2.0) / (std::numbers::pi * std::numbers::pi);
        CHECK(std::abs(est / expect - 1.0) < 0.05);
    }
    SECTION("window without samples is rejected") {
        const SpectralSamples s = sample_spectrum(build_cubic(1.0, 1.0), 2);
        CHECK_THROWS_AS(fit_c0(s, 0.5, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(fit_c0(s, -1.0, 0.5), std::invalid_argument);
    }
}
