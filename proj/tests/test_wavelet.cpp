#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "pam/error.hpp"
#include "pam/stochastics.hpp"
#include "pam/wavelet.hpp"

using namespace pam;

TEST_CASE("Daubechies filters: normalisation, orthogonality, vanishing moments") {
    for (int vm : {4, 6, 8}) {
        const WaveletBasis b = WaveletBasis::daubechies(vm);
        CHECK(b.taps() == static_cast<std::size_t>(2 * vm));
        double sum = 0.0;
        for (double v : b.low) sum += v;
        CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        for (std::size_t shift = 0; shift < b.taps(); shift += 2) {
            double dot = 0.0;
            for (std::size_t m = 0; m + shift < b.taps(); ++m) dot += b.low[m] * b.low[m + shift];
            CHECK(dot == doctest::Approx(shift == 0 ? 1.0 : 0.0).epsilon(1e-14).scale(1.0));
        }
        for (int p = 0; p < vm; ++p) {
            double mom = 0.0, scale = 0.0;
            for (std::size_t m = 0; m < b.taps(); ++m) {
                mom += std::pow(double(m), p) * b.high[m];
                scale += std::pow(double(m), p) * std::abs(b.high[m]);
            }
            CHECK(std::abs(mom) <= 1e-12 * scale);
        }
    }
    CHECK_THROWS_AS(WaveletBasis::daubechies(5), InvalidArgument);
}

TEST_CASE("pyramid layout") {
    const Grid g(2.0, 64);
    const CoefficientPyramid p = analyze(Field(g), WaveletBasis::daubechies(6));
    // h = 1/16: levels 0..3, level m has 4 * 2^m translates per axis.
    CHECK(p.finest_level() == 3);
    CHECK(p.max_usable_level() == 2);
    CHECK(p.levels[0].side == 4);
    CHECK(p.levels[3].side == 32);
    CHECK(p.levels[2].spacing == 0.25);
    CHECK(p.scaling.detail[0].size() == 16);
    CHECK_THROWS_AS(analyze(Field(Grid(3.0, 64)), WaveletBasis::daubechies(6)), InvalidArgument);
}

TEST_CASE("perfect reconstruction and Parseval") {
    const Grid g(2.0, 128);
    const WaveletBasis b = WaveletBasis::daubechies(6);
    const Field f = sample_white_noise(g, 8).field;
    const CoefficientPyramid p = analyze(f, b);
    CHECK(p.energy() == doctest::Approx(pairing(f, f)).epsilon(1e-12));
    const Field back = synthesize(p, b);
    for (std::size_t q = 0; q < g.nodes(); ++q) CHECK(back[q] == doctest::Approx(f[q]).epsilon(1e-10));
    CHECK_THROWS_AS(synthesize(p, WaveletBasis::daubechies(4)), InvalidArgument);
}

TEST_CASE("single atoms have unit L2 norm and are mutually orthogonal") {
    const Grid g(2.0, 128);
    const WaveletBasis b = WaveletBasis::daubechies(6);
    CoefficientPyramid a = zero_pyramid(g, b);
    CoefficientPyramid c = zero_pyramid(g, b);
    a.levels[3].detail[1][5 * a.levels[3].side + 7] = 1.0;
    c.levels[4].detail[2][9 * c.levels[4].side + 3] = 1.0;
    const Field fa = synthesize(a, b);
    const Field fc = synthesize(c, b);
    CHECK(pairing(fa, fa) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pairing(fc, fc) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pairing(fa, fc)) < 1e-12);
    // Re-analysis recovers the atom.
    const CoefficientPyramid back = analyze(fa, b);
    CHECK(back.levels[3].detail[1][5 * back.levels[3].side + 7] == doctest::Approx(1.0));
}

TEST_CASE("usable details of a low-degree polynomial vanish") {
    const Grid g(4.0, 256);
    const WaveletBasis b = WaveletBasis::daubechies(6);
    const Field f = Field::from_function(g, [](Point x) { return 1.0 + x.x1 * x.x1 * x.x2 - 2.0 * x.x2 * x.x2 * x.x2; });
    const CoefficientPyramid p = analyze(f, b);
    double worst = 0.0;
    std::size_t usable = 0;
    for (const auto& lvl : p.levels) {
        for (std::size_t k1 = 0; k1 < lvl.side; ++k1) {
            for (std::size_t k2 = 0; k2 < lvl.side; ++k2) {
                if (!p.usable(lvl, k1, k2)) continue;
                ++usable;
                for (const auto& d : lvl.detail) worst = std::max(worst, std::abs(d[k1 * lvl.side + k2]));
            }
        }
    }
    CHECK(usable > 100);
    CHECK(worst < 1e-9);
    // The weighted norm therefore only sees the scaling part.
    CHECK(coefficient_norm(p, 0.5, WeightSpec::polynomial(0.0), b.order) > 0.0);
}

TEST_CASE("white noise regularity estimate sits near -1") {
    const Grid g(8.0, 1024);
    const CoefficientPyramid p = analyze(sample_white_noise(g, 2).field, WaveletBasis::daubechies(6));
    const RegularityFit fit = regularity_estimate(p, WeightSpec::polynomial(0.04));
    // The sup over 4x more coefficients per level pulls a single-seed estimate below -1.
    CHECK(fit.alpha < -1.0);
    CHECK(fit.alpha > -1.45);
    CHECK(fit.min_level == 0);
    CHECK(fit.max_level == p.max_usable_level());
}

TEST_CASE("regularity fit recovers an exact power law") {
    std::vector<int> lv{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (int m : lv) y.push_back(3.0 - 0.7 * m);
    const RegularityFit fit = regularity_fit(lv, y);
    CHECK(fit.alpha == doctest::Approx(-0.3));
    CHECK(fit.residual == doctest::Approx(0.0));
    CHECK_THROWS_AS(regularity_fit({0, 1, 2}, {1.0, 2.0, 3.0}), InvalidArgument);
}

TEST_CASE("norm guards and scaling") {
    const Grid g(2.0, 128);
    const WaveletBasis b = WaveletBasis::daubechies(6);
    const CoefficientPyramid p = analyze(sample_white_noise(g, 3).field, b);
    const WeightSpec w = WeightSpec::polynomial(0.04);
    CHECK_THROWS_AS(coefficient_norm(p, -2.0, w, b.order), InvalidArgument);
    CHECK_THROWS_AS(neg_holder_norm(p, 0.5, w, b.order), InvalidArgument);
    // Larger alpha penalises fine levels more.
    CHECK(neg_holder_norm(p, -0.9, w, b.order) >= neg_holder_norm(p, -1.1, w, b.order));
    const auto rows = level_report(p, w);
    CHECK(rows.size() == p.levels.size());
    CHECK(rows[2].weighted_sup == doctest::Approx(rows[2].sup_coeff / rows[2].weight_at_argmax));
}

TEST_CASE("pyramid export") {
    const Grid g(2.0, 64);
    const CoefficientPyramid p = analyze(sample_white_noise(g, 3).field, WaveletBasis::daubechies(6));
    const auto dir = std::filesystem::temp_directory_path() / "pam_pyramid_export";
    std::filesystem::remove_all(dir);
    write_pyramid(dir, p);
    CHECK(std::filesystem::exists(dir / "manifest.txt"));
    CHECK(std::filesystem::exists(dir / "small_levels.csv"));
    CHECK(std::filesystem::exists(dir / "level3_d2.pamf"));
    std::filesystem::remove_all(dir);
}
