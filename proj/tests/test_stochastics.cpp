#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pam/error.hpp"
#include "pam/rng.hpp"
#include "pam/stochastics.hpp"

using namespace pam;

TEST_CASE("counter generator is a pure function of its inputs") {
    const CounterRng a{42}, b{42}, c{43};
    CHECK(a.bits(3, 7) == b.bits(3, 7));
    CHECK(a.bits(3, 7) != c.bits(3, 7));
    CHECK(a.bits(3, 7) != a.bits(3, 8));
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const double u = a.uniform(1, k);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
}

TEST_CASE("normal draws have unit variance") {
    const CounterRng r{7};
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double z = r.normal(0, static_cast<std::uint64_t>(k));
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 5.0 / std::sqrt(double(n)));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("white noise: deterministic, node variance 1/h^2") {
    const Grid g(2.0, 128);
    const NoiseSample a = sample_white_noise(g, 5);
    const NoiseSample b = sample_white_noise(g, 5);
    const NoiseSample c = sample_white_noise(g, 6);
    CHECK(a.seed == 5);
    double diff = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        CHECK(a.field[k] == b.field[k]);
        diff += std::abs(a.field[k] - c.field[k]);
        s2 += a.field[k] * a.field[k];
    }
    CHECK(diff > 0.0);
    const double h = g.spacing();
    const double var = s2 / static_cast<double>(g.nodes()) * h * h;
    CHECK(var == doctest::Approx(1.0).epsilon(5.0 * std::sqrt(2.0 / g.nodes())));
}

TEST_CASE("white noise on a refined grid block-averages to the coarse sample") {
    const Grid coarse(2.0, 32), fine(2.0, 64);
    const Field a = sample_white_noise(coarse, 11).field;
    const Field b = sample_white_noise(fine, 11).field;
    for (std::size_t i = 0; i < 32; ++i) {
        for (std::size_t j = 0; j < 32; ++j) {
            const double avg = 0.25 * (b(2 * i, 2 * j) + b(2 * i + 1, 2 * j) + b(2 * i, 2 * j + 1) +
                                       b(2 * i + 1, 2 * j + 1));
            CHECK(avg == doctest::Approx(a(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("white-noise pairings: Var <xi, phi> = ||phi||^2") {
    const Grid g(2.0, 64);
    const Field phi = Field::from_function(g, [](Point x) { return std::exp(-x.x1 * x.x1 - 2.0 * x.x2 * x.x2); });
    const double target = pairing(phi, phi);
    double s = 0.0, s2 = 0.0;
    const int seeds = 2000;
    for (int k = 0; k < seeds; ++k) {
        const double v = pairing(sample_white_noise(g, 1000 + k).field, phi);
        s += v;
        s2 += v * v;
    }
    const double mean = s / seeds;
    const double var = s2 / seeds - mean * mean;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(target / seeds));
    CHECK(var == doctest::Approx(target).epsilon(4.0 * std::sqrt(2.0 / seeds)));
}

TEST_CASE("bump mass against independent radial quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    const double mass = 2.0 * std::numbers::pi *
                        gauss_kronrod<double, 61>::integrate(
                            [](double r) { return r < 1.0 ? r * std::exp(-1.0 / (1.0 - r * r)) : 0.0; }, 0.0,
                            1.0, 15, 1e-14);
    CHECK(bump_mass() == doctest::Approx(mass).epsilon(1e-10));
    CHECK(bump_profile(0.0) == doctest::Approx(std::exp(-1.0) / mass).epsilon(1e-12));
    CHECK(bump_profile(1.0) == 0.0);
    CHECK(bump_unnormalised(2.0) == 0.0);
}

TEST_CASE("mollifier tabulation is normalised and resolution-checked") {
    const Grid g(2.0, 128);
    const double h = g.spacing();
    for (double eps : {2.0 * h, 0.25, 0.5}) {
        const Field rho = tabulate_mollifier(g, eps);
        double sum = 0.0;
        for (double v : rho.values()) sum += v;
        CHECK(sum * h * h == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rho.at_origin() > 0.0);
    }
    CHECK_THROWS_AS(tabulate_mollifier(g, 1.9 * h), ResolutionError);
    CHECK_THROWS_AS(mollify(sample_white_noise(g, 1), MollifierSpec{h}), ResolutionError);
}

TEST_CASE("mollification preserves constants away from the edge and is linear") {
    const Grid g(2.0, 64);
    const Field one(g, 1.0);
    const Field m = mollify(one, MollifierSpec{0.25});
    CHECK(m.at_origin() == doctest::Approx(1.0).epsilon(1e-12));
    const Field xi = sample_white_noise(g, 3).field;
    const Field lhs = mollify(2.0 * xi + one, MollifierSpec{0.25});
    const Field rhs = 2.0 * mollify(xi, MollifierSpec{0.25}) + m;
    for (std::size_t k = 0; k < g.nodes(); k += 37) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-10));
}

TEST_CASE("mollified noise has variance ||rho_eps||^2 at interior nodes") {
    const Grid g(2.0, 64);
    const double eps = 0.25;
    const Field rho = tabulate_mollifier(g, eps);
    const double target = pairing(rho, rho);
    double s2 = 0.0;
    const int seeds = 1500;
    for (int k = 0; k < seeds; ++k) {
        const double v = mollify(sample_white_noise(g, 77 + k), MollifierSpec{eps}).at_origin();
        s2 += v * v;
    }
    CHECK(s2 / seeds == doctest::Approx(target).epsilon(4.0 * std::sqrt(2.0 / seeds)));
    // The tabulated L2 norm approaches the continuum ||rho||^2 / eps^2.
    CHECK(target * eps * eps == doctest::Approx(bump_l2_squared()).epsilon(0.02));
}
