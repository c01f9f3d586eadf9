#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "pam/error.hpp"
#include "pam/kernels.hpp"

using namespace pam;

namespace {
constexpr double kInv2Pi = 0.5 / std::numbers::pi;
}

TEST_CASE("quintic cutoff: values and derivatives") {
    const Cutoff chi = Cutoff::quintic();
    CHECK(chi.value(0.0) == 1.0);
    CHECK(chi.value(0.5) == 1.0);
    CHECK(chi.value(1.0) == 0.0);
    CHECK(chi.value(1.5) == 0.0);
    CHECK(chi.value(0.75) == doctest::Approx(0.5));
    const double d = 1e-5;
    for (double r : {0.55, 0.7, 0.75, 0.9, 0.97}) {
        CHECK(chi.d1(r) == doctest::Approx((chi.value(r + d) - chi.value(r - d)) / (2 * d)).epsilon(1e-6));
        CHECK(chi.d2(r) == doctest::Approx((chi.d1(r + d) - chi.d1(r - d)) / (2 * d)).epsilon(1e-6));
    }
    // C^2 matching at both ends.
    CHECK(chi.d1(0.5) == doctest::Approx(0.0));
    CHECK(chi.d2(0.5) == doctest::Approx(0.0));
    CHECK(chi.d1(1.0) == doctest::Approx(0.0));
    CHECK(chi.d2(1.0) == doctest::Approx(0.0));
}

TEST_CASE("radial Green function closed forms") {
    const Cutoff chi = Cutoff::quintic();
    CHECK(green_radial(chi, 0.25) == doctest::Approx(std::log(4.0) * kInv2Pi).epsilon(1e-14));
    CHECK(green_radial(chi, 1.0) == 0.0);
    CHECK(green_radial_derivative(chi, 0.25) == doctest::Approx(-kInv2Pi / 0.25).epsilon(1e-14));
    const double d = 1e-5;
    for (double r : {0.3, 0.6, 0.8, 0.95}) {
        const double g1 = (green_radial(chi, r + d) - green_radial(chi, r - d)) / (2 * d);
        CHECK(green_radial_derivative(chi, r) == doctest::Approx(g1).epsilon(1e-6));
        // Radial Laplacian g'' + g'/r.
        const double g2 = (green_radial(chi, r + d) - 2 * green_radial(chi, r) + green_radial(chi, r - d)) / (d * d);
        CHECK(green_remainder_radial(chi, r) == doctest::Approx(g2 + g1 / r).epsilon(1e-4).scale(1.0));
    }
    CHECK(green_remainder_radial(chi, 0.3) == 0.0);
    CHECK(green_remainder_radial(chi, 1.2) == 0.0);
}

TEST_CASE("remainder F integrates to one") {
    // Delta G = -delta_0 + F, and Delta G integrates to zero because G has compact support.
    const Grid g(2.0, 512);
    const GreenKernel k = build_green(g);
    double s = 0.0;
    for (double v : k.F.values()) s += v;
    s *= g.spacing() * g.spacing();
    CHECK(s == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("tabulated kernel: origin value, gradient direction, resolution guard") {
    const Grid g(2.0, 128);
    const GreenKernel k = build_green(g);
    const auto o = g.origin_index();
    const double h = g.spacing();
    CHECK(k.G(o, o) == doctest::Approx(-std::log(h / 2.0) * kInv2Pi));
    CHECK(k.G1(o, o) == 0.0);
    CHECK(k.G2(o, o) == 0.0);
    // Gradient points along x with magnitude |g'(r)|.
    const std::size_t off = 8;
    CHECK(k.G1(o + off, o) == doctest::Approx(green_radial_derivative(k.cutoff, off * h)));
    CHECK(k.G2(o + off, o) == doctest::Approx(0.0));
    CHECK(&k.gradient(1) == &k.G2);
    CHECK_THROWS_AS(build_green(Grid(2.0, 16)), ResolutionError);
}

TEST_CASE("discrete Laplacian of G converges to F at second order on the annulus") {
    std::vector<double> dev;
    for (std::size_t n : {128, 256, 512}) {
        const Grid g(2.0, n);
        const GreenKernel k = build_green(g);
        const Field lap = discrete_laplacian(k.G);
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            for (std::size_t j = 1; j + 1 < n; ++j) {
                const double r = g.node(i, j).norm();
                if (r > 0.55 && r < 0.95) worst = std::max(worst, std::abs(lap(i, j) - k.F(i, j)));
                // Where G is harmonic the five-point error is O(h^2 / r^4); outside |x| = 1 it is zero.
                const double h = g.spacing();
                if (r > 0.1 && r < 0.45) CHECK(std::abs(lap(i, j)) * std::pow(r, 4) / (h * h) < 1.0);
                if (r > 1.05) CHECK(lap(i, j) == 0.0);
            }
        }
        dev.push_back(worst);
    }
    CHECK(dev[0] / dev[1] == doctest::Approx(4.0).epsilon(0.25));
    CHECK(dev[1] / dev[2] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("discrete Laplacian of a quadratic is exact") {
    const Grid g(2.0, 32);
    const Field f = Field::from_function(g, [](Point x) { return x.x1 * x.x1 + 3.0 * x.x2 * x.x2; });
    const Field lap = discrete_laplacian(f);
    CHECK(lap(10, 20) == doctest::Approx(8.0));
    CHECK(lap(0, 5) == 0.0);
}

TEST_CASE("kernel order norm of the gradient kernel") {
    const Grid g(2.0, 256);
    const GreenKernel k = build_green(g);
    // m = 0, zeta = -1: sup over |x| >= 2h of |x| |D_1 G(x)| = |x1| |g'(r)|, from the closed form.
    double oracle = 0.0;
    for (std::size_t i = 0; i < 256; ++i) {
        for (std::size_t j = 0; j < 256; ++j) {
            const Point x = g.node(i, j);
            if (x.norm() < 2.0 * g.spacing() * (1 - 1e-12)) continue;
            oracle = std::max(oracle, std::abs(x.x1) * std::abs(green_radial_derivative(k.cutoff, x.norm())));
        }
    }
    const KernelOrderNorm nrm = kernel_order_norm(k.G1, -1.0, 0);
    CHECK(nrm.value == doctest::Approx(oracle).epsilon(1e-12));
    // Inside |x| <= 1/2 the bound is 1/(2 pi); the cutoff annulus adds to it.
    CHECK(nrm.value >= kInv2Pi * (1 - 1e-3));
    CHECK(kernel_order_norm(k.G1, -1.0, 1).value >= nrm.value);
    CHECK_THROWS_AS(kernel_order_norm(k.G1, -1.0, 3), InvalidArgument);
}
