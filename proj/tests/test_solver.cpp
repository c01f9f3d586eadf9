#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "pam/checks.hpp"
#include "pam/enhancement.hpp"
#include "pam/error.hpp"
#include "pam/solver.hpp"
#include "pam/stochastics.hpp"

using namespace pam;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t q = 0; q < a.grid().nodes(); ++q) m = std::max(m, std::abs(a[q] - b[q]));
    return m;
}

double sup(const Field& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

// Closed-form heat flow of exp(-|x|^2 / (2 s2)).
Field heat_gaussian(const Grid& g, double s2, double t) {
    const double v = s2 + 2.0 * t;
    return Field::from_function(g, [=](Point x) { return s2 / v * std::exp(-(x.x1 * x.x1 + x.x2 * x.x2) / (2.0 * v)); });
}

SolveConfig config(double T, double dt) {
    SolveConfig c;
    c.T = T;
    c.dt = dt;
    return c;
}

// Smooth noise surrogate so that both solvers converge quickly in dt and h.
Field smooth_noise(const Grid& g) {
    return Field::from_function(g, [](Point x) {
        return 4.0 * std::exp(-((x.x1 - 0.2) * (x.x1 - 0.2) + x.x2 * x.x2) / 0.08) - 2.0 * std::cos(2.0 * x.x1) * std::sin(x.x2);
    });
}

}  // namespace

TEST_CASE("solve config validation") {
    SolveConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.steps() == 200);
    c.a = 0.06;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = SolveConfig{};
    c.T = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = SolveConfig{};
    c.split_substeps = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("space-time field bookkeeping") {
    const Grid g(2.0, 16);
    SpaceTimeField v(g);
    v.push(0.1, Field(g));
    CHECK_THROWS_AS(v.push(0.1, Field(g)), InvalidArgument);
    CHECK_THROWS_AS(v.push(0.2, Field(Grid(2.0, 32))), GridMismatch);
    v.push(0.2, Field(g, 1.0));
    CHECK(v.size() == 2);
    CHECK(v.back()[0] == 1.0);
}

// Each step truncates to the box, so closed-form comparisons keep the solution well inside it.
TEST_CASE("zero potential: solve_direct is the exact heat flow") {
    const Grid g(4.0, 256);
    const double s2 = 0.0625;
    const Field u0 = heat_gaussian(g, s2, 0.0);
    const SpaceTimeField u = solve_direct(Field(g), 0.0, u0, config(0.05, 1e-3));
    CHECK(u.size() == 50);
    CHECK(u.time(49) == doctest::Approx(0.05));
    CHECK(max_abs_diff(u.back(), heat_gaussian(g, s2, 0.05)) < 1e-8);
}

TEST_CASE("constant potential multiplies the heat flow by e^{(c - C) t}") {
    const Grid g(4.0, 128);
    const double s2 = 0.0625, c = 1.5, C = 0.4;
    const Field u0 = heat_gaussian(g, s2, 0.0);
    const SpaceTimeField u = solve_direct(Field(g, c), C, u0, config(0.1, 1e-3));
    const Field exact = std::exp((c - C) * 0.1) * heat_gaussian(g, s2, 0.1);
    CHECK(max_abs_diff(u.back(), exact) < 1e-8);
}

TEST_CASE("renormalisation identity holds framewise to rounding") {
    const Grid g(2.0, 64);
    const Field xi = mollify(sample_white_noise(g, 1), MollifierSpec{0.125});
    const Field u0 = gaussian_bump(g, 0.25);
    const double C = 0.7;
    const SpaceTimeField a = solve_direct(xi, 0.0, u0, config(0.2, 1e-3));
    const SpaceTimeField b = solve_direct(xi, C, u0, config(0.2, 1e-3));
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(max_abs_diff(a.frame(k), std::exp(C * a.time(k)) * b.frame(k)) <= 1e-12 * sup(a.frame(k)));
    }
}

TEST_CASE("Strang splitting converges at second order") {
    const Grid g(4.0, 128);
    const Field xi = smooth_noise(g);
    const Field u0 = gaussian_bump(g, 0.3);
    const Field ref = solve_direct(xi, 0.0, u0, config(0.1, 1.25e-4)).back();
    const double e1 = max_abs_diff(solve_direct(xi, 0.0, u0, config(0.1, 2e-3)).back(), ref);
    const double e2 = max_abs_diff(solve_direct(xi, 0.0, u0, config(0.1, 1e-3)).back(), ref);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
    SolveConfig sub = config(0.1, 2e-3);
    sub.split_substeps = 2;
    CHECK(max_abs_diff(solve_direct(xi, 0.0, u0, sub).back(), ref) == doctest::Approx(e2).epsilon(1e-6));
}

TEST_CASE("overflow raises NonFiniteError") {
    const Grid g(2.0, 16);
    CHECK_THROWS_AS(solve_direct(Field(g, 1e5), 0.0, Field(g, 1.0), config(0.2, 1e-3)), NonFiniteError);
}

TEST_CASE("transformed solver with zero noise reduces to e^{-Ct} heat flow") {
    const Grid g(4.0, 128);
    const EnhancementBuilder builder(g, 0.125);
    const Enhancement e = builder.build_from_field(Field(g));
    const Field u0 = heat_gaussian(g, 0.0625, 0.0);
    SolveConfig c = config(0.1, 1e-3);
    c.quadrature = Quadrature::trapezoid;
    const TransformedSolution s = solve_transformed(e, u0, c);
    const Field exact = std::exp(-e.C_eps * 0.1) * heat_gaussian(g, 0.0625, 0.1);
    CHECK(max_abs_diff(s.u.back(), exact) < 1e-5 * sup(exact));
    CHECK(s.iterations > 1);
    CHECK(s.residuals.size() == 1);
}

TEST_CASE("transformed and direct solvers agree on a smooth potential") {
    const Grid g(2.0, 128);
    const EnhancementBuilder builder(g, 0.125);
    const Enhancement e = builder.build_from_field(smooth_noise(g));
    const Field u0 = gaussian_bump(g, 0.25);
    auto gap = [&](double dt) {
        SolveConfig c = config(0.05, dt);
        c.quadrature = Quadrature::trapezoid;
        c.split_substeps = 10;
        c.picard_window = 25;
        const Field a = solve_direct(e.xi_eps, e.C_eps, u0, c).back();
        const Field b = solve_transformed(e, u0, c).u.back();
        return max_abs_diff(a, b) / sup(a);
    };
    const double coarse = gap(2e-3);
    const double fine = gap(1e-3);
    MESSAGE("relative gap ", coarse, " -> ", fine);
    CHECK(coarse < 1e-2);
    CHECK(fine < coarse);
}

TEST_CASE("converged transformed output is a fixed point of picard_map") {
    const Grid g(2.0, 64);
    const EnhancementBuilder builder(g, 0.125);
    const Enhancement e = builder.build(sample_white_noise(g, 5));
    const Field u0 = gaussian_bump(g, 0.25);
    SolveConfig c = config(0.02, 1e-3);
    c.picard_tol = 1e-10;
    const TransformedSolution s = solve_transformed(e, u0, c);
    const Field eY = map(e.Y, [](double y) { return std::exp(-y); });
    const SpaceTimeField again =
        picard_map(s.v, e.Z + e.F_xi, 2.0 * e.gradY[0], 2.0 * e.gradY[1], u0 * eY, c);
    SpaceTimeField diff(g);
    for (std::size_t k = 0; k < again.size(); ++k) diff.push(again.time(k), again.frame(k) - s.v.frame(k));
    const double r = 1.0 + 2.0 * c.kappa;
    const double rel = spacetime_norm(diff, r, c.ell, c.T, c.kappa) / spacetime_norm(s.v, r, c.ell, c.T, c.kappa);
    CHECK(rel <= 1e-8);
}

TEST_CASE("Picard failure carries the residual history") {
    const Grid g(2.0, 64);
    const Enhancement e = build_enhancement(sample_white_noise(g, 5), 0.125);
    SolveConfig c = config(0.02, 1e-3);
    c.picard_max_iter = 2;
    c.picard_tol = 1e-14;
    try {
        solve_transformed(e, gaussian_bump(g, 0.25), c);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& err) {
        CHECK(err.residuals().size() == 2);
        CHECK(err.residuals()[1] < err.residuals()[0]);
    }
}

TEST_CASE("picard_map rejects a foreign mesh") {
    const Grid g(2.0, 16);
    SpaceTimeField v(g);
    v.push(0.5e-3, Field(g));
    const Field z(g);
    CHECK_THROWS_AS(picard_map(v, z, z, z, z, config(0.01, 1e-3)), GridMismatch);
}

TEST_CASE("bilinear interpolation is exact on bilinear functions") {
    const Grid g(2.0, 32);
    const Field f = Field::from_function(g, [](Point x) { return 1.0 + 2.0 * x.x1 - x.x2 + 0.5 * x.x1 * x.x2; });
    for (Point p : {Point{0.013, -0.4}, Point{1.21, 0.77}, Point{-1.9, 1.3}}) {
        CHECK(interpolate(f, p) == doctest::Approx(1.0 + 2.0 * p.x1 - p.x2 + 0.5 * p.x1 * p.x2));
    }
}

TEST_CASE("Feynman-Kac reproduces the heat flow without potential") {
    const Grid g(2.0, 128);
    const double s2 = 0.0625, t = 0.02;
    const FeynmanKacResult r =
        feynman_kac(Field(g), 0.0, heat_gaussian(g, s2, 0.0), t, Point{0.0, 0.0}, 20000, 1e-3, 9);
    const double exact = s2 / (s2 + 2.0 * t);
    CHECK(std::abs(r.mean - exact) < 4.0 * r.std_error + 1e-3);
    CHECK(r.exits == 0);
    CHECK_FALSE(r.warned);
    CHECK_THROWS_AS(feynman_kac(Field(g), 0.0, Field(g), t, Point{1.99, 0.0}, 100, 1e-3), InvalidArgument);
}

TEST_CASE("Feynman-Kac is deterministic per seed") {
    const Grid g(2.0, 64);
    const Field xi = mollify(sample_white_noise(g, 2), MollifierSpec{0.125});
    const Field u0 = gaussian_bump(g, 0.5);
    const auto a = feynman_kac(xi, 0.3, u0, 0.01, Point{}, 500, 1e-3, 4);
    const auto b = feynman_kac(xi, 0.3, u0, 0.01, Point{}, 500, 1e-3, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("weight transfer ratio respects its bound") {
    const Grid g(8.0, 128);
    for (double a : {0.01, 0.04})
        for (double s : {0.0, 0.3})
            for (double t : {0.31, 0.5, 1.0, 3.0}) {
                if (!(t > s)) continue;
                CHECK(weight_transfer_ratio(g, a, 0.5, s, t) <= weight_transfer_bound(a, s, t) * (1 + 1e-12));
            }
    CHECK_THROWS_AS(weight_transfer_bound(0.04, 0.5, 0.5), InvalidArgument);
}

TEST_CASE("spacetime norm scaling and guards") {
    const Grid g(2.0, 32);
    SpaceTimeField v(g);
    CHECK_THROWS_AS(spacetime_norm(v, 1.2, 0.0, 1.0, 0.1), InvalidArgument);
    v.push(0.5, Field(g, 2.0));
    // Constant field: Hölder parts vanish, the sup part is 2 / e_{ell+t}(x) maximised at x = 0.
    const double expected = std::pow(0.5, 0.9) * 2.0 * std::exp(-0.5) * 1.0;
    CHECK(spacetime_norm(v, 1.2, 0.0, 1.0, 0.1) == doctest::Approx(expected));
}

TEST_CASE("trajectory export") {
    const Grid g(2.0, 16);
    const SpaceTimeField u = solve_direct(Field(g), 0.0, Field(g, 1.0), config(0.003, 1e-3));
    const auto dir = std::filesystem::temp_directory_path() / "pam_traj_export";
    std::filesystem::remove_all(dir);
    write_trajectory(dir, u, config(0.003, 1e-3));
    CHECK(std::filesystem::exists(dir / "manifest.txt"));
    CHECK(std::filesystem::exists(dir / "frame_00002.pamf"));
    std::filesystem::remove_all(dir);
}
