#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pam/kernels.hpp"
#include "pam/solver.hpp"

namespace pam {

enum class CheckStatus { pass, fail, low_power };

const char* status_name(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::fail;
    double measured = 0.0;
    double lower = 0.0;     // acceptance band for measured
    double upper = 0.0;
    std::string detail;
    std::vector<std::pair<std::string, double>> values;   // supporting numbers

    bool passed() const { return status != CheckStatus::fail; }
};

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count);

// Initial condition used by the solver checks: exp(-|x|^2 / (2 sigma^2)).
Field gaussian_bump(const Grid& grid, double sigma);

// u_{C=0} = e^{C t} u_{C} framewise; error relative to each frame's sup.
struct RenormIdentityParams {
    double L = 2.0;
    std::size_t n = 512;
    double epsilon = 0.0625;
    std::uint64_t seed = 1;
    double T = 0.2;
    double dt = 1e-3;
    double sigma = 0.25;
    double tolerance = 1e-10;
};
CheckResult check_renormalisation_identity(const RenormIdentityParams& p);

// Linear fit of C_eps against log(1/eps) and successive differences.
struct CEpsilonParams {
    double L = 2.0;
    std::size_t n = 2048;
    std::vector<double> ladder{0.125, 0.0625, 0.03125, 0.015625};
    double rel_tolerance = 0.05;
};
CheckResult check_c_epsilon_divergence(const CEpsilonParams& p);

// Monte Carlo |grad Y(0)|^2 against C_eps and Var Z(eta^lambda) against the quadrature.
struct MonteCarloParams {
    double L = 2.0;
    std::size_t n = 256;
    double epsilon = 0.0625;
    double lambda = 0.25;
    std::vector<std::uint64_t> seeds = seed_range(1, 2000);
    double sigmas = 3.0;
};
std::pair<CheckResult, CheckResult> check_monte_carlo(const MonteCarloParams& p);

// Cross-solver agreement, with the error at (dt, n), (dt/2, n) and (dt, 2n).
struct TransformParams {
    double L = 2.0;
    std::size_t n = 512;
    double epsilon = 0.0625;
    std::uint64_t seed = 7;
    double T = 0.1;
    double dt = 1e-3;
    double sigma = 0.25;
    double tolerance = 1e-3;
    bool refine = true;
    SolveConfig solver = [] {
        SolveConfig c;
        c.picard_window = 25;
        c.quadrature = Quadrature::trapezoid;
        c.split_substeps = 10;
        return c;
    }();
};
CheckResult check_transform_consistency(const TransformParams& p);

struct FeynmanKacParams {
    double L = 2.0;
    std::size_t n = 512;
    double epsilon = 0.125;
    std::uint64_t seed = 3;
    double t = 0.05;
    std::size_t walkers = 100000;
    double dt_walk = 1e-4;
    double dt = 5e-4;
    std::size_t split_substeps = 4;
    double sigma = 0.5;
    double sigmas = 3.0;
};
CheckResult check_feynman_kac(const FeynmanKacParams& p);

// Per-level variance of wavelet coefficients of white noise.
struct IsometryParams {
    double L = 8.0;
    std::size_t n = 512;
    std::vector<std::uint64_t> seeds = seed_range(1, 200);
    double tolerance = 0.05;
    // Widen the band to 3 standard errors when the sample is small.
    bool statistical_floor = false;
};
CheckResult check_wavelet_isometry(const IsometryParams& p);

// Seed-mean regularity exponents of xi, xi_eps, Y and grad Y.
struct RegularityParams {
    double L = 8.0;
    std::size_t n = 1024;
    double epsilon = 0.03125;
    std::vector<std::uint64_t> seeds = seed_range(1, 50);
    int min_level = 0;
    int max_level = -1;
    double a = 0.04;
};
CheckResult check_regularity_ladder(const RegularityParams& p);

// Log-log slope of ||e^{t Delta} xi_eps||_{sup, e_ell} against t.
struct SmoothingParams {
    double L = 4.0;
    std::size_t n = 1024;
    double epsilon = 0.015625;
    std::vector<double> times{1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16};
    std::vector<std::uint64_t> seeds = seed_range(1, 4);
    double kappa = 0.1;
    double ell = 0.0;
    double rel_tolerance = 0.15;
};
CheckResult check_heat_smoothing(const SmoothingParams& p);

// d(eps) = interior weighted sup distance of u_eps and u_{eps/2} at time T.
struct CauchyParams {
    double L = 2.0;
    std::size_t n = 256;
    std::vector<double> ladder{0.25, 0.125, 0.0625, 0.03125};
    std::vector<std::uint64_t> seeds = seed_range(1, 5);
    double T = 0.2;
    double dt = 1e-3;
    // Strang substeps per step: at eps = 1/32 one substep leaves a splitting error larger than d(eps).
    std::size_t split_substeps = 8;
    double sigma = 0.25;
    double ell = 0.0;
};
CheckResult check_epsilon_cauchy(const CauchyParams& p);

// ||f g||_{-kappa, p_a e_ell} / (||f||_{-kappa, p_a} ||g||_{1+2kappa, e_ell}) over pairs and grids.
struct YoungParams {
    double L = 4.0;
    std::vector<std::size_t> resolutions{256, 512};
    double epsilon = 0.125;
    std::size_t rough = 10;
    std::size_t smooth = 10;
    double kappa = 0.1;
    double a = 0.04;
    double ell = 0.5;
    double max_spread = 4.0;
};
CheckResult check_young_product(const YoungParams& p);

// Closed-form values of G and F plus the discrete Laplacian consistency of G.
struct GreenCheckParams {
    double L = 2.0;
    std::vector<std::size_t> resolutions{128, 256};
    std::optional<Cutoff> cutoff;     // fault-injection hook
};
CheckResult check_green_kernel(const GreenCheckParams& p);

}  // namespace pam
