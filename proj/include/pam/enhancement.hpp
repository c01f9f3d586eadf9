#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "pam/kernels.hpp"
#include "pam/lattice.hpp"
#include "pam/spectral.hpp"
#include "pam/stochastics.hpp"

namespace pam {

// Stochastic data of the transformed equation at mollification scale epsilon:
//   Y = G * xi_eps,  gradY_i = (D_i G) * xi_eps,  Z = |gradY|^2 - C_eps,  F_xi = F * xi_eps.
struct Enhancement {
    double epsilon;
    Field xi_eps;
    Field Y;
    std::array<Field, 2> gradY;
    Field Z;
    double C_eps;
    Field F_xi;
    std::uint64_t seed;
};

// Reusable kernel spectra for building many enhancements on one grid at one epsilon.
class EnhancementBuilder {
public:
    EnhancementBuilder(const Grid& grid, double epsilon, const Cutoff& cutoff = Cutoff::quintic());

    const Grid& grid() const { return grid_; }
    double epsilon() const { return epsilon_; }
    double c_epsilon() const { return c_eps_; }
    const GreenKernel& green() const { return green_; }

    Enhancement build(const NoiseSample& xi) const;
    // Same pipeline on an arbitrary noise field (e.g. an injected zero field).
    Enhancement build_from_field(const Field& xi, std::uint64_t seed = 0) const;

private:
    Grid grid_;
    double epsilon_;
    GreenKernel green_;
    SpectralKernel mollifier_;
    SpectralKernel g_;
    SpectralKernel g1_;
    SpectralKernel g2_;
    SpectralKernel f_;
    double c_eps_;
};

Enhancement build_enhancement(const NoiseSample& xi, double epsilon);

// C_eps = sum_i ||(D_i G) * rho_eps||^2_{L^2} by grid quadrature, which equals
// E|grad Y_eps(x)|^2 at interior nodes exactly for the discrete noise.
double c_epsilon_quadrature(double epsilon, const Grid& grid);

// Exact second moment of Z_eps(eta) for the discrete noise:
//   E[Z_eps(eta)^2] = 2 sum_{i,j} \iint eta(x) eta(x') [(D_i G_eps) * (D_j G_eps)(x - x')]^2,
// with G_eps = G * rho_eps (epsilon > 0) or G itself (epsilon = 0).
double z_covariance(const Field& eta, double epsilon);

// z_covariance with eta the bump rescaled to radius lambda. Requires lambda >= 4h.
double z_covariance_quadrature(double lambda, double epsilon, const Grid& grid);

// Directory of PAMF fields plus manifest.txt (epsilon, C_eps, seed, grid).
void write_enhancement(const std::filesystem::path& dir, const Enhancement& e);
Enhancement read_enhancement(const std::filesystem::path& dir);

}  // namespace pam
