#pragma once

#include <cstdint>

#include "pam/lattice.hpp"

namespace pam {

// Cell-average sample of spatial white noise: node values are i.i.d.
// N(0, 1/h^2), so that sum_x xi(x) phi(x) h^2 has variance ~ ||phi||^2.
//
// Samples are generated by dyadic refinement from a single cell covering the
// box: each refinement splits a cell into four and adds three Haar details
// drawn from a counter-based stream keyed by (seed, level, parent). The same
// seed on a grid with 2n nodes per axis (same L) therefore block-averages to
// exactly the n-node sample, so grid-refinement studies see the same noise.
struct NoiseSample {
    Field field;
    std::uint64_t seed;
};

NoiseSample sample_white_noise(const Grid& grid, std::uint64_t seed);

// Standard bump rho(x) = c exp(-1/(1-|x|^2)) on the unit disc with c making
// the integral 1, rescaled as rho_eps(x) = eps^-2 rho(x/eps).
struct MollifierSpec {
    double epsilon;
};

// exp(-1/(1-r^2)) for r < 1, 0 otherwise (no normalisation).
double bump_unnormalised(double r);
// Integral of bump_unnormalised over R^2.
double bump_mass();
// Normalised profile rho(r).
double bump_profile(double r);
// ||rho||_{L^2}^2 by quadrature.
double bump_l2_squared();

// rho_eps tabulated on grid nodes around the origin, rescaled so that its
// discrete sum times h^2 is exactly 1. Throws ResolutionError if eps < 2h.
Field tabulate_mollifier(const Grid& grid, double epsilon);

// The scaled bump used as a test function: lambda^-2 rho(x / lambda), same
// discrete normalisation as the mollifier.
Field tabulate_test_bump(const Grid& grid, double lambda);

// xi_eps = rho_eps * xi (zero padded). Throws ResolutionError if eps < 2h.
Field mollify(const NoiseSample& xi, const MollifierSpec& m);
Field mollify(const Field& f, const MollifierSpec& m);

}  // namespace pam
