#pragma once

#include <functional>
#include <string>

#include "pam/lattice.hpp"
#include "pam/spectral.hpp"

namespace pam {

// Radial cutoff chi with chi = 1 on [0, 1/2] and chi = 0 on [1, inf), given
// with its first two radial derivatives.
struct Cutoff {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;

    // 1 - S(2r - 1) with the quintic smoothstep S(s) = 10 s^3 - 15 s^4 + 6 s^5 (C^2).
    static Cutoff quintic();
};

// Cut-off Green function of the Laplacian and its companions:
//   G(x)  = -log|x| chi(|x|) / (2 pi),     grad G = g'(r) x / r,
//   F(x)  = Delta G away from the origin = -(1/2pi) [2 chi'/r + log r (chi'' + chi'/r)],
// so that Delta G = -delta_0 + F with F supported in 1/2 <= |x| <= 1 (-log|x|/2pi is
// the fundamental solution of -Delta).
// The origin node stores G(0) = -log(h/2)/(2 pi) and grad G(0) = 0.
struct GreenKernel {
    Grid grid;
    Field G;
    Field G1;  // D_{x1} G
    Field G2;  // D_{x2} G
    Field F;
    Cutoff cutoff;

    const Field& gradient(int axis) const { return axis == 0 ? G1 : G2; }
};

// Radial closed forms (r > 0).
double green_radial(const Cutoff& chi, double r);
double green_radial_derivative(const Cutoff& chi, double r);
double green_remainder_radial(const Cutoff& chi, double r);

// Tabulates the kernel; throws ResolutionError unless h <= 1/8.
GreenKernel build_green(const Grid& grid, const Cutoff& cutoff = Cutoff::quintic());

// Five-point discrete Laplacian (edges left at zero).
Field discrete_laplacian(const Field& f);

struct KernelOrderNorm {
    double zeta;
    int m;
    double value;
};

// max_{|k| <= m} sup_{|x| >= 2h} |x|^{|k| - zeta} |D^k K(x)| with centred differences.
KernelOrderNorm kernel_order_norm(const Field& K, double zeta, int m);

}  // namespace pam
