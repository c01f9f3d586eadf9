#include "pam/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pam/error.hpp"

namespace pam {

namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

}  // namespace

Cutoff Cutoff::quintic() {
    auto inside = [](double r) { return r > 0.5 && r < 1.0; };
    return Cutoff{
        "quintic-smoothstep",
        [](double r) { return r <= 0.5 ? 1.0 : (r >= 1.0 ? 0.0 : 1.0 - smoothstep(2.0 * r - 1.0)); },
        [inside](double r) { return inside(r) ? -2.0 * smoothstep_d1(2.0 * r - 1.0) : 0.0; },
        [inside](double r) { return inside(r) ? -4.0 * smoothstep_d2(2.0 * r - 1.0) : 0.0; },
    };
}

double green_radial(const Cutoff& chi, double r) { return -kInv2Pi * std::log(r) * chi.value(r); }

double green_radial_derivative(const Cutoff& chi, double r) {
    return -kInv2Pi * (chi.value(r) / r + std::log(r) * chi.d1(r));
}

double green_remainder_radial(const Cutoff& chi, double r) {
    const double c1 = chi.d1(r);
    const double c2 = chi.d2(r);
    if (c1 == 0.0 && c2 == 0.0) return 0.0;
    return -kInv2Pi * (2.0 * c1 / r + std::log(r) * (c2 + c1 / r));
}

GreenKernel build_green(const Grid& grid, const Cutoff& cutoff) {
    const double h = grid.spacing();
    if (h > 0.125) {
        throw ResolutionError("Green kernel needs h <= 1/8 to resolve |x| = 1/2, got h = " +
                              std::to_string(h));
    }
    GreenKernel k{grid, Field(grid), Field(grid), Field(grid), Field(grid), cutoff};
    const auto n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Point x = grid.node(i, j);
            const double r = x.norm();
            if (r == 0.0) continue;
            k.G(i, j) = green_radial(cutoff, r);
            const double dg = green_radial_derivative(cutoff, r);
            k.G1(i, j) = dg * x.x1 / r;
            k.G2(i, j) = dg * x.x2 / r;
            k.F(i, j) = green_remainder_radial(cutoff, r);
        }
    }
    const auto o = grid.origin_index();
    k.G(o, o) = -kInv2Pi * std::log(0.5 * h);
    return k;
}

Field discrete_laplacian(const Field& f) {
    const auto& g = f.grid();
    const auto n = g.size();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    Field out(g);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        for (std::size_t j = 1; j + 1 < n; ++j) {
            out(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) *
                        inv_h2;
        }
    }
    return out;
}

KernelOrderNorm kernel_order_norm(const Field& K, double zeta, int m) {
    if (m < 0 || m > 2) throw InvalidArgument("kernel order norm supports m in {0,1,2}");
    const auto& g = K.grid();
    const auto n = g.size();
    const double h = g.spacing();
    const double min_radius = 2.0 * h * (1.0 - 1e-12);
    const std::size_t lo = m == 0 ? 0 : 1;
    const std::size_t hi = m == 0 ? n : n - 1;
    double best = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = lo; j < hi; ++j) {
            const double r = g.node(i, j).norm();
            if (r < min_radius) continue;
            double value = std::pow(r, -zeta) * std::abs(K(i, j));
            if (m >= 1) {
                const double w1 = std::pow(r, 1.0 - zeta) / (2.0 * h);
                value = std::max(value, w1 * std::abs(K(i + 1, j) - K(i - 1, j)));
                value = std::max(value, w1 * std::abs(K(i, j + 1) - K(i, j - 1)));
            }
            if (m >= 2) {
                const double w2 = std::pow(r, 2.0 - zeta) / (h * h);
                value = std::max(value, w2 * std::abs(K(i + 1, j) - 2.0 * K(i, j) + K(i - 1, j)));
                value = std::max(value, w2 * std::abs(K(i, j + 1) - 2.0 * K(i, j) + K(i, j - 1)));
                value = std::max(value, 0.25 * w2 *
                                            std::abs(K(i + 1, j + 1) - K(i + 1, j - 1) -
                                                     K(i - 1, j + 1) + K(i - 1, j - 1)));
            }
            best = std::max(best, value);
        }
    }
    return {zeta, m, best};
}

}  // namespace pam
