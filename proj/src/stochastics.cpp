#include "pam/stochastics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pam/error.hpp"
#include "pam/rng.hpp"
#include "pam/spectral.hpp"

namespace pam {

NoiseSample sample_white_noise(const Grid& grid, std::uint64_t seed) {
    const CounterRng rng{seed};
    const std::size_t n = grid.size();
    const int levels = std::countr_zero(n);
    const double box = 2.0 * grid.half_width();

    std::vector<double> current{rng.normal(0, 0) / box};
    for (int level = 1; level <= levels; ++level) {
        const std::size_t parent_side = std::size_t{1} << (level - 1);
        const std::size_t side = parent_side * 2;
        const double detail_scale = 0.5 * static_cast<double>(side) / box;
        std::vector<double> next(side * side);
        const auto stream = static_cast<std::uint64_t>(level);
        for (std::size_t p = 0; p < parent_side; ++p) {
            for (std::size_t q = 0; q < parent_side; ++q) {
                const std::uint64_t parent = p * parent_side + q;
                const auto [z1, z2] = rng.normal_pair(stream, 2 * parent);
                const double z3 = rng.normal(stream, 2 * parent + 1);
                const double base = current[parent];
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        const double h1 = a == 0 ? 1.0 : -1.0;
                        const double h2 = b == 0 ? 1.0 : -1.0;
                        next[(2 * p + a) * side + 2 * q + b] =
                            base + detail_scale * (z1 * h1 + z2 * h2 + z3 * h1 * h2);
                    }
                }
            }
        }
        current = std::move(next);
    }
    return {Field(grid, std::move(current)), seed};
}

double bump_unnormalised(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double bump_mass() {
    static const double mass = [] {
        using boost::math::quadrature::gauss_kronrod;
        const double radial = gauss_kronrod<double, 61>::integrate(
            [](double r) { return r * bump_unnormalised(r); }, 0.0, 1.0, 15, 1e-14);
        return 2.0 * std::numbers::pi * radial;
    }();
    return mass;
}

double bump_profile(double r) { return bump_unnormalised(r) / bump_mass(); }

double bump_l2_squared() {
    static const double value = [] {
        using boost::math::quadrature::gauss_kronrod;
        const double radial = gauss_kronrod<double, 61>::integrate(
            [](double r) {
                const double v = bump_profile(r);
                return r * v * v;
            },
            0.0, 1.0, 15, 1e-14);
        return 2.0 * std::numbers::pi * radial;
    }();
    return value;
}

namespace {

Field tabulate_scaled_bump(const Grid& grid, double scale) {
    Field table = Field::from_function(grid, [scale](Point x) {
        return bump_profile(x.norm() / scale) / (scale * scale);
    });
    const double h = grid.spacing();
    double mass = 0.0;
    for (double v : table.values()) mass += v;
    table *= 1.0 / (mass * h * h);
    return table;
}

void require_resolved(const Grid& grid, double epsilon, const char* what) {
    if (!(epsilon >= 2.0 * grid.spacing())) {
        throw ResolutionError(std::string(what) + " under-resolved: scale " +
                              std::to_string(epsilon) + " < 2h = " +
                              std::to_string(2.0 * grid.spacing()));
    }
}

}  // namespace

Field tabulate_mollifier(const Grid& grid, double epsilon) {
    require_resolved(grid, epsilon, "mollifier");
    return tabulate_scaled_bump(grid, epsilon);
}

Field tabulate_test_bump(const Grid& grid, double lambda) {
    require_resolved(grid, lambda, "test function");
    return tabulate_scaled_bump(grid, lambda);
}

Field mollify(const Field& f, const MollifierSpec& m) {
    return convolve(tabulate_mollifier(f.grid(), m.epsilon), f);
}

Field mollify(const NoiseSample& xi, const MollifierSpec& m) { return mollify(xi.field, m); }

}  // namespace pam
